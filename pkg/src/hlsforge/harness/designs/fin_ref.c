void window_sum(int src[32], int dst[32]) {
    outer: for (int i = 0; i < 32; i++) {
        dst[i] = 0;
        inner: for (int j = 0; j < 32; j++) {
            if (j <= i) {
                dst[i] = dst[i] + src[j];
            }
        }
    }
}
