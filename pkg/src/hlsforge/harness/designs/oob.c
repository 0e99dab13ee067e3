void smooth(int src[32], int dst[32]) {
    run: for (int i = 0; i < 32; i++) {
        dst[i] = (src[i] + src[i + 1]) / 2;
    }
}
