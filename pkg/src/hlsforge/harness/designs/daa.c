void scale_shift(int src[64], int dst[64], int k) {
    int *buf = new int[64];
    prep: for (int i = 0; i < 64; i++) {
        buf[i] = src[i] * k;
    }
    out: for (int i = 0; i < 64; i++) {
        dst[i] = buf[i] + 1;
    }
}
