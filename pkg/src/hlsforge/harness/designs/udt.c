void count_above(int a[32], int out[1], int t) {
    size_t total = 0;
    scan: for (int i = 0; i < 32; i++) {
        if (a[i] > t) {
            total = total + 1;
        }
    }
    out[0] = total;
}
