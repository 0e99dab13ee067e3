void normalize(int v[32], int out[32]) {
    run: for (int i = 0; i < 32; i++) {
        out[i] = clamp_byte(v[i]);
    }
}
