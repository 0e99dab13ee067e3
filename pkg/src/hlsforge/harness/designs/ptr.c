void gather(int a[16], int out[16]) {
    int *cursor;
    run: for (int i = 0; i < 16; i++) {
        out[i] = a[i] + *cursor;
    }
}
