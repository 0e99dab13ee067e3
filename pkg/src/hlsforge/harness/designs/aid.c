void row_sum(int m[8][8], int out[8]) {
    #pragma HLS ARRAY_PARTITION variable=m cyclic factor=2 dim=3
    rows: for (int i = 0; i < 8; i++) {
        out[i] = 0;
        cols: for (int j = 0; j < 8; j++) {
            out[i] = out[i] + m[i][j];
        }
    }
}
