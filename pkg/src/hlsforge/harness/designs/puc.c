void triple(int v[64]) {
    run: for (int i = 0; i < 64; i++) {
        #pragma HLS PIPELINE
        #pragma HLS UNROLL
        v[i] = v[i] * 3;
    }
}
