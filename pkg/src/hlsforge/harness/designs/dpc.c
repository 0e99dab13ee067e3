void stages(int data[32], int tmp[32]) {
    #pragma HLS DATAFLOW
    produce: for (int i = 0; i < 32; i++) {
        tmp[i] = data[i] * 2;
    }
    consume: for (int i = 0; i < 32; i++) {
        data[i] = tmp[i] + data[i];
    }
}
