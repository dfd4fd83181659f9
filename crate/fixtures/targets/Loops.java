class Loops {
    int sum(int[] values) {
        int total = 0;
        // add every value to the total
        for (int v : values) {
            total += v;
        }
        return total;
    }
}
