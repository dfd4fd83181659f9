class Branches {
    void check(int x) {
        if (x > 0) {
            // only positive values reach this block
            x--;
            report(x);
        }
    }
}
