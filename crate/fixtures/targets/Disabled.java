class Disabled {
    void log(String x) {
        //System.out.println(x);
        send(x);
    }
}
