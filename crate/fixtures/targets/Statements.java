class Statements {
    void run(Job job) {
        job.start(); // Let the job finish.
        job.join();
    }
}
