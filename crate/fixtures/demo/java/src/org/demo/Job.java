package org.demo;

/**
 * One unit of work.
 */
public class Job {
    private final String name; // display name
    private boolean cancelled;
    private int attempts = 0; // number of attempts so far

    public Job(String name) {
        // name must not be null
        this.name = name;
    }

    public void start() {
        // create a worker thread for the job
        Thread t = new Thread(this::run);
        t.start(); // Let the job finish.
    }

    public void cancel() {
        // set the cancelled flag
        cancelled = true;
    }

    private void run() {
        // if the job was cancelled, skip it
        if (cancelled) {
            return;
        }
        attempts++;
        // compute the result and store it in the cache
        Cache.put(name, compute());
    }

    private int compute() {
        int result = 0;
        // add the length of the name to the result
        for (char c : name.toCharArray()) {
            result += c;
        }
        //result = result * 31;
        return result;
    }

    /* FIXME: attempts is never reset */
    public int attempts() {
        return attempts;
    }
}
