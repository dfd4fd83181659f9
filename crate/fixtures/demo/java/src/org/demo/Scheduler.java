package org.demo;

import java.util.List;

/**
 * Runs queued jobs on a fixed schedule.
 */
public class Scheduler {
    private final JobQueue queue = new JobQueue();
    private long interval = 1000; // delay between runs in milliseconds

    public void submit(List<Job> batch) {
        // add each job of the batch to the queue
        for (Job job : batch) {
            queue.add(job);
        }
    }

    public void tick() {
        Job job = queue.next();
        // if no job is waiting, return early
        if (job == null) {
            return;
        }
        job.start(); // start the next job
    }

    public void setInterval(long interval) {
        // interval must be positive
        if (interval <= 0) {
            throw new IllegalArgumentException("interval");
        }
        this.interval = interval; // update the interval
    }

    public void shutdown() {
        // XXX: jobs already running are not stopped
        queue.drain();
        // update the interval to zero
        interval = 0;
    }

    // call tick() from a single thread only
    public long interval() {
        return interval;
    }
}
