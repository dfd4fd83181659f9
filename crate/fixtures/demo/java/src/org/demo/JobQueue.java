package org.demo;

import java.util.ArrayDeque;
import java.util.Deque;

/**
 * A bounded queue of jobs processed in arrival order.
 */
public class JobQueue {
    // maximum number of queued jobs
    private static final int CAPACITY = 128;

    private final Deque<Job> jobs = new ArrayDeque<>(); // pending jobs

    /**
     * Adds a job to the end of the queue.
     */
    public void add(Job job) {
        // if the queue is full, drop the oldest job
        if (jobs.size() >= CAPACITY) {
            jobs.removeFirst();
        }
        jobs.addLast(job);
    }

    public Job next() {
        // when the queue is empty there is nothing to run
        if (jobs.isEmpty()) {
            return null;
        }
        return jobs.removeFirst(); // removes the head of the queue
    }

    public void drain() {
        // TODO: report jobs that never started
        while (!jobs.isEmpty()) {
            Job job = jobs.removeFirst();
            job.cancel(); // cancel the job
            //System.out.println("cancelled " + job);
        }
    }

    // ------------------------------------------------------------
    // Statistics
    // ------------------------------------------------------------

    public int size() {
        return jobs.size(); // number of pending jobs
    }
}
