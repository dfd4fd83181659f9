package org.demo;

import java.util.HashMap;
import java.util.Map;

// Author: demo team
// Copyright 2020 demo contributors
public final class Cache {
    private static final Map<String, Integer> VALUES = new HashMap<>(); // cached values by key

    private Cache() {
        // do not instantiate
    }

    /**
     * Stores a value, replacing any earlier one.
     */
    public static void put(String key, int value) {
        // remove the old entry first
        VALUES.remove(key);
        VALUES.put(key, value);
    }

    public static Integer get(String key) {
        // return the cached value or null
        return VALUES.get(key);
    }

    public static void clear() {
        // clear the cache
        VALUES.clear();
        //VALUES = new HashMap<>();
    }

    // ===========================================
    public static int size() {
        int n = VALUES.size(); // current size
        // if there are no values, log a warning
        if (n == 0) {
            warn();
        }
        return n;
    }

    private static void warn() {
        // print a warning to the error stream
        System.err.println("cache is empty");
    }
}
