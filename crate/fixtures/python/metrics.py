# metrics module
# ----------------------------------------
import os
import json

# maximum number of metrics kept in memory
LIMIT = 28


class MetricStore:
    def __init__(self, path):
        self.path = path  # directory holding the metric files
        self.items = []  # loaded metrics

    def load(self):
        # read every metric file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty metric
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest metric
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new metric
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each metric to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the metrics by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching metric
    # return None when no metric matches
    return None


def clear(store):
    # clear the metric store
    store.items = []
    # store.items.clear()
