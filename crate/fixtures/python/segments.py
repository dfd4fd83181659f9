# segments module
# ----------------------------------------
import os
import json

# maximum number of segments kept in memory
LIMIT = 27


class SegmentStore:
    def __init__(self, path):
        self.path = path  # directory holding the segment files
        self.items = []  # loaded segments

    def load(self):
        # read every segment file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty segment
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest segment
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new segment
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each segment to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the segments by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching segment
    # return None when no segment matches
    return None


def clear(store):
    # clear the segment store
    store.items = []
    # store.items.clear()
