# records module
# ----------------------------------------
import os
import json

# maximum number of records kept in memory
LIMIT = 13


class RecordStore:
    def __init__(self, path):
        self.path = path  # directory holding the record files
        self.items = []  # loaded records

    def load(self):
        # read every record file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty record
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest record
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new record
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each record to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the records by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching record
    # return None when no record matches
    return None


def clear(store):
    # clear the record store
    store.items = []
    # store.items.clear()
