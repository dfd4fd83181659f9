# batchs module
# ----------------------------------------
import os
import json

# maximum number of batchs kept in memory
LIMIT = 25


class BatchStore:
    def __init__(self, path):
        self.path = path  # directory holding the batch files
        self.items = []  # loaded batchs

    def load(self):
        # read every batch file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty batch
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest batch
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new batch
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each batch to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the batchs by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching batch
    # return None when no batch matches
    return None


def clear(store):
    # clear the batch store
    store.items = []
    # store.items.clear()
