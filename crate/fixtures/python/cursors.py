# cursors module
# ----------------------------------------
import os
import json

# maximum number of cursors kept in memory
LIMIT = 23


class CursorStore:
    def __init__(self, path):
        self.path = path  # directory holding the cursor files
        self.items = []  # loaded cursors

    def load(self):
        # read every cursor file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty cursor
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest cursor
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new cursor
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each cursor to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the cursors by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching cursor
    # return None when no cursor matches
    return None


def clear(store):
    # clear the cursor store
    store.items = []
    # store.items.clear()
