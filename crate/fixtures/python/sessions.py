# sessions module
# ----------------------------------------
import os
import json

# maximum number of sessions kept in memory
LIMIT = 12


class SessionStore:
    def __init__(self, path):
        self.path = path  # directory holding the session files
        self.items = []  # loaded sessions

    def load(self):
        # read every session file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty session
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest session
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new session
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each session to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the sessions by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching session
    # return None when no session matches
    return None


def clear(store):
    # clear the session store
    store.items = []
    # store.items.clear()
