# profiles module
# ----------------------------------------
import os
import json

# maximum number of profiles kept in memory
LIMIT = 21


class ProfileStore:
    def __init__(self, path):
        self.path = path  # directory holding the profile files
        self.items = []  # loaded profiles

    def load(self):
        # read every profile file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty profile
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest profile
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new profile
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each profile to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the profiles by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching profile
    # return None when no profile matches
    return None


def clear(store):
    # clear the profile store
    store.items = []
    # store.items.clear()
