# tokens module
# ----------------------------------------
import os
import json

# maximum number of tokens kept in memory
LIMIT = 24


class TokenStore:
    def __init__(self, path):
        self.path = path  # directory holding the token files
        self.items = []  # loaded tokens

    def load(self):
        # read every token file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty token
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest token
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new token
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each token to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the tokens by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching token
    # return None when no token matches
    return None


def clear(store):
    # clear the token store
    store.items = []
    # store.items.clear()
