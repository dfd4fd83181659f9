# accounts module
# ----------------------------------------
import os
import json

# maximum number of accounts kept in memory
LIMIT = 20


class AccountStore:
    def __init__(self, path):
        self.path = path  # directory holding the account files
        self.items = []  # loaded accounts

    def load(self):
        # read every account file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty account
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest account
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new account
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each account to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the accounts by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching account
    # return None when no account matches
    return None


def clear(store):
    # clear the account store
    store.items = []
    # store.items.clear()
