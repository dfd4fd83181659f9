# orders module
# ----------------------------------------
import os
import json

# maximum number of orders kept in memory
LIMIT = 10


class OrderStore:
    def __init__(self, path):
        self.path = path  # directory holding the order files
        self.items = []  # loaded orders

    def load(self):
        # read every order file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty order
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest order
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new order
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each order to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the orders by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching order
    # return None when no order matches
    return None


def clear(store):
    # clear the order store
    store.items = []
    # store.items.clear()
