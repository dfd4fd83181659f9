# tickets module
# ----------------------------------------
import os
import json

# maximum number of tickets kept in memory
LIMIT = 16


class TicketStore:
    def __init__(self, path):
        self.path = path  # directory holding the ticket files
        self.items = []  # loaded tickets

    def load(self):
        # read every ticket file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty ticket
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest ticket
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new ticket
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each ticket to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the tickets by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching ticket
    # return None when no ticket matches
    return None


def clear(store):
    # clear the ticket store
    store.items = []
    # store.items.clear()
