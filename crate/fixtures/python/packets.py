# packets module
# ----------------------------------------
import os
import json

# maximum number of packets kept in memory
LIMIT = 14


class PacketStore:
    def __init__(self, path):
        self.path = path  # directory holding the packet files
        self.items = []  # loaded packets

    def load(self):
        # read every packet file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty packet
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest packet
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new packet
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each packet to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the packets by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching packet
    # return None when no packet matches
    return None


def clear(store):
    # clear the packet store
    store.items = []
    # store.items.clear()
