# channels module
# ----------------------------------------
import os
import json

# maximum number of channels kept in memory
LIMIT = 26


class ChannelStore:
    def __init__(self, path):
        self.path = path  # directory holding the channel files
        self.items = []  # loaded channels

    def load(self):
        # read every channel file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty channel
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest channel
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new channel
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each channel to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the channels by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching channel
    # return None when no channel matches
    return None


def clear(store):
    # clear the channel store
    store.items = []
    # store.items.clear()
