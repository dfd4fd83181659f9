# messages module
# ----------------------------------------
import os
import json

# maximum number of messages kept in memory
LIMIT = 19


class MessageStore:
    def __init__(self, path):
        self.path = path  # directory holding the message files
        self.items = []  # loaded messages

    def load(self):
        # read every message file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty message
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest message
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new message
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each message to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the messages by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching message
    # return None when no message matches
    return None


def clear(store):
    # clear the message store
    store.items = []
    # store.items.clear()
