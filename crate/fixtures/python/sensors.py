# sensors module
# ----------------------------------------
import os
import json

# maximum number of sensors kept in memory
LIMIT = 15


class SensorStore:
    def __init__(self, path):
        self.path = path  # directory holding the sensor files
        self.items = []  # loaded sensors

    def load(self):
        # read every sensor file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty sensor
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest sensor
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new sensor
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each sensor to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the sensors by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching sensor
    # return None when no sensor matches
    return None


def clear(store):
    # clear the sensor store
    store.items = []
    # store.items.clear()
