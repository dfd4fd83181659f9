# widgets module
# ----------------------------------------
import os
import json

# maximum number of widgets kept in memory
LIMIT = 29


class WidgetStore:
    def __init__(self, path):
        self.path = path  # directory holding the widget files
        self.items = []  # loaded widgets

    def load(self):
        # read every widget file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty widget
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest widget
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new widget
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each widget to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the widgets by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching widget
    # return None when no widget matches
    return None


def clear(store):
    # clear the widget store
    store.items = []
    # store.items.clear()
