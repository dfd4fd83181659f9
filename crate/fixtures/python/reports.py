# reports module
# ----------------------------------------
import os
import json

# maximum number of reports kept in memory
LIMIT = 17


class ReportStore:
    def __init__(self, path):
        self.path = path  # directory holding the report files
        self.items = []  # loaded reports

    def load(self):
        # read every report file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty report
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest report
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new report
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each report to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the reports by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching report
    # return None when no report matches
    return None


def clear(store):
    # clear the report store
    store.items = []
    # store.items.clear()
