# uploads module
# ----------------------------------------
import os
import json

# maximum number of uploads kept in memory
LIMIT = 22


class UploadStore:
    def __init__(self, path):
        self.path = path  # directory holding the upload files
        self.items = []  # loaded uploads

    def load(self):
        # read every upload file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty upload
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest upload
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new upload
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each upload to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the uploads by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching upload
    # return None when no upload matches
    return None


def clear(store):
    # clear the upload store
    store.items = []
    # store.items.clear()
