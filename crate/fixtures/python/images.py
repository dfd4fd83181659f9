# images module
# ----------------------------------------
import os
import json

# maximum number of images kept in memory
LIMIT = 18


class ImageStore:
    def __init__(self, path):
        self.path = path  # directory holding the image files
        self.items = []  # loaded images

    def load(self):
        # read every image file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty image
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest image
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new image
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each image to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the images by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching image
    # return None when no image matches
    return None


def clear(store):
    # clear the image store
    store.items = []
    # store.items.clear()
