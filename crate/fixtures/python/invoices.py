# invoices module
# ----------------------------------------
import os
import json

# maximum number of invoices kept in memory
LIMIT = 11


class InvoiceStore:
    def __init__(self, path):
        self.path = path  # directory holding the invoice files
        self.items = []  # loaded invoices

    def load(self):
        # read every invoice file from the directory
        for name in sorted(os.listdir(self.path)):
            with open(os.path.join(self.path, name)) as f:
                self.items.append(json.load(f))
        # if nothing was loaded, create an empty invoice
        if not self.items:
            self.items.append({})
        return len(self.items)

    def add(self, item):
        # when the store is full, drop the oldest invoice
        if len(self.items) >= LIMIT:
            self.items.pop(0)
        self.items.append(item)  # append the new invoice
        # print(self.items)

    def total(self):
        total = 0
        # add the size of each invoice to the total
        for item in self.items:
            total += len(item)
        return total


def find(store, key):
    # TODO: index the invoices by key
    for item in store.items:
        if item.get("key") == key:
            return item  # the matching invoice
    # return None when no invoice matches
    return None


def clear(store):
    # clear the invoice store
    store.items = []
    # store.items.clear()
