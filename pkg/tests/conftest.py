import json
from pathlib import Path

import pytest

from padiclfc.lfc import working_field
from padiclfc.local_field import LocalField

CATALOG_PATH = (Path(__file__).resolve().parent.parent
                / "src/padiclfc/data/catalog.json")

_field_cache = {}


def catalog_entries():
    with open(CATALOG_PATH) as fh:
        return json.load(fh)["entries"]


def build_field(entry, k):
    key = (entry["label"], k)
    if key not in _field_cache:
        L = LocalField(entry["p"], entry["f"], entry["eis"],
                       2 * entry["e"] + 4)
        _field_cache[key] = working_field(L, k)
    return _field_cache[key]


@pytest.fixture(scope="session")
def catalog():
    return catalog_entries()
