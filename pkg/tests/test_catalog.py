import json

import pytest

from coverlab import catalog
from coverlab.catalog import CatalogEntry, search_squarefree_cover, squarefree_divisors, verify_entry
from coverlab.crt import APSystem, factor_squarefree, system_to_instance
from coverlab.errors import SquarefreeViolationError, TooLargeError, UnknownNameError
from coverlab.exact import ap_is_covering
from coverlab.model import Instance


def test_named_entries():
    e = catalog.get("erdos-12")
    assert e.kind == "ap-system" and e.expected == "covered"
    assert e.payload == APSystem.build([(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)])
    e = catalog.get("square-2x2-noncover")
    assert e.payload == Instance.build((2, 2), [{1: 0}, {2: 0}]) and e.expected == "not-covered"
    e = catalog.get("square-2x2-cover")
    assert e.payload == Instance.build((2, 2), [{1: 0}, {2: 0}, {1: 1, 2: 1}])


def test_listing():
    rows = catalog.list_entries()
    names = [r[0] for r in rows]
    assert names == sorted(names) and len(set(names)) == len(names)
    assert {"erdos-12", "square-2x2-cover", "square-2x2-noncover"} <= set(names)
    for name in names:
        assert catalog.get(name).name == name


def test_every_entry_verifies():
    for name, _, _ in catalog.list_entries():
        assert verify_entry(catalog.get(name))


def test_unknown_name():
    with pytest.raises(UnknownNameError):
        catalog.get("no-such-thing")


def test_erdos_12_rejected_by_crt():
    with pytest.raises(SquarefreeViolationError):
        system_to_instance(catalog.get("erdos-12").payload)


def test_squarefree_divisors():
    assert squarefree_divisors([2, 3, 5]) == [2, 3, 5, 6, 10, 15, 30]


def test_search_small_budgets():
    assert search_squarefree_cover([2]) is None
    assert search_squarefree_cover([2, 3]) is None
    assert search_squarefree_cover([2, 3, 5]) is None


def test_search_210():
    found = search_squarefree_cover([2, 3, 5, 7])
    assert found is not None
    moduli = found.moduli
    assert len(set(moduli)) == len(moduli)
    assert all(210 % d == 0 and d > 1 for d in moduli)
    for d in moduli:
        factor_squarefree(d)
    assert ap_is_covering(found).covered
    assert catalog.get("squarefree-210-cover").payload == found


def test_search_cap():
    with pytest.raises(TooLargeError):
        search_squarefree_cover([2, 3, 5, 7], cap=100)


def test_record_round_trip(tmp_path):
    for name in ("square-2x2-cover", "erdos-12"):
        entry = catalog.get(name)
        catalog.record(entry, tmp_path)
    assert catalog.get("erdos-12", tmp_path) == catalog.get("erdos-12")
    index = json.loads((tmp_path / "index.json").read_text())
    assert set(index) == {"square-2x2-cover", "erdos-12"}


def test_bad_expected_flag_is_caught(tmp_path):
    entry = catalog.get("square-2x2-cover")
    catalog.record(CatalogEntry("lie", entry.kind, entry.payload, "not-covered", "wrong on purpose"), tmp_path)
    with pytest.raises(Exception, match="expected"):
        catalog.get("lie", tmp_path)
