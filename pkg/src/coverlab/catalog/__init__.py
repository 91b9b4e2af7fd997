"""Named example systems and instances, shipped as JSON under ``data/``.

``data/index.json`` maps each name to its kind, expected outcome and a
provenance note; ``data/<name>.json`` holds the payload in the same format the
CLI reads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence, Union

from ..crt import APSystem
from ..errors import InvalidInputError, TooLargeError, UnknownNameError
from ..exact import ap_is_covering, default_cap, is_covering
from ..model import Instance

DATA_DIR = Path(__file__).parent / "data"
KINDS = ("ap-system", "hyperplane-instance", "size-sequence")
EXPECTED = ("covered", "not-covered", "unknown")

Payload = Union[APSystem, Instance, tuple]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    payload: Payload
    expected: str
    provenance: str

    def payload_json(self) -> dict:
        if self.kind == "size-sequence":
            return {"sizes": list(self.payload)}
        return self.payload.to_json()


def _parse_payload(kind: str, doc: dict) -> Payload:
    if kind == "ap-system":
        return APSystem.from_json(doc)
    if kind == "hyperplane-instance":
        return Instance.from_json(doc)
    if kind == "size-sequence":
        sizes = tuple(int(s) for s in doc["sizes"])
        if not sizes or min(sizes) < 2:
            raise InvalidInputError("size sequence entries must be >= 2")
        return sizes
    raise InvalidInputError(f"unknown catalog kind {kind!r}")


def verify_entry(entry: CatalogEntry, cap: int | None = None) -> bool:
    """Recheck ``expected`` by brute force; True when there is nothing to check."""
    if entry.expected == "unknown" or entry.kind == "size-sequence":
        return True
    if entry.kind == "ap-system":
        verdict = ap_is_covering(entry.payload, cap)
    else:
        verdict = is_covering(entry.payload, cap)
    return verdict.covered == (entry.expected == "covered")


def _read_index(directory: Path) -> dict:
    with open(directory / "index.json") as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def _load(directory: str) -> dict[str, CatalogEntry]:
    root = Path(directory)
    entries = {}
    for name, meta in _read_index(root).items():
        with open(root / f"{name}.json") as fh:
            payload = _parse_payload(meta["kind"], json.load(fh))
        entry = CatalogEntry(name, meta["kind"], payload, meta["expected"], meta["provenance"])
        if not verify_entry(entry):
            raise InvalidInputError(f"catalog entry {name} does not match its expected flag")
        entries[name] = entry
    return entries


def get(name: str, directory: Path = DATA_DIR) -> CatalogEntry:
    entries = _load(str(directory))
    if name not in entries:
        raise UnknownNameError(f"no catalog entry named {name!r}")
    return entries[name]


def list_entries(directory: Path = DATA_DIR) -> list[tuple[str, str, str]]:
    return [(e.name, e.kind, e.expected) for _, e in sorted(_load(str(directory)).items())]


def record(entry: CatalogEntry, directory: Path = DATA_DIR) -> Path:
    """Write an entry's payload and index line; the in-memory cache is dropped."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    index = _read_index(directory) if (directory / "index.json").exists() else {}
    index[entry.name] = {"kind": entry.kind, "expected": entry.expected, "provenance": entry.provenance}
    path = directory / f"{entry.name}.json"
    path.write_text(json.dumps(entry.payload_json(), sort_keys=True) + "\n")
    (directory / "index.json").write_text(json.dumps(index, indent=2, sort_keys=True) + "\n")
    _load.cache_clear()
    return path


# ---------------------------------------------------------------- search

def squarefree_divisors(primes: Sequence[int]) -> list[int]:
    divs = [1]
    for p in primes:
        divs += [d * p for d in divs]
    return sorted(d for d in divs if d > 1)


def search_squarefree_cover(prime_budget: Sequence[int], cap: int | None = None) -> APSystem | None:
    """Backtracking search for a cover with distinct moduli among the square-free divisors.

    The smallest uncovered residue must lie in some class of an unused modulus,
    so branching over that modulus is complete.  A branch is dropped once the
    unused moduli cannot cover the remaining residues even without overlaps.
    """
    cap = default_cap() if cap is None else cap
    primes = sorted(set(prime_budget))
    L = math.prod(primes)
    if L > cap:
        raise TooLargeError(f"modulus product {L} exceeds cap {cap}")
    moduli = squarefree_divisors(primes)
    if not moduli:
        return None
    full = (1 << L) - 1
    stride = {d: sum(1 << i for i in range(0, L, d)) for d in moduli}

    def cls(d: int, r: int) -> int:
        return stride[d] << r

    chosen: list[tuple[int, int]] = []

    def extend(uncovered: int, unused: tuple[int, ...], capacity: int) -> bool:
        if not uncovered:
            return True
        if capacity < bin(uncovered).count("1"):
            return False
        z = (uncovered & -uncovered).bit_length() - 1
        for i, d in enumerate(unused):
            r = z % d
            chosen.append((r, d))
            rest = unused[:i] + unused[i + 1 :]
            if extend(uncovered & ~cls(d, r), rest, capacity - L // d):
                return True
            chosen.pop()
        return False

    if not extend(full, tuple(moduli), sum(L // d for d in moduli)):
        return None
    system = APSystem.build(sorted(chosen, key=lambda ad: (ad[1], ad[0])))
    if not ap_is_covering(system, cap).covered:
        raise AssertionError("search returned a non-covering system")
    return system
