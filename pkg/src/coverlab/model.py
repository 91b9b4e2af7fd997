"""Product spaces, points and axis-parallel hyperplanes.

A product space ``Q = S_1 x ... x S_n`` is described by its coordinate sizes;
coordinate ``j`` (1-based) takes the values ``0 .. sizes[j-1] - 1``.  A point is
a plain tuple of ints (0-based Python indexing into that tuple).  A hyperplane
fixes some coordinates to single values and leaves the others free.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInputError, TriviallyCoveringError

Point = tuple[int, ...]


@dataclass(frozen=True)
class ProductSpace:
    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.sizes:
            raise InvalidInputError("a product space needs at least one coordinate")
        bad = [s for s in self.sizes if s < 2]
        if bad:
            raise InvalidInputError(f"every coordinate needs at least two values, got {bad[0]}")

    @property
    def n(self) -> int:
        return len(self.sizes)

    def size(self, j: int) -> int:
        """|S_j| for a 1-based coordinate index."""
        return self.sizes[j - 1]

    def prefix_size(self, k: int) -> int:
        """Number of points of Q_k = S_1 x ... x S_k."""
        return math.prod(self.sizes[:k])

    @property
    def total(self) -> int:
        return math.prod(self.sizes)

    def check_point(self, p: Sequence[int], k: int | None = None) -> Point:
        k = self.n if k is None else k
        p = tuple(p)
        if len(p) != k:
            raise InvalidInputError(f"point has {len(p)} coordinates, expected {k}")
        for j, (v, s) in enumerate(zip(p, self.sizes), start=1):
            if not 0 <= v < s:
                raise InvalidInputError(f"coordinate {j} value {v} outside 0..{s - 1}")
        return p


@dataclass(frozen=True)
class Hyperplane:
    """``fixed`` holds sorted ``(coordinate, value)`` pairs, coordinates 1-based."""

    fixed: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(j), int(v)) for j, v in self.fixed))
        coords = [j for j, _ in pairs]
        if len(set(coords)) != len(coords):
            raise InvalidInputError(f"coordinate fixed twice in {pairs}")
        if coords and coords[0] < 1:
            raise InvalidInputError("coordinate indices are 1-based")
        object.__setattr__(self, "fixed", pairs)

    @classmethod
    def from_mapping(cls, fixings: Mapping[int, int]) -> "Hyperplane":
        return cls(tuple(fixings.items()))

    @property
    def fixings(self) -> dict[int, int]:
        return dict(self.fixed)

    @property
    def F(self) -> frozenset[int]:
        """The set of fixed coordinates."""
        return frozenset(j for j, _ in self.fixed)

    def check(self, space: ProductSpace) -> None:
        for j, v in self.fixed:
            if j > space.n:
                raise InvalidInputError(f"coordinate {j} outside 1..{space.n}")
            if not 0 <= v < space.size(j):
                raise InvalidInputError(
                    f"value {v} outside 0..{space.size(j) - 1} at coordinate {j}"
                )


def contains(h: Hyperplane, p: Sequence[int], space: ProductSpace | None = None) -> bool:
    """True iff ``p`` agrees with every fixing of ``h``.

    ``p`` may be a k-prefix point as long as every fixed coordinate of ``h`` lies
    within it.
    """
    if space is not None:
        space.check_point(p, len(p))
    for j, v in h.fixed:
        if j > len(p):
            raise InvalidInputError(f"point of length {len(p)} has no coordinate {j}")
        if p[j - 1] != v:
            return False
    return True


def max_fixed(h: Hyperplane) -> int | None:
    return h.fixed[-1][0] if h.fixed else None


def project(h: Hyperplane, U: Iterable[int]) -> Hyperplane:
    """The hyperplane keeping only the fixings of ``h`` whose coordinate lies in ``U``."""
    U = set(U)
    return Hyperplane(tuple((j, v) for j, v in h.fixed if j in U))


def prefix_projection(h: Hyperplane, k: int) -> Hyperplane:
    """Projection onto the coordinates ``1..k``."""
    return Hyperplane(tuple((j, v) for j, v in h.fixed if j <= k))


@dataclass(frozen=True)
class Instance:
    space: ProductSpace
    hyperplanes: tuple[Hyperplane, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "hyperplanes", tuple(self.hyperplanes))
        for h in self.hyperplanes:
            h.check(self.space)

    @classmethod
    def build(cls, sizes: Sequence[int], fixings: Iterable[Mapping[int, int]]) -> "Instance":
        """Shorthand: ``Instance.build((2, 2), [{1: 0}, {2: 0}])``."""
        return cls(ProductSpace(tuple(sizes)), tuple(Hyperplane.from_mapping(f) for f in fixings))

    def to_json(self) -> dict:
        return {
            "sizes": list(self.space.sizes),
            "hyperplanes": [{"fixed": [[j, v] for j, v in h.fixed]} for h in self.hyperplanes],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Instance":
        try:
            sizes = doc["sizes"]
            raw = doc.get("hyperplanes", [])
            hyperplanes = []
            for entry in raw:
                pairs = [tuple(pair) for pair in entry["fixed"]]
                if any(len(pair) != 2 for pair in pairs):
                    raise InvalidInputError(f"malformed fixing list {entry['fixed']!r}")
                if [j for j, _ in pairs] != sorted(j for j, _ in pairs):
                    raise InvalidInputError(f"fixed list not sorted by coordinate: {pairs}")
                hyperplanes.append(Hyperplane(tuple(pairs)))
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed instance document: {exc}") from exc
        return cls(ProductSpace(tuple(sizes)), tuple(hyperplanes))


def load_instance(path: str) -> Instance:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read instance {path}: {exc}") from exc
    return Instance.from_json(doc)


def find_parallel_pair(inst: Instance) -> tuple[int, int] | None:
    """Lexicographically first pair ``(i, j)``, ``i < j`` (0-based), with equal F-sets."""
    first_seen: dict[frozenset[int], int] = {}
    best: tuple[int, int] | None = None
    for j, h in enumerate(inst.hyperplanes):
        i = first_seen.setdefault(h.F, j)
        if i != j and (best is None or (i, j) < best):
            best = (i, j)
    return best


def round_partition(inst: Instance) -> dict[int, list[Hyperplane]]:
    """Group hyperplanes by their largest fixed coordinate; keys run over ``1..n``.

    The union B_k of round k is kept implicit as the list itself.
    """
    rounds: dict[int, list[Hyperplane]] = {k: [] for k in range(1, inst.space.n + 1)}
    for idx, h in enumerate(inst.hyperplanes):
        k = max_fixed(h)
        if k is None:
            raise TriviallyCoveringError(f"hyperplane #{idx + 1} fixes nothing and covers Q")
        rounds[k].append(h)
    return rounds
