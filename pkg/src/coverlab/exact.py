"""Ground truth by brute force: mark every covered point, count the rest."""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .crt import APSystem
from .errors import TooLargeError
from .model import Instance, Point

DEFAULT_CAP = 10**7


def default_cap() -> int:
    return int(os.environ.get("COVERLAB_CAP", DEFAULT_CAP))


@dataclass(frozen=True)
class CoverVerdict:
    covered: bool
    witness: Point | None
    uncovered_count: int
    total_count: int

    @property
    def uncovered_fraction(self) -> Fraction:
        return Fraction(self.uncovered_count, self.total_count)

    def to_json(self) -> dict:
        return {
            "covered": self.covered,
            "witness": list(self.witness) if self.witness is not None else None,
            "uncovered": f"{self.uncovered_count}/{self.total_count}",
        }


def covered_point_mask(inst: Instance) -> np.ndarray:
    """Boolean array over Q, True where some hyperplane contains the point."""
    mask = np.zeros(inst.space.sizes, dtype=bool)
    for h in inst.hyperplanes:
        index = [slice(None)] * inst.space.n
        for j, v in h.fixed:
            index[j - 1] = v
        mask[tuple(index)] = True
    return mask


def is_covering(inst: Instance, cap: int | None = None) -> CoverVerdict:
    """Enumerate Q; the witness is the lexicographically smallest uncovered point."""
    cap = default_cap() if cap is None else cap
    total = inst.space.total
    if total > cap:
        raise TooLargeError(f"|Q| = {total} exceeds cap {cap}")
    mask = covered_point_mask(inst)
    flat = mask.ravel()  # C order == lexicographic, coordinate 1 most significant
    uncovered = int(flat.size - np.count_nonzero(flat))
    witness = None
    if uncovered:
        first = int(np.argmin(flat))
        witness = tuple(int(c) for c in np.unravel_index(first, inst.space.sizes))
    return CoverVerdict(uncovered == 0, witness, uncovered, total)


def uncovered_measure(inst: Instance, cap: int | None = None) -> Fraction:
    return is_covering(inst, cap).uncovered_fraction


def ap_is_covering(sys: APSystem, cap: int | None = None) -> CoverVerdict:
    """Covering Z is the same as covering Z/LZ with L the lcm of the moduli."""
    cap = default_cap() if cap is None else cap
    L = sys.lcm()
    if L > cap:
        raise TooLargeError(f"lcm of moduli {L} exceeds cap {cap}")
    hit = bytearray(L)
    for ap in sys.progressions:
        hit[ap.a :: ap.d] = b"\x01" * len(range(ap.a, L, ap.d))
    uncovered = L - hit.count(1)
    witness = None
    if uncovered:
        witness = (hit.index(0),)
    return CoverVerdict(uncovered == 0, witness, uncovered, L)
