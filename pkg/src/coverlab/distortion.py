"""Exact distorted measures on the prefix spaces Q_0, Q_1, ..., Q_n.

Round k looks at every fibre ``{(x, y) : y in S_k}`` over a prefix ``x`` of
Q_{k-1}.  If the fraction ``alpha`` of the fibre covered by the round-k
hyperplanes is at most ``delta``, the covered points are zeroed and the rest
scaled up to keep the fibre mass; otherwise uncovered points are scaled by
exactly ``1/(1 - delta)`` and covered points absorb the remainder.

A state stores integer numerators over one shared denominator, in a dense
numpy object array indexed by the prefix coordinates.  Zero-weight prefixes
stay in the array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidParameterError, NotMeasurableError, TooLargeError
from .exact import default_cap
from .model import Hyperplane, Instance, Point, ProductSpace, contains, max_fixed, round_partition

Rounds = dict[int, list[Hyperplane]]


def check_delta(delta) -> Fraction:
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 2):
        raise InvalidParameterError(f"delta must lie in (0, 1/2], got {delta}")
    return delta


@dataclass(frozen=True)
class DistortionState:
    k: int
    delta: Fraction
    space: ProductSpace
    denominator: int
    numerators: np.ndarray = field(repr=False)

    @classmethod
    def initial(cls, space: ProductSpace, delta) -> "DistortionState":
        return cls(0, check_delta(delta), space, 1, np.array(1, dtype=object))

    def weight(self, x: Sequence[int]) -> Fraction:
        x = self.space.check_point(x, self.k)
        return Fraction(self.numerators[x], self.denominator)

    def items(self) -> Iterator[tuple[Point, Fraction]]:
        for idx in np.ndindex(*self.space.sizes[: self.k]):
            yield idx, Fraction(self.numerators[idx], self.denominator)

    @property
    def weights(self) -> dict[Point, Fraction]:
        return dict(self.items())

    def total(self) -> Fraction:
        return Fraction(int(np.sum(self.numerators)), self.denominator)

    def marginal(self) -> "DistortionState":
        """Sum out the last coordinate (the Q_{k-1} view of this measure)."""
        if self.k == 0:
            raise ValueError("Q_0 has no coordinate to sum out")
        return DistortionState(
            self.k - 1, self.delta, self.space, self.denominator, self.numerators.sum(axis=-1)
        )


@dataclass(frozen=True)
class RoundRecord:
    k: int
    covered_mass: Fraction
    exceeded_cap_count: int
    second_moment: Fraction


@dataclass
class DistortionTrace:
    delta: Fraction
    per_round: list[RoundRecord]
    residual_lower_bound: Fraction
    final: DistortionState
    states: list[DistortionState] | None = None

    def to_json(self, full: bool = False) -> dict:
        from .serialize import fmt_rational

        rounds = []
        for rec in self.per_round:
            rounds.append({
                "k": rec.k,
                "covered_mass": fmt_rational(rec.covered_mass),
                "exceeded_cap_count": rec.exceeded_cap_count,
            })
        doc = {
            "delta": fmt_rational(self.delta),
            "rounds": rounds,
            "residual_lower_bound": fmt_rational(self.residual_lower_bound),
        }
        if full and self.states is not None:
            doc["weights"] = [
                [fmt_rational(w) for _, w in st.items()] for st in self.states
            ]
        return doc


# ---------------------------------------------------------------- round data

def covered_mask(space: ProductSpace, round_k: Sequence[Hyperplane], k: int) -> np.ndarray:
    """Boolean array over Q_k marking B_k."""
    mask = np.zeros(space.sizes[:k], dtype=bool)
    for h in round_k:
        index: list = [slice(None)] * k
        for j, v in h.fixed:
            index[j - 1] = v
        mask[tuple(index)] = True
    return mask


def alpha(state: DistortionState, x: Sequence[int], rounds: Rounds, k: int) -> Fraction:
    """Covered fraction of the fibre over the (k-1)-prefix ``x``, by direct scan."""
    if state.k != k - 1:
        raise ValueError(f"alpha_{k} needs the state at round {k - 1}, got {state.k}")
    x = state.space.check_point(x, k - 1)
    hit = set()
    for h in rounds.get(k, []):
        fix = h.fixings
        if contains(Hyperplane(tuple((j, v) for j, v in h.fixed if j < k)), x):
            hit.add(fix[k])
    return Fraction(len(hit), state.space.size(k))


def _factor_table(s: int, delta: Fraction) -> tuple[np.ndarray, int]:
    """Integer multipliers ``G[c, covered]`` and their common scale L.

    A point of a fibre with ``c`` covered values receives
    ``P_{k-1}(x) / s * G[c, covered] / L``.
    """
    p, q = delta.numerator, delta.denominator
    cap = Fraction(q, q - p)  # 1/(1 - delta)
    factors = {}
    for c in range(s + 1):
        if c < s:
            factors[c, 0] = min(Fraction(s, s - c), cap)
        else:
            factors[c, 0] = Fraction(0)
        if c > 0:
            factors[c, 1] = max(Fraction(0), Fraction(c * q - p * s, c * (q - p)))
        else:
            factors[c, 1] = Fraction(0)
    L = math.lcm(*(f.denominator for f in factors.values()))
    G = np.empty((s + 1, 2), dtype=object)
    for (c, b), f in factors.items():
        G[c, b] = f.numerator * (L // f.denominator)
    return G, L


def step(
    state: DistortionState, rounds: Rounds, k: int, cap: int | None = None
) -> tuple[DistortionState, RoundRecord]:
    """Advance from P_{k-1} to P_k, returning the round's bookkeeping alongside."""
    if state.k != k - 1:
        raise ValueError(f"step {k} needs the state at round {k - 1}, got {state.k}")
    space, delta = state.space, state.delta
    cap = default_cap() if cap is None else cap
    if space.prefix_size(k) > cap:
        raise TooLargeError(f"|Q_{k}| = {space.prefix_size(k)} exceeds cap {cap}")
    s = space.size(k)
    p, q = delta.numerator, delta.denominator

    mask = covered_mask(space, rounds.get(k, []), k)
    counts = mask.sum(axis=-1)
    prev = state.numerators
    D = state.denominator

    G, L = _factor_table(s, delta)
    numerators = prev[..., None] * G[counts[..., None], mask.astype(np.intp)]
    denominator = D * s * L
    g = math.gcd(denominator, *np.ravel(numerators).tolist())
    if g > 1:
        numerators = numerators // g
        denominator //= g
    new = DistortionState(k, delta, space, denominator, numerators)

    excess = np.maximum(counts * q - p * s, 0).astype(object)
    covered = Fraction(int(np.sum(prev * excess)), D * (q - p) * s)
    moment = Fraction(int(np.sum(prev * (counts.astype(object) ** 2))), D * s * s)
    exceeded = int(np.count_nonzero(counts * q > p * s))
    return new, RoundRecord(k, covered, exceeded, moment)


def covered_mass(state: DistortionState, rounds: Rounds, k: int, method: str = "closed") -> Fraction:
    """P_k(B_k) from the state at round k.

    ``closed`` evaluates the fibre-excess formula on the marginal P_{k-1};
    ``direct`` sums the weights of the covered points.
    """
    if state.k != k:
        raise ValueError(f"covered mass of round {k} needs the state at round {k}")
    mask = covered_mask(state.space, rounds.get(k, []), k)
    if method == "direct":
        return Fraction(int(np.sum(state.numerators[mask])), state.denominator)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    s = state.space.size(k)
    p, q = state.delta.numerator, state.delta.denominator
    prev = state.numerators.sum(axis=-1)
    excess = np.maximum(mask.sum(axis=-1) * q - p * s, 0).astype(object)
    return Fraction(int(np.sum(prev * excess)), state.denominator * (q - p) * s)


def second_moment(state: DistortionState, rounds: Rounds, k: int) -> Fraction:
    """E_{k-1}[alpha_k^2] under the state at round k-1."""
    if state.k != k - 1:
        raise ValueError(f"second moment of round {k} needs the state at round {k - 1}")
    s = state.space.size(k)
    counts = covered_mask(state.space, rounds.get(k, []), k).sum(axis=-1).astype(object)
    return Fraction(int(np.sum(state.numerators * counts**2)), state.denominator * s * s)


def run(
    inst: Instance, delta, cap: int | None = None, trace_full: bool = False
) -> DistortionTrace:
    delta = check_delta(delta)
    cap = default_cap() if cap is None else cap
    if inst.space.total > cap:
        raise TooLargeError(f"|Q| = {inst.space.total} exceeds cap {cap}")
    rounds = round_partition(inst)
    state = DistortionState.initial(inst.space, delta)
    states = [state] if trace_full else None
    records = []
    for k in range(1, inst.space.n + 1):
        state, rec = step(state, rounds, k, cap)
        records.append(rec)
        if states is not None:
            states.append(state)
    residual = 1 - sum((r.covered_mass for r in records), Fraction(0))
    return DistortionTrace(delta, records, residual, state, states)


def measure_of(state: DistortionState, h: Hyperplane) -> Fraction:
    top = max_fixed(h)
    if top is not None and top > state.k:
        raise NotMeasurableError(f"hyperplane fixes coordinate {top} beyond round {state.k}")
    h.check(state.space)
    index: list = [slice(None)] * state.k
    for j, v in h.fixed:
        index[j - 1] = v
    return Fraction(int(np.sum(state.numerators[tuple(index)])), state.denominator)


def hyperplane_numerators(state: DistortionState) -> np.ndarray:
    """Numerators of P_k(A) for every hyperplane A with F(A) within 1..k.

    Axis j has length ``|S_j| + 1``; index ``|S_j|`` means coordinate j is free.
    """
    arr = state.numerators
    for axis in range(state.k):
        arr = np.concatenate([arr, arr.sum(axis=axis, keepdims=True)], axis=axis)
    return arr
