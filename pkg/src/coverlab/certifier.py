"""Non-covering certificates from second-moment bounds.

If ``sum_k E_{k-1}[alpha_k^2] / (4 delta (1 - delta)) < 1`` the collection
leaves a set of positive distorted measure uncovered.  Three ways to bound
each term, from tightest to loosest:

``exact``
    run the distortion engine and evaluate the moment itself;
``pairwise``
    union bound over ordered pairs of round-k hyperplanes, each pair's
    prefix intersection bounded by ``nu`` of its fixed coordinates;
``product``
    the closed form ``|S_k|^-2 prod_{j<k} (1 + 3/((1-delta)|S_j|))``, valid
    only when no two hyperplanes are parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import distortion
from .errors import HypothesisViolationError, InvalidParameterError, TooLargeError
from .exact import default_cap
from .model import Instance, find_parallel_pair, round_partition
from .serialize import fmt_rational

MODES = ("exact", "pairwise", "product")
NOT_COVERING = "NOT_COVERING"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class MomentBound:
    k: int
    mode: str
    value: Fraction


@dataclass(frozen=True)
class Certificate:
    delta: Fraction
    mode: str
    per_round: tuple[MomentBound, ...]
    criterion_sum: Fraction
    nonparallel_checked: bool

    @property
    def residual(self) -> Fraction:
        return 1 - self.criterion_sum

    @property
    def verdict(self) -> str:
        return NOT_COVERING if self.criterion_sum < 1 else INCONCLUSIVE

    def to_json(self) -> dict:
        return {
            "delta": fmt_rational(self.delta),
            "mode": self.mode,
            "rounds": [{"k": b.k, "bound": fmt_rational(b.value)} for b in self.per_round],
            "criterion_sum": fmt_rational(self.criterion_sum),
            "residual": fmt_rational(self.residual),
            "verdict": self.verdict,
            "nonparallel_checked": self.nonparallel_checked,
        }


def nu(J: Iterable[int], delta, sizes) -> Fraction:
    delta = Fraction(delta)
    out = Fraction(1)
    for j in J:
        out /= (1 - delta) * sizes[j - 1]
    return out


def criterion_constant(delta: Fraction) -> Fraction:
    """1 / (4 delta (1 - delta))."""
    return 1 / (4 * delta * (1 - delta))


def _require_nonparallel(inst: Instance) -> None:
    pair = find_parallel_pair(inst)
    if pair is not None:
        i, j = pair
        raise HypothesisViolationError(
            f"hyperplanes #{i + 1} and #{j + 1} are parallel (same fixed coordinates)"
        )


def second_moment_pairwise(inst: Instance, k: int, delta) -> MomentBound:
    delta = distortion.check_delta(delta)
    sizes = inst.space.sizes
    members = [h.F - {k} for h in round_partition(inst)[k]]
    total = sum((nu(F1 | F2, delta, sizes) for F1 in members for F2 in members), Fraction(0))
    return MomentBound(k, "pairwise", total / sizes[k - 1] ** 2)


def product_bound(sizes, k: int, delta) -> Fraction:
    delta = Fraction(delta)
    value = Fraction(1, sizes[k - 1] ** 2)
    for j in range(1, k):
        value *= 1 + 3 / ((1 - delta) * sizes[j - 1])
    return value


def second_moment_product(inst: Instance, k: int, delta) -> MomentBound:
    delta = distortion.check_delta(delta)
    _require_nonparallel(inst)
    return MomentBound(k, "product", product_bound(inst.space.sizes, k, delta))


def second_moment_exact(inst: Instance, k: int, delta, cap: int | None = None) -> MomentBound:
    return _exact_moments(inst, distortion.check_delta(delta), cap, upto=k)[k - 1]


def _exact_moments(inst: Instance, delta: Fraction, cap: int | None, upto: int) -> list[MomentBound]:
    cap = default_cap() if cap is None else cap
    if inst.space.prefix_size(upto - 1) > cap:
        raise TooLargeError(f"|Q_{upto - 1}| = {inst.space.prefix_size(upto - 1)} exceeds cap {cap}")
    rounds = round_partition(inst)
    state = distortion.DistortionState.initial(inst.space, delta)
    out = []
    for k in range(1, upto + 1):
        out.append(MomentBound(k, "exact", distortion.second_moment(state, rounds, k)))
        if k < upto:
            state, _ = distortion.step(state, rounds, k, cap)
    return out


def certify(inst: Instance, delta=Fraction(1, 4), mode: str = "exact", cap: int | None = None) -> Certificate:
    """Evaluate the criterion with per-round bounds of the chosen mode.

    Rounds with no hyperplanes contribute 0 in every mode.
    """
    delta = distortion.check_delta(delta)
    if mode not in MODES:
        raise InvalidParameterError(f"mode must be one of {MODES}, got {mode!r}")
    rounds = round_partition(inst)
    nonparallel = find_parallel_pair(inst) is None
    n = inst.space.n

    if mode == "exact":
        bounds = _exact_moments(inst, delta, cap, upto=n)
    elif mode == "pairwise":
        bounds = [second_moment_pairwise(inst, k, delta) for k in range(1, n + 1)]
    else:
        _require_nonparallel(inst)
        bounds = [
            MomentBound(k, "product", product_bound(inst.space.sizes, k, delta) if rounds[k] else Fraction(0))
            for k in range(1, n + 1)
        ]
    S = criterion_constant(delta) * sum((b.value for b in bounds), Fraction(0))
    return Certificate(delta, mode, tuple(bounds), S, nonparallel)


def max_excess_bound(a: Fraction, b: Fraction) -> bool:
    """max{a - b, 0} <= a^2 / (4b) for a, b > 0; the scalar step behind the criterion."""
    return max(a - b, Fraction(0)) <= a * a / (4 * b)


__all__ = [
    "Certificate",
    "MomentBound",
    "certify",
    "criterion_constant",
    "max_excess_bound",
    "nu",
    "product_bound",
    "second_moment_exact",
    "second_moment_pairwise",
    "second_moment_product",
]
