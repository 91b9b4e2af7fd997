"""Random instances and exact invariant checks for the distortion machinery.

Each ``check_*`` returns a list of human-readable violations (empty when the
property holds), so scripts can tally and tests can assert emptiness.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from . import certifier, distortion
from .exact import covered_point_mask, is_covering
from .model import Hyperplane, Instance, ProductSpace

DELTAS = (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2))


def random_instance(
    rng: random.Random,
    max_n: int = 6,
    max_size: int = 8,
    max_hyperplanes: int = 12,
    max_points: int = 10**5,
    nonparallel: bool = False,
) -> Instance:
    while True:
        n = rng.randint(1, max_n)
        sizes = tuple(rng.randint(2, max_size) for _ in range(n))
        if math.prod(sizes) <= max_points:
            break
    hyperplanes = []
    seen = set()
    for _ in range(rng.randint(0, max_hyperplanes)):
        width = min(n, 1 + int(rng.expovariate(1.0)))
        coords = sorted(rng.sample(range(1, n + 1), width))
        if nonparallel and tuple(coords) in seen:
            continue
        seen.add(tuple(coords))
        hyperplanes.append(Hyperplane(tuple((j, rng.randrange(sizes[j - 1])) for j in coords)))
    return Instance(ProductSpace(sizes), tuple(hyperplanes))


def corpus(count: int, seed: int = 0, **kwargs) -> list[tuple[Instance, Fraction]]:
    rng = random.Random(seed)
    return [(random_instance(rng, **kwargs), rng.choice(DELTAS)) for _ in range(count)]


def _nu_scaled(space: ProductSpace, k: int, delta: Fraction) -> tuple[np.ndarray, int]:
    """nu(F(A)) * M for every Q_k-measurable A (free index last on each axis)."""
    p, q = delta.numerator, delta.denominator
    arr = np.array(1, dtype=object)
    M = 1
    for j in range(k):
        s = space.sizes[j]
        axis = np.array([q] * s + [(q - p) * s], dtype=object)
        arr = np.multiply.outer(arr, axis)
        M *= (q - p) * s
    return arr, M


def check_trace(inst: Instance, delta: Fraction, cap: int | None = None) -> list[str]:
    """Normalization, consistency, domination, per-round bound and hyperplane bound."""
    trace = distortion.run(inst, delta, cap, trace_full=True)
    states = trace.states
    rounds = distortion.round_partition(inst)
    p, q = delta.numerator, delta.denominator
    bad = []
    for st in states:
        if st.total() != 1:
            bad.append(f"round {st.k}: total mass {st.total()}")
    for k in range(1, inst.space.n + 1):
        prev, cur = states[k - 1], states[k]
        rec = trace.per_round[k - 1]
        s = inst.space.size(k)

        a = distortion.hyperplane_numerators(cur.marginal())
        b = distortion.hyperplane_numerators(prev)
        if not np.all(a * prev.denominator == b * cur.denominator):
            bad.append(f"round {k}: measure of a Q_{k-1}-measurable hyperplane changed")

        lhs = cur.numerators * (prev.denominator * (q - p) * s)
        rhs = prev.numerators[..., None] * (q * cur.denominator)
        if not np.all(lhs <= rhs):
            bad.append(f"round {k}: point weight grew by more than 1/(1-delta)")

        if rec.covered_mass != distortion.covered_mass(cur, rounds, k, "direct"):
            bad.append(f"round {k}: closed-form covered mass disagrees with direct sum")
        if rec.second_moment != distortion.second_moment(prev, rounds, k):
            bad.append(f"round {k}: second moment bookkeeping mismatch")
        if rec.covered_mass > rec.second_moment * certifier.criterion_constant(delta):
            bad.append(f"round {k}: covered mass {rec.covered_mass} above moment bound")

        masses = distortion.hyperplane_numerators(cur)
        nu_arr, M = _nu_scaled(inst.space, k, delta)
        if not np.all(masses * M <= nu_arr * cur.denominator):
            bad.append(f"round {k}: some hyperplane exceeds its nu bound")
    return bad


def uncovered_mass(inst: Instance, trace: distortion.DistortionTrace) -> Fraction:
    """P_n of the uncovered set, using the brute-force covered mask."""
    mask = covered_point_mask(inst)
    return Fraction(int(np.sum(trace.final.numerators[~mask])), trace.final.denominator)


def check_certificates(inst: Instance, delta: Fraction, cap: int | None = None) -> list[str]:
    """Mode ordering (non-parallel only) and soundness against enumeration."""
    bad = []
    verdict = is_covering(inst, cap)
    trace = distortion.run(inst, delta, cap)
    true_mass = uncovered_mass(inst, trace)
    if trace.residual_lower_bound > 0 and verdict.covered:
        bad.append("positive residual on a covering instance")
    if true_mass < trace.residual_lower_bound:
        bad.append(f"uncovered mass {true_mass} below residual {trace.residual_lower_bound}")

    modes = ["exact", "pairwise"]
    nonparallel = inst.hyperplanes == () or certifier.find_parallel_pair(inst) is None
    if nonparallel:
        modes.append("product")
    certs = {m: certifier.certify(inst, delta, m, cap) for m in modes}

    for b, rec in zip(certs["exact"].per_round, trace.per_round):
        if b.value != rec.second_moment:
            bad.append(f"round {b.k}: exact-mode bound differs from engine moment")
    if nonparallel:
        for k in range(1, inst.space.n + 1):
            e, pw, pr = (certs[m].per_round[k - 1].value for m in ("exact", "pairwise", "product"))
            raw = certifier.product_bound(inst.space.sizes, k, delta)
            if not e <= pw <= pr <= raw:
                bad.append(f"round {k}: mode ordering broken ({e}, {pw}, {pr}, {raw})")
    for m, cert in certs.items():
        if cert.verdict == certifier.NOT_COVERING:
            if verdict.covered:
                bad.append(f"{m}: NOT_COVERING on a covering instance")
            if true_mass < cert.residual:
                bad.append(f"{m}: uncovered mass {true_mass} below certified residual {cert.residual}")
    return bad
