"""Arithmetic progressions with square-free moduli as hyperplanes.

Coordinate ``k`` of the target space is the residue modulo the k-th prime, so a
progression ``a + dZ`` with square-free ``d`` fixes exactly the coordinates of
the primes dividing ``d``.  Asymptotically p_k ~ k log k; only finite ranges
are ever checked here.
"""

from __future__ import annotations

import bisect
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    InvalidInputError,
    SpaceTooSmallError,
    SquarefreeViolationError,
    TriviallyCoveringError,
)
from .model import Hyperplane, Instance, Point, ProductSpace


@dataclass(frozen=True)
class ArithmeticProgression:
    a: int
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise InvalidInputError(f"modulus must be >= 1, got {self.d}")
        object.__setattr__(self, "a", self.a % self.d)

    def __contains__(self, z: int) -> bool:
        return z % self.d == self.a


@dataclass(frozen=True)
class APSystem:
    progressions: tuple[ArithmeticProgression, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "progressions", tuple(self.progressions))

    @classmethod
    def build(cls, pairs: Iterable[tuple[int, int]]) -> "APSystem":
        """``APSystem.build([(0, 2), (0, 3)])`` for ``{0 mod 2, 0 mod 3}``."""
        return cls(tuple(ArithmeticProgression(a, d) for a, d in pairs))

    @property
    def moduli(self) -> list[int]:
        return [ap.d for ap in self.progressions]

    def lcm(self) -> int:
        return math.lcm(*self.moduli) if self.progressions else 1

    def to_json(self) -> dict:
        return {"progressions": [{"a": ap.a, "d": ap.d} for ap in self.progressions]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "APSystem":
        try:
            return cls(tuple(ArithmeticProgression(int(e["a"]), int(e["d"])) for e in doc["progressions"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed progression system: {exc}") from exc


def load_system(path: str) -> APSystem:
    try:
        with open(path) as fh:
            return APSystem.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read system {path}: {exc}") from exc


# ---------------------------------------------------------------- primes

_sieve_cache: list[int] = []
_sieve_limit = 1


def primes_below(limit: int) -> list[int]:
    """All primes < limit (sieve of Eratosthenes, cached)."""
    global _sieve_cache, _sieve_limit
    if limit <= _sieve_limit:
        return _sieve_cache[: bisect.bisect_left(_sieve_cache, limit)]
    flags = bytearray([1]) * limit
    for i in range(min(2, limit)):
        flags[i] = 0
    for p in range(2, math.isqrt(limit - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit, p)))
    _sieve_cache = list(itertools.compress(range(limit), flags))
    _sieve_limit = limit
    return list(_sieve_cache)


def _nth_prime_upper(n: int) -> int:
    # p_n < n (ln n + ln ln n) for n >= 6
    if n < 6:
        return 13
    return int(n * (math.log(n) + math.log(math.log(n)))) + 1


def primes_upto_index(n: int) -> list[int]:
    """The first ``n`` primes."""
    if n < 1:
        raise InvalidInputError("need n >= 1")
    ps = primes_below(_nth_prime_upper(n) + 1)
    return ps[:n]


def factor_squarefree(d: int) -> list[int]:
    """Prime factors of ``d`` in increasing order; raises if ``d`` is not square-free."""
    out = []
    m = d
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                raise SquarefreeViolationError(f"modulus {d} is divisible by {p}^2")
            out.append(p)
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------- mapping

def ap_to_hyperplane(ap: ArithmeticProgression, primes: Sequence[int]) -> Hyperplane:
    index = {p: k for k, p in enumerate(primes, start=1)}
    fixed = []
    for p in factor_squarefree(ap.d):
        if p not in index:
            raise SpaceTooSmallError(f"prime {p} of modulus {ap.d} is not among the coordinates")
        fixed.append((index[p], ap.a % p))
    return Hyperplane(tuple(fixed))


def system_to_instance(sys: APSystem) -> Instance:
    largest = 2
    for ap in sys.progressions:
        if ap.d == 1:
            raise TriviallyCoveringError(f"progression {ap.a} mod 1 covers Z")
        largest = max(largest, factor_squarefree(ap.d)[-1])
    primes = primes_below(largest + 1)
    space = ProductSpace(tuple(primes))
    return Instance(space, tuple(ap_to_hyperplane(ap, primes) for ap in sys.progressions))


def residue_to_point(z: int, primes: Sequence[int]) -> Point:
    return tuple(z % p for p in primes)


def point_to_residue(point: Sequence[int], primes: Sequence[int]) -> int:
    """CRT inverse of :func:`residue_to_point`, in ``0 .. prod(primes) - 1``."""
    M = math.prod(primes)
    z = 0
    for v, p in zip(point, primes):
        Mi = M // p
        z += v * Mi * pow(Mi, -1, p)
    return z % M


def min_modulus_bound(C: int, primes: Sequence[int] | None = None) -> int:
    """Primorial p_1 * ... * p_C."""
    if C < 1:
        raise InvalidInputError("need C >= 1")
    if primes is None:
        primes = primes_upto_index(C)
    if len(primes) < C:
        raise InvalidInputError(f"need {C} primes, got {len(primes)}")
    return math.prod(primes[:C])


def verify_prime_growth(N: int, eps: Fraction, K: int) -> tuple[bool, int | None]:
    """Check p_k >= (3 + eps) k for N <= k <= K; returns (ok, first failing k)."""
    eps = Fraction(eps)
    if N > K:
        raise InvalidInputError(f"N = {N} exceeds K = {K}")
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    if N < 1:
        raise InvalidInputError("indices start at 1")
    primes = primes_upto_index(K)
    num, den = (3 + eps).numerator, (3 + eps).denominator
    for k in range(N, K + 1):
        if primes[k - 1] * den < num * k:
            return False, k
    return True, None
