"""The explicit constant C for sequences with |S_k| >= (3 + eps) k beyond N.

With ``t = eps/10`` and ``delta = eps/6`` the criterion sum over rounds k > C
is at most ``(4^N / eps) * sum_{k >= C} k^(-1-t)``, and the tail is dominated by

    TailBound(C, eps) = C^(-1-t) + (1/t) C^(-t)

(first term plus the integral from C to infinity).  ``C`` is accepted when
``prefactor * TailBound(C, eps) < 1``.  Irrational powers are enclosed with
mpmath interval arithmetic; precision is raised until the comparison with 1 is
decided, and an undecided comparison counts as a failure.
"""

from __future__ import annotations

import contextlib
import decimal
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from mpmath import iv
from mpmath.libmp import to_rational

from .crt import primes_upto_index, verify_prime_growth
from .errors import HypothesisViolationError, InvalidInputError, UnsupportedEpsilonError

EXACT_SEARCH_LIMIT = 10**6
DEFAULT_GROWTH_RANGE = 10**6
MAX_EXPONENT = 10**6
_PRECISIONS = (64, 128, 256, 512, 1024, 4096, 16384)

REFERENCE_CONSTANTS = {
    "hough_minimum_modulus_upper_bound": "1e16",
    "improved_minimum_modulus_upper_bound": "less than 1e6",
    "prime_sequence_C_threshold": "1e200",
    "prime_sequence_minimum_modulus_scale": "roughly exp(1e200)",
}


# ---------------------------------------------------------------- rounding helpers

@contextlib.contextmanager
def _ivprec(bits: int):
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def _endpoints(x) -> tuple[Fraction, Fraction]:
    lo, hi = (to_rational(end) for end in x._mpi_)
    return Fraction(int(lo[0]), int(lo[1])), Fraction(int(hi[0]), int(hi[1]))


def _iv_rational(q: Fraction):
    return iv.mpf(q.numerator) / q.denominator


def decimal_string(q: Fraction, up: bool, digits: int = 30) -> str:
    """``q`` to ``digits`` significant digits, rounded toward +inf (up) or -inf."""
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_CEILING if up else decimal.ROUND_FLOOR)
    return str(ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator)))


def log10_bounds(x) -> tuple[Fraction, Fraction]:
    """Rigorous enclosure of log10 of a positive interval."""
    with _ivprec(128):
        return _endpoints(iv.log10(x))


# ---------------------------------------------------------------- scalar pieces

def scalar_condition_value(eps) -> Fraction:
    eps = Fraction(eps)
    return (1 - eps / 6) * (3 + eps) * (1 - eps / 10)


def scalar_condition(eps) -> bool:
    """(1 - eps/6)(3 + eps)(1 - eps/10) >= 3, for 0 < eps <= 1."""
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise UnsupportedEpsilonError(f"eps must lie in (0, 1], got {eps}")
    return scalar_condition_value(eps) >= 3


def tail_bound(C: int, eps, prec: int = 128):
    """Interval enclosing C^(-1-t) + (1/t) C^(-t), t = eps/10."""
    eps = Fraction(eps)
    t = eps / 10
    with _ivprec(prec):
        c = iv.mpf(C)
        ct = c ** _iv_rational(t)
        return 1 / (c * ct) + _iv_rational(1 / t) / ct


def prefactor(N: int, eps, delta=None) -> Fraction:
    """Multiplier in front of the tail sum.

    The default ``delta = eps/6`` uses the simplified ``4^N / eps``; any other
    delta uses ``4^N / (36 delta (1 - delta))`` directly.
    """
    eps = Fraction(eps)
    if delta is None or Fraction(delta) == eps / 6:
        return Fraction(4**N) / eps
    delta = Fraction(delta)
    return Fraction(4**N) / (36 * delta * (1 - delta))


def criterion_interval(C: int, eps, N: int, delta=None, prec: int = 128):
    with _ivprec(prec):
        return _iv_rational(prefactor(N, eps, delta)) * tail_bound(C, eps, prec)


def criterion_holds(C: int, eps, N: int, delta=None) -> tuple[bool, object]:
    """Decide ``prefactor * TailBound(C) < 1`` with outward rounding."""
    x = None
    for prec in _PRECISIONS:
        x = criterion_interval(C, eps, N, delta, prec)
        lo, hi = _endpoints(x)
        if hi < 1:
            return True, x
        if lo >= 1:
            return False, x
    return False, x


def criterion_holds_exact(C: int, eps, N: int, delta=None) -> bool:
    """Same test without any rounding, by clearing the fractional power.

    With t = a/b:  pref * (1/C + 1/t) * C^(-t) < 1  <=>  (pref * (1/C + 1/t))^b < C^a.
    Only practical for moderate ``b`` and ``C``.
    """
    eps = Fraction(eps)
    t = eps / 10
    lhs = prefactor(N, eps, delta) * (Fraction(1, C) + 1 / t)
    return lhs**t.denominator < Fraction(C) ** t.numerator


# ---------------------------------------------------------------- sequences

@dataclass(frozen=True)
class SequenceSpec:
    kind: str  # "primes" or "explicit"
    N: int
    eps: Fraction
    sizes: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", Fraction(self.eps))
        if self.kind not in ("primes", "explicit"):
            raise InvalidInputError(f"unknown sequence kind {self.kind!r}")
        if self.N < 1:
            raise InvalidInputError("N must be >= 1")
        if self.kind == "explicit":
            object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
            if not self.sizes:
                raise InvalidInputError("explicit sequence needs sizes")
            if min(self.sizes) < 2:
                raise InvalidInputError("every |S_k| must be >= 2")


@dataclass
class BoundResult:
    C: int
    exponent: int | None  # C == 10**exponent when the coarse search was used
    delta: Fraction
    audit: list[dict] = field(default_factory=list)

    def C_string(self) -> str:
        return f"1e{self.exponent}" if self.exponent is not None else str(self.C)


def _check_growth(spec: SequenceSpec, K: int) -> dict:
    eps = spec.eps
    if spec.kind == "primes":
        K = max(K, spec.N)
        ok, bad = verify_prime_growth(spec.N, eps, K)
    else:
        K = len(spec.sizes)
        if spec.N > K:
            raise InvalidInputError(f"N = {spec.N} beyond the {K} listed sizes")
        bad = next(
            (k for k in range(spec.N, K + 1) if spec.sizes[k - 1] < (3 + eps) * k), None
        )
        ok = bad is None
    if not ok:
        raise HypothesisViolationError(
            f"|S_k| >= (3 + eps) k fails at k = {bad}"
        )
    return {"check": "growth", "range": [spec.N, K], "holds": True}


def _probe_entry(C: int, exponent: int | None, eps, N: int, delta) -> tuple[bool, dict]:
    holds, x = criterion_holds(C, eps, N, delta)
    _, hi = log10_bounds(x)
    entry = {
        "check": "probe",
        "C": f"1e{exponent}" if exponent is not None else str(C),
        "passes": holds,
        "log10_lhs": decimal_string(hi, up=True),
        "rounding": "up",
    }
    return holds, entry


def min_C(spec: SequenceSpec, delta=None, growth_range: int = DEFAULT_GROWTH_RANGE) -> BoundResult:
    """Smallest accepted C >= N: doubling then bisection, exact up to 10^6, powers of 10 beyond."""
    eps = spec.eps
    if not scalar_condition(eps):
        raise UnsupportedEpsilonError(f"(1 - eps/6)(3 + eps)(1 - eps/10) < 3 for eps = {eps}")
    if delta is not None:
        delta = Fraction(delta)
        if not 0 < delta <= Fraction(1, 2):
            raise UnsupportedEpsilonError(f"delta must lie in (0, 1/2], got {delta}")
        if (1 - delta) * (3 + eps) * (1 - eps / 10) < 3:
            raise UnsupportedEpsilonError(f"(1 - delta)(3 + eps)(1 - eps/10) < 3 for delta = {delta}")
    used_delta = eps / 6 if delta is None else delta

    audit = [
        {"check": "scalar_condition", "value": str(scalar_condition_value(eps)), "holds": True},
        _check_growth(spec, growth_range),
    ]
    N = spec.N

    def probe(C: int, exponent: int | None = None) -> bool:
        holds, entry = _probe_entry(C, exponent, eps, N, delta)
        audit.append(entry)
        return holds

    def done(C: int, exponent: int | None, failing: str | None) -> BoundResult:
        audit.append({"check": "result", "passing": f"1e{exponent}" if exponent is not None else str(C),
                      "previous_failing": failing})
        return BoundResult(C, exponent, used_delta, audit)

    if probe(N):
        return done(N, None, None)

    # integer phase
    lo, C = N, 2 * N
    while C <= EXACT_SEARCH_LIMIT:
        if probe(C):
            break
        lo, C = C, 2 * C
    else:
        C = None
        if lo < EXACT_SEARCH_LIMIT:
            if probe(EXACT_SEARCH_LIMIT):
                C = EXACT_SEARCH_LIMIT
            else:
                lo = EXACT_SEARCH_LIMIT
    if C is not None:
        hi = C
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if probe(mid):
                hi = mid
            else:
                lo = mid
        return done(hi, None, str(lo))

    # powers of ten beyond the integer phase
    e_lo = max(6, len(str(N)) - 1)
    labels = {e_lo: str(max(N, EXACT_SEARCH_LIMIT))}  # what actually failed at the bottom
    e = e_lo + 1
    while not probe(10**e, e):
        e_lo, e = e, 2 * e
        if e > MAX_EXPONENT:
            raise UnsupportedEpsilonError(f"no C up to 1e{MAX_EXPONENT} satisfies the criterion")
    e_hi = e
    while e_hi - e_lo > 1:
        mid = (e_lo + e_hi) // 2
        if probe(10**mid, mid):
            e_hi = mid
        else:
            e_lo = mid
    return done(10**e_hi, e_hi, labels.get(e_lo, f"1e{e_lo}"))


# ---------------------------------------------------------------- primorial size

EXACT_PRIMORIAL_LIMIT = 1000


def primorial_log_upper(C: int) -> Fraction:
    """Upper bound on ln(p_1 ... p_C) valid for every C >= 6.

    Uses theta(x) < 1.01624 x and p_C < C (ln C + ln ln C).
    """
    if C < 6:
        raise InvalidInputError("bound needs C >= 6")
    with _ivprec(128):
        c = iv.mpf(C)
        x = _iv_rational(Fraction(101624, 100000)) * c * (iv.log(c) + iv.log(iv.log(c)))
        return _endpoints(x)[1]


def min_modulus_summary(C: int) -> dict:
    """The primorial bound on the minimum modulus, exact when small, else in log form."""
    if C <= EXACT_PRIMORIAL_LIMIT:
        return {"primorial": str(math.prod(primes_upto_index(C)))}
    u = primorial_log_upper(C)
    with _ivprec(128):
        _, hi = log10_bounds(_iv_rational(u))
    return {
        "log10_ln_primorial": decimal_string(hi, up=True),
        "rounding": "up",
    }


def sizes_from_primes(n: int) -> Sequence[int]:
    return primes_upto_index(n)
