"""Exit criteria, one test each.  Run ``pytest tests/test_acceptance.py`` for the
PASS/FAIL summary printed at the end of the session."""

import json
import math
import random
import time
from fractions import Fraction

import pytest
from mpmath import iv

from coverlab import crt
from coverlab.bounds import _endpoints, _ivprec, criterion_holds, scalar_condition_value, tail_bound
from coverlab.certifier import NOT_COVERING, certify
from coverlab.cli import main
from coverlab.crt import (
    APSystem,
    point_to_residue,
    primes_upto_index,
    residue_to_point,
    system_to_instance,
    verify_prime_growth,
)
from coverlab.distortion import run
from coverlab.exact import ap_is_covering, covered_point_mask, is_covering
from coverlab.invariants import check_certificates, check_trace, corpus
from coverlab.model import Instance, find_parallel_pair

CORPUS_SEED = 2024
CORPUS_SIZE = 240


@pytest.fixture(scope="module")
def random_corpus():
    return corpus(CORPUS_SIZE, seed=CORPUS_SEED, max_n=6, max_size=8, max_hyperplanes=12)


def _bound_cli(capsys, *argv):
    code = main(["bound", *argv])
    return code, json.loads(capsys.readouterr().out)


def test_ac1_prime_constant_at_1e200(capsys):
    """C = 10^200 passes for primes with eps = 1, N = 31, delta = 1/6; bound returns C <= 10^200."""
    # exact: 4^31 (10^-220 + 10 * 10^-20) < 1
    assert Fraction(4**31) * (Fraction(1, 10**220) + 10 * Fraction(1, 10**20)) < 1
    holds, enclosure = criterion_holds(10**200, Fraction(1), 31)
    assert holds and _endpoints(enclosure)[1] < 1

    crt._sieve_cache, crt._sieve_limit = [], 1  # time the sieve too
    t0 = time.perf_counter()
    code, doc = _bound_cli(capsys, "--sequence", "primes", "--eps", "1", "--N", "31")
    elapsed = time.perf_counter() - t0
    assert code == 0
    assert doc["delta"] == "1/6"
    C = doc["C"]
    value = 10 ** int(C[2:]) if C.startswith("1e") else int(C)
    assert value <= 10**200
    assert elapsed < 5, elapsed


def test_ac2_prime_growth():
    """p_k >= 4k for 31 <= k <= 10^6, and p_31 = 127."""
    crt._sieve_cache, crt._sieve_limit = [], 1
    t0 = time.perf_counter()
    assert verify_prime_growth(31, Fraction(1), 10**6) == (True, None)
    elapsed = time.perf_counter() - t0
    primes = primes_upto_index(10**6)
    assert primes[30] == 127
    assert primes[-1] == 15485863  # the millionth prime
    assert elapsed < 10, elapsed


def test_ac3_scalar_condition():
    """(1 - eps/6)(3 + eps)(1 - eps/10) = 3 exactly at eps = 1."""
    assert scalar_condition_value(Fraction(1)) == 3
    assert Fraction(5, 6) * 4 * Fraction(9, 10) == 3


def test_ac4_micro_instance():
    """(2,2) with {1->0}, {2->0}, delta = 1/4: the full worked example."""
    inst = Instance.build((2, 2), [{1: 0}, {2: 0}])
    delta = Fraction(1, 4)
    trace = run(inst, delta, trace_full=True)
    assert trace.states[1].weights == {(0,): Fraction(1, 3), (1,): Fraction(2, 3)}
    assert trace.per_round[1].covered_mass == Fraction(1, 3)
    assert trace.residual_lower_bound == Fraction(1, 3)
    assert trace.final.weight((1, 1)) == Fraction(4, 9) >= Fraction(1, 3)
    cert = certify(inst, delta, "exact")
    assert cert.criterion_sum == Fraction(2, 3) and cert.verdict == NOT_COVERING
    verdict = is_covering(inst)
    assert not verdict.covered and verdict.witness == (1, 1)


def test_ac5_invariant_suite(random_corpus):
    """Normalization, consistency, domination, per-round and hyperplane bounds on >= 200 instances."""
    assert len(random_corpus) >= 200
    assert all(inst.space.n <= 6 and max(inst.space.sizes) <= 8 and len(inst.hyperplanes) <= 12
               for inst, _ in random_corpus)
    t0 = time.perf_counter()
    violations = []
    for i, (inst, delta) in enumerate(random_corpus):
        violations += [f"#{i}: {v}" for v in check_trace(inst, delta)]
    elapsed = time.perf_counter() - t0
    assert violations == []
    assert elapsed < 60, elapsed


def test_ac6_mode_ordering_and_soundness(random_corpus):
    """exact <= pairwise <= product on non-parallel instances; NOT_COVERING always confirmed."""
    nonparallel = [(inst, d) for inst, d in random_corpus if find_parallel_pair(inst) is None]
    nonparallel += corpus(200, seed=CORPUS_SEED + 1, nonparallel=True)
    assert len(nonparallel) >= 200
    violations = []
    certified = 0
    for i, (inst, delta) in enumerate(nonparallel):
        violations += [f"#{i}: {v}" for v in check_certificates(inst, delta)]
        certified += certify(inst, delta, "exact").verdict == NOT_COVERING
    for i, (inst, delta) in enumerate(random_corpus):
        violations += [f"all#{i}: {v}" for v in check_certificates(inst, delta)]
    assert violations == []
    assert certified > 0


def _random_squarefree_system(rng):
    pool = [2, 3, 5, 7, 11, 13, 17]
    while True:
        primes = sorted(rng.sample(pool, rng.randint(1, len(pool))))
        if math.prod(primes) <= 10**6:
            break
    divisors = [d for d in range(2, math.prod(primes) + 1) if math.prod(primes) % d == 0]
    count = rng.randint(1, 30)
    small = [d for d in divisors if d <= 30] or divisors
    pairs = []
    for _ in range(count):
        d = rng.choice(small if rng.random() < 0.6 else divisors)
        pairs.append((rng.randrange(d), d))
    return APSystem.build(pairs)


def test_ac7_crt_equivalence():
    """ap_is_covering agrees with is_covering on the CRT image; witnesses correspond."""
    rng = random.Random(77)
    systems = [_random_squarefree_system(rng) for _ in range(60)]
    outcomes = set()
    for sys_ in systems:
        assert sys_.lcm() <= 10**6
        inst = system_to_instance(sys_)
        primes = list(inst.space.sizes)
        a = ap_is_covering(sys_)
        h = is_covering(inst)
        assert a.covered == h.covered
        assert Fraction(a.uncovered_count, a.total_count) == Fraction(h.uncovered_count, h.total_count)
        outcomes.add(a.covered)
        if not a.covered:
            mask = covered_point_mask(inst)
            assert not mask[residue_to_point(a.witness[0], primes)]
            z = point_to_residue(h.witness, primes) % sys_.lcm()
            assert not any(z in ap for ap in sys_.progressions)
    assert outcomes == {True, False}


def test_ac8_reference_constants(capsys):
    """Reference values are carried in bound output metadata."""
    _, doc = _bound_cli(capsys, "--sequence", "primes", "--eps", "1", "--N", "31")
    text = json.dumps(doc["reference_constants"])
    assert "1e16" in text
    assert "less than 1e6" in text
    assert "exp(1e200)" in text


def _partial_sum_upper(C, eps, K=10**6):
    """Rigorous upper bound on sum_{k=C}^{K} k^(-1-eps/10): exact terms near C, then
    geometric blocks bounded by (block length) * (first term)."""
    t = Fraction(eps) / 10
    expo = -(1 + iv.mpf(t.numerator) / t.denominator)
    total = iv.mpf(0)
    k = C
    with _ivprec(80):
        while k <= K:
            b = k + 1 if k < C + 2000 else min(K + 1, k + max(1, k // 2000))
            total += (b - k) * iv.mpf(k) ** expo
            k = b
        return _endpoints(total)[1]


@pytest.mark.parametrize("C", [10, 100, 1000])
@pytest.mark.parametrize("eps", [Fraction(1, 2), Fraction(1)])
def test_ac9_tail_bound_rigor(C, eps):
    """TailBound(C, eps) >= sum_{k=C}^{10^6} k^(-1-eps/10)."""
    t0 = time.perf_counter()
    upper = _partial_sum_upper(C, eps)
    lower_tail, _ = _endpoints(tail_bound(C, eps))
    assert upper <= lower_tail
    direct = math.fsum(k ** (-1 - float(eps) / 10) for k in range(C, 10**6 + 1))
    assert direct <= float(upper) * (1 + 1e-12)
    assert time.perf_counter() - t0 < 60
