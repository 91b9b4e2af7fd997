import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coverlab.crt import (
    APSystem,
    ArithmeticProgression,
    ap_to_hyperplane,
    point_to_residue,
    primes_upto_index,
    residue_to_point,
    min_modulus_bound,
    system_to_instance,
    verify_prime_growth,
)
from coverlab.errors import SpaceTooSmallError, SquarefreeViolationError, TriviallyCoveringError
from coverlab.model import Hyperplane, contains, find_parallel_pair


def trial_division_primes(count):
    out, m = [], 2
    while len(out) < count:
        if all(m % p for p in out if p * p <= m):
            out.append(m)
        m += 1
    return out


def test_primes_upto_index():
    assert primes_upto_index(1) == [2]
    assert primes_upto_index(5) == [2, 3, 5, 7, 11]
    assert primes_upto_index(31)[-1] == 127
    assert primes_upto_index(500) == trial_division_primes(500)


def test_ap_to_hyperplane():
    assert ap_to_hyperplane(ArithmeticProgression(1, 6), [2, 3, 5]) == Hyperplane(((1, 1), (2, 1)))
    assert ap_to_hyperplane(ArithmeticProgression(0, 1), [2, 3]) == Hyperplane()
    with pytest.raises(SquarefreeViolationError):
        ap_to_hyperplane(ArithmeticProgression(3, 4), [2, 3])
    with pytest.raises(SpaceTooSmallError):
        ap_to_hyperplane(ArithmeticProgression(0, 7), [2, 3, 5])


def test_residues_are_normalised():
    assert ArithmeticProgression(-1, 6).a == 5
    assert ArithmeticProgression(13, 6).a == 1


def test_system_to_instance():
    inst = system_to_instance(APSystem.build([(0, 2), (0, 3), (1, 6)]))
    assert inst.space.sizes == (2, 3)
    assert [set(h.F) for h in inst.hyperplanes] == [{1}, {2}, {1, 2}]

    inst = system_to_instance(APSystem.build([(0, 6), (1, 6)]))
    assert find_parallel_pair(inst) == (0, 1)

    inst = system_to_instance(APSystem.build([(0, 2)]))
    assert inst.space.sizes == (2,)
    assert inst.hyperplanes == (Hyperplane(((1, 0),)),)


def test_system_to_instance_dimension_is_minimal():
    inst = system_to_instance(APSystem.build([(3, 7)]))
    assert inst.space.sizes == (2, 3, 5, 7)
    assert inst.hyperplanes[0] == Hyperplane(((4, 3),))


def test_system_to_instance_errors():
    with pytest.raises(TriviallyCoveringError):
        system_to_instance(APSystem.build([(0, 1), (0, 2)]))
    with pytest.raises(SquarefreeViolationError):
        system_to_instance(APSystem.build([(0, 2), (1, 4)]))


def test_min_modulus_bound():
    assert min_modulus_bound(1) == 2
    assert min_modulus_bound(4) == 210
    assert min_modulus_bound(10) == 6469693230


def test_verify_prime_growth():
    assert verify_prime_growth(31, Fraction(1), 31) == (True, None)
    assert verify_prime_growth(1, Fraction(1), 30) == (False, 1)
    # p_30 = 113 < 120: the threshold 31 is the first index from which p_k >= 4k holds for a while
    assert verify_prime_growth(30, Fraction(1), 40) == (False, 30)


def squarefree(d):
    return all(d % (p * p) for p in range(2, math.isqrt(d) + 1))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 500), st.sampled_from(
    [d for d in range(2, 211) if squarefree(d) and 210 % d == 0])), min_size=1, max_size=8))
def test_crt_round_trip(pairs):
    sys_ = APSystem.build(pairs)
    inst = system_to_instance(sys_)
    primes = list(inst.space.sizes)
    M = math.prod(primes)
    assert M % sys_.lcm() == 0
    for z in range(M):
        point = residue_to_point(z, primes)
        assert point_to_residue(point, primes) == z
        by_ap = any(z in ap for ap in sys_.progressions)
        by_h = any(contains(h, point) for h in inst.hyperplanes)
        assert by_ap == by_h


def test_distinct_moduli_give_nonparallel():
    rng = random.Random(5)
    divisors = [d for d in range(2, 2311) if 2310 % d == 0]
    for _ in range(50):
        moduli = rng.sample(divisors, rng.randint(1, 12))
        sys_ = APSystem.build((rng.randrange(d), d) for d in moduli)
        assert find_parallel_pair(system_to_instance(sys_)) is None


def test_primorial_divisible_by_small_moduli():
    sys_ = APSystem.build([(1, 6), (2, 10), (0, 15), (4, 21)])
    inst = system_to_instance(sys_)
    for ap, h in zip(sys_.progressions, inst.hyperplanes):
        C = max(h.F)
        assert min_modulus_bound(C) % ap.d == 0
