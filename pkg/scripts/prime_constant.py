"""Explicit C for the prime sequence and the resulting minimum-modulus scale.

    python scripts/prime_constant.py --eps 1 --N 31
"""

import argparse
from fractions import Fraction

from coverlab.bounds import SequenceSpec, criterion_holds_exact, min_C, min_modulus_summary


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--eps", type=Fraction, default=Fraction(1))
    parser.add_argument("--N", type=int, default=31)
    args = parser.parse_args()

    result = min_C(SequenceSpec("primes", args.N, args.eps))
    for row in result.audit:
        print(row)
    print("C =", result.C_string())
    if args.eps.denominator * 10 <= 200:
        print("exact recheck at C:", criterion_holds_exact(result.C, args.eps, args.N))
        print("exact recheck at 1e200:", criterion_holds_exact(10**200, args.eps, args.N))
    print("minimum modulus:", min_modulus_summary(result.C))


if __name__ == "__main__":
    main()
