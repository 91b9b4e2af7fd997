"""Search for coverings with distinct square-free moduli and record hits in the catalog.

    python scripts/search_covers.py 2 3 5 7          # search divisors of 210
    python scripts/search_covers.py 2 3 5 --no-record
"""

import argparse
import json
import math
import time

from coverlab import catalog
from coverlab.catalog import CatalogEntry, search_squarefree_cover


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("primes", type=int, nargs="+")
    parser.add_argument("--no-record", action="store_true")
    parser.add_argument("--catalog-dir", default=str(catalog.DATA_DIR))
    args = parser.parse_args()

    L = math.prod(args.primes)
    t0 = time.perf_counter()
    found = search_squarefree_cover(args.primes)
    elapsed = time.perf_counter() - t0
    print(f"divisors of {L}: {'found' if found else 'none'} ({elapsed:.3f}s)")
    if found is None:
        return
    print(json.dumps(found.to_json()))
    if not args.no_record:
        name = f"squarefree-{L}-cover"
        entry = CatalogEntry(name, "ap-system", found, "covered",
                             f"derived by search over square-free divisors of {L}")
        print("recorded", catalog.record(entry, args.catalog_dir))


if __name__ == "__main__":
    main()
