"""Quantum vs classical characters of irreducible highest-weight modules.

    python scripts/character_table.py [--cut 4]

For each catalog datum and a few small weights prints the depth-by-depth
ranks of the irreducible quotient at generic q next to the classical
Shapovalov ranks, and flags atypical weights (odd rank drop at depth 1).
"""
import argparse
import itertools
import warnings

from qsuper.cartan import CATALOG, catalog_lookup
from qsuper.errors import TruncationWarning
from qsuper.verma import (build_verma, character, classical_character, irreducible_quotient,
                          is_atypical_at_depth_one)


def weights(datum, top: int):
    for lam in itertools.product(range(top + 1), repeat=datum.s):
        if datum.name == "osp(1|2)":
            lam = (2 * lam[0],)
        yield list(lam)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--cut", type=int, default=4)
    p.add_argument("--top", type=int, default=1, help="largest value of L(h_i) to try")
    args = p.parse_args()
    mismatches = 0
    for name in sorted(CATALOG):
        datum = catalog_lookup(name)
        print(f"== {name}")
        for lam in weights(datum, args.top):
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", TruncationWarning)
                q = character(irreducible_quotient(build_verma(datum, lam, args.cut)))
            c = classical_character(datum, lam, args.cut)
            same = q.by_weight == c.by_weight
            mismatches += not same
            qrow = [q.by_depth.get(n, 0) for n in range(args.cut + 1)]
            crow = [c.by_depth.get(n, 0) for n in range(args.cut + 1)]
            flags = []
            if datum.tau and is_atypical_at_depth_one(datum, lam):
                flags.append("atypical")
            if caught:
                flags.append("truncated")
            print(f"  L={tuple(lam)!s:12s} quantum {qrow}  classical {crow}  "
                  f"{'equal' if same else 'DIFFERENT'} {' '.join(flags)}")
    print(f"{mismatches} mismatches")


if __name__ == "__main__":
    main()
