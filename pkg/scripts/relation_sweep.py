"""Kernel relations of the pairing for every catalog datum, weight by weight.

    python scripts/relation_sweep.py [--max-degree 4]

Prints the number of relations per weight and the relations themselves for
weights where the free algebra first drops rank (new generators of the kernel).
"""
import argparse
import time

from qsuper.cartan import CATALOG, catalog_lookup
from qsuper.pairing import kernel_basis, quotient_basis, weights_of_degree


def sweep(name: str, max_degree: int):
    datum = catalog_lookup(name)
    qb = quotient_basis(datum, max_degree)
    t0 = time.perf_counter()
    print(f"== {name}  A={datum.canonical()['A']} tau={sorted(datum.tau)} d={datum.canonical()['d']}")
    for n in range(2, max_degree + 1):
        for mu in weights_of_degree(datum.s, n):
            block = qb.gram(mu)
            rels = kernel_basis(datum, mu, block=block)
            if not rels:
                continue
            print(f"  {str(mu.coords):12s} words {len(block.monomials):3d}  kernel {len(rels):3d}")
            if n <= 4 and len(rels) <= 2:
                for r in rels:
                    print("      " + r.format())
    print(f"  ({time.perf_counter() - t0:.2f}s)")


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--datum", action="append")
    args = p.parse_args()
    for name in args.datum or sorted(CATALOG):
        sweep(name, args.max_degree)


if __name__ == "__main__":
    main()
