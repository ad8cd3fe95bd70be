"""Exact braid traces from the R-matrix vs numerical KZ monodromy.

    python scripts/dk_check.py [--order 4] [--tol 1e-8]

Prints per-order trace deviations for a few words on the sl2 vector and the
sl(2|1) fundamental modules, the flatness defect for n = 3, and the n = 2
comparison of transports with exp(h Omega / 2) and exp(h Omega).
"""
import argparse
import time
import warnings

import numpy as np

from qsuper.cartan import catalog_lookup
from qsuper.errors import TruncationWarning
from qsuper.kz import KZSystem, casimir_action, dk_compare, rkz_consistency
from qsuper.verma import build_verma, irreducible_quotient

CASES = [("sl2", [1]), ("sl(2|1)", [1, 0]), ("sl(2|1)", [0, 1]), ("sl3", [1, 0])]
WORDS = {2: ["s1", "s1 s1", "s1^-1"], 3: ["s1 s2", "s1 s2 s1", "s1 s2^-1 s1"]}


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-8)
    args = p.parse_args()
    for name, lam in CASES:
        datum = catalog_lookup(name)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            V = irreducible_quotient(build_verma(datum, lam, 4))
        eig = casimir_action(datum, V, V).eigenvalues()
        print(f"== {name} L={tuple(lam)} dim {V.dim}; Omega eigenvalues {eig}")
        for n, words in WORDS.items():
            t0 = time.perf_counter()
            system = KZSystem(datum, V, n, args.order, args.tol)
            rows = dk_compare(datum, V, n, words, args.order, args.tol, system=system)
            for w in words:
                devs = [r.deviation for r in rows if r.word == w]
                print(f"  n={n} {w:14s} " + " ".join(f"{d:.1e}" for d in devs))
            if n == 3:
                a, b = system.word("s1 s2 s1").coeffs, system.word("s2 s1 s2").coeffs
                print(f"  flatness defect {np.max(np.abs(a - b)):.1e}")
            print(f"  ({time.perf_counter() - t0:.1f}s)")
        print("  closed forms:", {k: f"{v:.1e}" for k, v in rkz_consistency(datum, V, args.order, args.tol).items()})


if __name__ == "__main__":
    main()
