"""Batch front-end.

    qsuper relations --datum sl3 --max-degree 3
    qsuper verma --datum "sl(2|1)" --weight 1,0 --cut 4
    qsuper braid --datum sl2 --module vector --n 3
    qsuper dk --datum sl2 --module vector --n 2 --word "s1 s1" --order 4
    qsuper twist --structure sweedler --gauges 20
    qsuper cache info

Exit status: 0 success, 1 a checked residual or equality failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .braiding import parse_braid_word
from .cache import GramCache, default_dir
from .cartan import CATALOG, CartanDatum, WeightFunctional, catalog_lookup, load_cartan
from .errors import QSuperError, ToleranceNotMet, TruncationWarning
from .scalars import format_scalar, parse_rational

# highest weights of the named small modules, per catalog datum
NAMED_MODULES = {
    "sl2": {"trivial": (0,), "vector": (1,), "adjoint": (2,)},
    "sl3": {"trivial": (0, 0), "vector": (1, 0), "dual": (0, 1)},
    "sp4": {"trivial": (0, 0), "vector": (1, 0)},
    "sl(2|1)": {"trivial": (0, 0), "vector": (1, 0), "fundamental": (1, 0)},
    "osp(1|2)": {"trivial": (0,), "vector": (2,)},
    "sl(2|2)": {"trivial": (0, 0, 0), "vector": (1, 0, 0)},
    "sl(3|1)": {"trivial": (0, 0, 0), "vector": (1, 0, 0)},
}


class InputError(Exception):
    pass


@dataclass(frozen=True)
class JobConfig:
    """Validated view of the command line."""

    command: str
    datum: str | None = None
    weight: str | None = None
    cut: int | None = None
    n: int | None = None
    words: tuple = ()
    order: int | None = None
    tol: float | None = None
    out: str | None = None
    cache_dir: str | None = None

    def __post_init__(self):
        for key in ("cut", "n", "order"):
            v = getattr(self, key)
            if v is not None and v < 0:
                raise InputError(f"--{key} must be >= 0")
        if self.tol is not None and not self.tol > 0:
            raise InputError("--tol must be positive")
        for w in self.words:
            parse_braid_word(w)

    @classmethod
    def from_args(cls, args) -> "JobConfig":
        cut = getattr(args, "cut", None)
        if cut is None:
            cut = getattr(args, "max_degree", None)
        if getattr(args, "gauges", 0) < 0:
            raise InputError("--gauges must be >= 0")
        return cls(command=args.command, datum=getattr(args, "datum", None),
                   weight=getattr(args, "weight", None), cut=cut, n=getattr(args, "n", None),
                   words=tuple(getattr(args, "word", None) or ()), order=getattr(args, "order", None),
                   tol=getattr(args, "tol", None), out=args.out, cache_dir=args.cache_dir)


def resolve_datum(text: str) -> CartanDatum:
    path = Path(text)
    if text not in CATALOG and path.suffix == ".json" and path.exists():
        return load_cartan(path.read_text())
    return catalog_lookup(text)


def parse_weight(text: str, s: int) -> WeightFunctional:
    try:
        vals = [parse_rational(v) for v in text.split(",")]
    except QSuperError as exc:
        raise InputError(str(exc)) from exc
    if len(vals) != s:
        raise InputError(f"weight {text!r} has {len(vals)} entries, rank is {s}")
    return WeightFunctional.of(vals)


def module_weight(datum: CartanDatum, name: str | None, weight: str | None) -> WeightFunctional:
    if weight:
        return parse_weight(weight, datum.s)
    table = NAMED_MODULES.get(datum.name, {})
    if name not in table:
        raise InputError(f"unknown module {name!r} for {datum.name or 'this datum'}; "
                         f"use --weight or one of {sorted(table)}")
    return WeightFunctional.of(table[name])


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _weight_str(w: WeightFunctional) -> str:
    return ",".join(_frac(v) for v in w.values)


# ---------------------------------------------------------------------------
# commands


def cmd_relations(args, cache) -> tuple[dict, list, bool]:
    from .free_algebra import AlgebraElement, format_word
    from .pairing import kernel_basis, pair, quotient_basis, weights_of_degree

    datum = resolve_datum(args.datum)
    qb = quotient_basis(datum, args.max_degree, cache=cache)
    rels = []
    lines = []
    ok = True
    for n in range(1, args.max_degree + 1):
        for mu in weights_of_degree(datum.s, n):
            block = qb.gram(mu)
            for rel in kernel_basis(datum, mu, block=block):
                # each relation must pair to zero with every word of its weight
                for w in block.monomials:
                    if not pair(datum, AlgebraElement.word(datum, w), rel).is_zero():
                        ok = False
                terms = [[format_word(w), format_scalar(c)] for w, c in sorted(rel.terms.items())]
                rels.append({"weight": list(mu.coords), "relation": terms})
                lines.append(f"{mu}: " + " + ".join(f"({c})*{w}" for w, c in terms))
    report = {"command": "relations", "datum": datum.canonical(), "digest": datum.digest(),
              "max_degree": args.max_degree, "relations": rels, "all_pair_to_zero": ok}
    lines.insert(0, f"{len(rels)} kernel relations for {datum} up to degree {args.max_degree}")
    return report, lines, ok


def cmd_verma(args, cache) -> tuple[dict, list, bool]:
    from .pairing import quotient_basis
    from .verma import build_verma, character, classical_character, irreducible_quotient

    datum = resolve_datum(args.datum)
    lam = module_weight(datum, args.module, args.weight)
    qb = quotient_basis(datum, args.cut, cache=cache)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        quantum = character(irreducible_quotient(build_verma(datum, lam, args.cut, qb=qb)))
    classical = classical_character(datum, lam, args.cut)
    weights = sorted(set(quantum.by_weight) | set(classical.by_weight),
                     key=lambda m: (m.total, [-c for c in m.coords]))
    rows, ok = [], True
    for mu in weights:
        rq, rc = quantum.by_weight.get(mu, 0), classical.by_weight.get(mu, 0)
        ok &= rq == rc
        rows.append({"depth": mu.total, "weight": list(mu.coords), "rank_quantum": rq,
                     "rank_classical": rc, "equal": "yes" if rq == rc else "no"})
    truncated = any(issubclass(w.category, TruncationWarning) for w in caught)
    report = {"command": "verma", "datum": datum.canonical(), "digest": datum.digest(),
              "weight": _weight_str(lam), "cut": args.cut, "rows": rows,
              "valid_below_depth": args.cut - 1 if truncated else args.cut, "equal": ok}
    lines = [f"character of V({_weight_str(lam)}) for {datum}, depth cut {args.cut}",
             "depth  weight      quantum  classical  equal"]
    for r in rows:
        lines.append(f"{r['depth']:5d}  {str(tuple(r['weight'])):10s}  {r['rank_quantum']:7d}  "
                     f"{r['rank_classical']:9d}  {r['equal']}")
    if truncated:
        lines.append(f"note: nonzero rank at the cut; the quotient is exact below depth {args.cut - 1}")
    return report, lines, ok


def _finite_module(datum, lam, cut):
    from .verma import build_verma, irreducible_quotient

    with warnings.catch_warnings():
        warnings.simplefilter("error", TruncationWarning)
        try:
            return irreducible_quotient(build_verma(datum, lam, cut))
        except TruncationWarning as exc:
            raise InputError(f"module V({_weight_str(lam)}) is not finite within depth {cut}; "
                             f"raise --cut") from exc


def cmd_braid(args, cache) -> tuple[dict, list, bool]:
    from .braiding import (braid_generator, braid_representation, braid_residuals,
                           classical_limit_residual, intertwining_residuals, r_matrix, ybe_residual)

    datum = resolve_datum(args.datum)
    lam = module_weight(datum, args.module, args.weight)
    V = _finite_module(datum, lam, args.cut)
    R = r_matrix(datum, V, V)
    rep = braid_representation(datum, V, args.n, R)
    res = {"ybe": ybe_residual(datum, V, R), "classical_limit": classical_limit_residual(datum, V, R)}
    res.update({f"intertwine_{k}": v for k, v in intertwining_residuals(datum, V, V, R).items()})
    res.update(braid_residuals(rep))
    gen = braid_generator(datum, V, R)
    matrix = [[format_scalar(x) for x in row] for row in gen.dense()]
    ok = all(v == 0 for v in res.values())
    report = {"command": "braid", "datum": datum.canonical(), "digest": datum.digest(),
              "weight": _weight_str(lam), "dim": V.dim, "n": args.n,
              "check_R": matrix, "residuals": res, "ok": ok}
    lines = [f"braid representation on V({_weight_str(lam)})^(x){args.n}, dim V = {V.dim}"]
    lines += [f"  {k}: {v}" for k, v in res.items()]
    return report, lines, ok


def cmd_dk(args, cache) -> tuple[dict, list, bool]:
    from .kz import dk_compare

    datum = resolve_datum(args.datum)
    lam = module_weight(datum, args.module, args.weight)
    V = _finite_module(datum, lam, args.cut)
    words = args.word or ["s1"]
    rows = dk_compare(datum, V, args.n, words, args.order, args.tol)
    budget = 10 * args.tol
    ok = all(r.deviation <= budget for r in rows)
    out_rows = [{"word": r.word, "order": r.order, "deviation": float(f"{r.deviation:.3e}")}
                for r in rows]
    report = {"command": "dk", "datum": datum.canonical(), "module": _weight_str(lam), "n": args.n,
              "N": args.order, "tol": args.tol, "budget": budget, "rows": out_rows, "ok": ok}
    lines = [f"Drinfeld-Kohno trace comparison on V({_weight_str(lam)})^(x){args.n}, budget {budget:.1e}"]
    lines += [f"  {r['word']:12s} h^{r['order']}  |dtrace| = {r['deviation']:.3e}" for r in out_rows]
    return report, lines, ok


def cmd_twist(args, cache) -> tuple[dict, list, bool]:
    from .twist import apply_gauge, axiom_residuals, load_structure, plain_hexagons, random_gauge

    try:
        S = load_structure(args.structure)
    except FileNotFoundError as exc:
        raise InputError(f"no structure {args.structure!r}") from exc
    rng = random.Random(args.seed)
    rows, ok = [], True
    base = {k: str(v) for k, v in axiom_residuals(S).items()}
    ok &= all(v == "0" for v in base.values())
    for g in range(args.gauges):
        J = random_gauge(S, rng)
        T = apply_gauge(S, J)
        res = axiom_residuals(T)
        ok &= all(v == 0 for v in res.values())
        flags = {k: str(v) for k, v in plain_hexagons(T).items()}
        rows.append({"gauge": g, "residuals": {k: str(v) for k, v in res.items()}, "plain": flags})
    report = {"command": "twist", "structure": S.name, "order": S.order, "seed": args.seed,
              "untwisted": base, "gauges": rows, "ok": ok}
    lines = [f"{S.name}: untwisted residuals {base}",
             f"{args.gauges} random gauges: {'all residuals zero' if ok else 'NONZERO residuals'}"]
    return report, lines, ok


def cmd_cache(args, cache) -> tuple[dict, list, bool]:
    c = cache or GramCache(args.cache_dir)
    if args.action == "clear":
        n = c.clear()
        return {"command": "cache", "cleared": n}, [f"removed {n} entries from {c.dir}"], True
    entries = c.entries()
    report = {"command": "cache", "dir": str(c.dir), "entries": len(entries), "bytes": c.size_bytes()}
    return report, [f"{c.dir}: {len(entries)} entries, {report['bytes']} bytes"], True


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsuper", description="Quantum superalgebra desk computations")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--cache-dir", help=f"Gram cache directory (default {default_dir()})")
    p.add_argument("--no-cache", action="store_true", help="do not read or write the Gram cache")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("relations", help="kernel relations of the pairing by weight")
    r.add_argument("--datum", required=True, help="catalog name or Cartan JSON file")
    r.add_argument("--max-degree", type=int, default=3)

    v = sub.add_parser("verma", help="quantum vs classical characters")
    v.add_argument("--datum", required=True)
    v.add_argument("--weight", help="comma separated values on h_1..h_s, e.g. 1,0")
    v.add_argument("--module", help="named module instead of --weight")
    v.add_argument("--cut", type=int, default=4)

    b = sub.add_parser("braid", help="braid generators, YBE and braid residuals")
    b.add_argument("--datum", required=True)
    b.add_argument("--module", default="vector")
    b.add_argument("--weight")
    b.add_argument("--n", type=int, default=3)
    b.add_argument("--cut", type=int, default=4)

    d = sub.add_parser("dk", help="exact vs KZ monodromy traces")
    d.add_argument("--datum", required=True)
    d.add_argument("--module", default="vector")
    d.add_argument("--weight")
    d.add_argument("--n", type=int, default=2)
    d.add_argument("--word", action="append", help="braid word like 's1 s2 s1^-1' (repeatable)")
    d.add_argument("--order", type=int, default=4)
    d.add_argument("--tol", type=float, default=1e-8)
    d.add_argument("--cut", type=int, default=4)

    t = sub.add_parser("twist", help="axiom residuals under random gauges")
    t.add_argument("--structure", default="sweedler", help="shipped name or JSON path")
    t.add_argument("--gauges", type=int, default=20)
    t.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("cache", help="inspect or clear the Gram cache")
    c.add_argument("action", choices=["info", "clear"])
    return p


COMMANDS = {"relations": cmd_relations, "verma": cmd_verma, "braid": cmd_braid, "dk": cmd_dk,
            "twist": cmd_twist, "cache": cmd_cache}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    cache = None if args.no_cache else GramCache(args.cache_dir)
    try:
        JobConfig.from_args(args)
        report, lines, ok = COMMANDS[args.command](args, cache)
    except ToleranceNotMet as exc:
        print(f"qsuper: check failed: {exc}", file=sys.stderr)
        return 1
    except (InputError, QSuperError, ValueError, KeyError) as exc:
        print(f"qsuper: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=1, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print("\n".join(lines))
    if not ok:
        print("qsuper: check failed", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
