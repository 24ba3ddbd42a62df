"""Command line front end.

    polarbrauer verify <suite>
    polarbrauer normalize <expr>
    polarbrauer rank [--ptl] r s
    polarbrauer eval --rep m,n [--verma LAMBDA --cutoff K] <expr>
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .errors import BudgetExceeded, ParseError, RankMismatch
from .report import Report
from .scalars import frac_text, poly_text, specialize

SUITES = ("brauer", "polar", "soundness", "ptl", "osp", "uea", "g2", "coupon")


def _suite(name: str, config: dict) -> Report:
    if name == "brauer":
        from .brauer import verify_brauer_suite

        return verify_brauer_suite()
    if name == "polar":
        from .polar import POLAR_FAMILY, verify_polar_suite

        return verify_polar_suite(family=[tuple(f) for f in config.get("family", POLAR_FAMILY)])
    if name == "soundness":
        from .polar import POLAR_FAMILY, verify_soundness

        return verify_soundness(config.get("words", 200), family=[tuple(f) for f in config.get("family", POLAR_FAMILY)])
    if name == "ptl":
        from .ptl import verify_ptl_suite

        return verify_ptl_suite()
    if name == "osp":
        from .superlin import TEST_FAMILY, verify_osp_suite

        return verify_osp_suite([tuple(f) for f in config.get("family", TEST_FAMILY)])
    if name == "uea":
        from .uea import verify_uea_suite

        return verify_uea_suite()
    if name == "g2":
        from .g2 import verify_g2_suite

        return verify_g2_suite()
    if name == "coupon":
        from .brauer import enhanced_coupon_check

        return enhanced_coupon_check(3)
    raise ValueError(f"unknown suite {name!r}")


def run_suite(name: str, as_json: bool = False, config: dict | None = None, out=None) -> int:
    """Run one suite (or ``all``); returns 0 iff every check passed."""
    out = out or sys.stdout
    names = SUITES if name == "all" else (name,)
    ok = True
    for n in names:
        rep = _suite(n, config or {})
        ok = ok and rep.passed
        if as_json:
            for line in rep.json_lines():
                print(line, file=out)
        else:
            for c in rep.checks:
                status = "PASS" if c.ok else "FAIL"
                print(f"{status} {rep.name}: {c.label}" + (f" ({c.detail})" if c.detail else ""), file=out)
    return 0 if ok else 1


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def cmd_normalize(args) -> int:
    from .polar import normalize, parse_morphism

    nf = normalize(parse_morphism(args.expr), budget=args.budget)
    terms = nf.to_json()
    if args.delta is not None:
        kept = []
        for t, (_, c) in zip(terms, nf.sorted_terms()):
            v = specialize(c, {"delta": args.delta})
            if v == 0:
                continue
            t["coeff"] = poly_text(v) if hasattr(v, "terms") else str(v)
            kept.append(t)
        terms = kept
    if args.json:
        print(json.dumps({"r": nf.r, "s": nf.s, "terms": terms}))
    else:
        print(f"{nf.r} -> {nf.s}")
        for t in terms:
            print(f"  ({t['coeff']}) {json.dumps(t['diagram'])} dots {json.dumps(t['dots'])}")
        if not terms:
            print("  0")
    return 0


def dotted_counts(r: int, s: int, max_dots: int) -> list:
    """Dotted Brauer diagrams r -> s by total number of dots."""
    n = (r + s) // 2
    diagrams = math.prod(range(r + s - 1, 0, -2)) if r + s else 1
    return [diagrams * math.comb(n + k - 1, k) if n else (diagrams if k == 0 else 0) for k in range(max_dots + 1)]


def cmd_rank(args) -> int:
    from .ptl import ptl_rank

    if (args.r + args.s) % 2:
        print(0)
        return 0
    if args.ptl:
        value = ptl_rank(args.r, args.s)
        print(json.dumps({"r": args.r, "s": args.s, "ptl_rank": value}) if args.json else value)
    else:
        counts = dotted_counts(args.r, args.s, args.max_dots)
        if args.json:
            print(json.dumps({"r": args.r, "s": args.s, "dotted_by_degree": counts}))
        else:
            for k, c in enumerate(counts):
                print(f"dots={k}: {c}")
    return 0


def cmd_eval(args) -> int:
    from .polar import parse_morphism
    from .superlin import Evaluator, TruncVerma, functor_eval, natural_rep, osp_build

    m, n = (int(x) for x in args.rep.split(","))
    if n % 2:
        raise SystemExit("the odd part must have even dimension")
    osp = osp_build(m, n // 2)
    elem = parse_morphism(args.expr)
    if args.verma is not None:
        if (m, n) != (0, 2):
            raise SystemExit("--verma needs --rep 0,2")
        module = TruncVerma(args.verma, args.cutoff, osp)
        # each connector raises the level by at most one
        raise_by = max((sum(1 for g in w if g[0] in ("D", "Y")) for w in elem.terms), default=0)
        levels = args.cutoff - raise_by
        if levels < 1:
            raise SystemExit("cutoff too small for this many connectors")
        ev = Evaluator(osp, module)
        terms, r, s = elem.word_terms()
        y = ev.apply_elem(terms, ev.basis_batch(r, levels=levels), s)
        mat = y.reshape(-1, y.shape[-1])
    else:
        mat = functor_eval(elem, natural_rep(osp), osp).mat
    rows = [[frac_text(x) if not isinstance(x, (int, Fraction)) else str(x) for x in row] for row in mat]
    if args.window:
        rows = [row[: args.window] for row in rows[: args.window]]
    if args.json:
        print(json.dumps({"rows": len(mat), "cols": len(mat[0]) if len(mat) else 0, "matrix": rows}))
    else:
        for row in rows:
            print(" ".join(f"{x:>6}" for x in row))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polarbrauer", description="Polar Brauer and polar Temperley-Lieb calculus.")
    p.add_argument("--json", action="store_true", help="machine readable output")
    p.add_argument("--config", help="JSON file with 'family' and 'words' overrides")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))

    nz = sub.add_parser("normalize", help="normal form of a morphism expression")
    nz.add_argument("expr")
    nz.add_argument("--delta", type=_parse_rational, help="specialize delta in the output")
    nz.add_argument("--budget", type=int, help="rewrite step budget")

    rk = sub.add_parser("rank", help="hom-space ranks")
    rk.add_argument("--ptl", action="store_true", help="rank in the polar Temperley-Lieb quotient")
    rk.add_argument("--max-dots", type=int, default=2)
    rk.add_argument("r", type=int)
    rk.add_argument("s", type=int)

    ev = sub.add_parser("eval", help="matrix of a morphism under the osp functor")
    ev.add_argument("--rep", required=True, help="m,n for osp(m|n)")
    ev.add_argument("--verma", type=_parse_rational, help="highest weight of a truncated Verma pole module")
    ev.add_argument("--cutoff", type=int, default=6)
    ev.add_argument("--window", type=int, help="print only the top-left corner")
    ev.add_argument("expr")
    for s in (v, nz, rk, ev):
        s.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
    try:
        if args.cmd == "verify":
            return run_suite(args.suite, args.json, config)
        if args.cmd == "normalize":
            return cmd_normalize(args)
        if args.cmd == "rank":
            return cmd_rank(args)
        return cmd_eval(args)
    except (ParseError, RankMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
