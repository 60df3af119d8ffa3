"""Command-line front end.

    superhedge VERB -m MARKET.json [-g PAYOFF.json] [options]

Exit status: 0 on success, 1 when ``check`` finds a discrepancy, 2 on
usage or input errors, 3 on domain errors (for instance no martingale
measure where one is required).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from . import casebook
from .dual import dual_value, enumerate_vertices
from .lp import NEG_INF, format_extended
from .market import (
    DomainError,
    MarketError,
    dump_market,
    dump_payoff,
    load_market,
    load_payoff,
    market_to_dict,
)
from .polar import classify, compute_omega_phi, compute_omega_star, compute_omega_star_iterative
from .primal import check_replicable, plan_to_dict, price, resolve_target, superhedge
from .semistatic import check_theorem_hypothesis, semistatic_price

TARGETS = ("omega-star", "all", "omega-phi")
NEEDS_PAYOFF = ("price", "hedge", "dual", "semistatic", "replicate")


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")

    analysis = argparse.ArgumentParser(add_help=False)
    analysis.add_argument("-m", "--market", required=True, metavar="FILE")
    analysis.add_argument("--target", choices=TARGETS, default=None)
    analysis.add_argument("--seed", type=int, default=0)
    analysis.add_argument("--with-options", type=_bool, default=False, metavar="BOOL")
    analysis.add_argument("--cap", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="superhedge", description="Exact model-free superhedging on finite path spaces."
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    helps = {
        "omega-star": "paths charged by martingale measures, and the polar set",
        "classify": "arbitrage classification with a witness strategy",
        "price": "superhedging price on the chosen hedge set",
        "hedge": "full backward-recursion hedge plan",
        "dual": "sup of E_Q[g] over martingale measures",
        "semistatic": "price with static option positions",
        "check": "primal/dual self-test (exit 0 iff equal)",
        "replicate": "perfect-hedge check",
    }
    for verb, text in helps.items():
        p = sub.add_parser(verb, parents=[common, analysis], help=text)
        p.add_argument("-g", "--payoff", required=verb in NEEDS_PAYOFF, metavar="FILE")

    gen = sub.add_parser("gen", parents=[common], help="generate a market or payoff")
    gen.add_argument("kind", choices=("binomial", "trinomial", "random", "section4"))
    gen.add_argument("--u", default="2")
    gen.add_argument("--d", default="1/2")
    gen.add_argument("--factors", default="1/2,1,2")
    gen.add_argument("--s0", default="1")
    gen.add_argument("--steps", type=int, default=1)
    gen.add_argument("--assets", type=int, default=1)
    gen.add_argument("--branching", type=int, default=3)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--arbitrage-free", type=_bool, default=True, metavar="BOOL")
    gen.add_argument(
        "--emit",
        default="market",
        help="market, or a payoff: 'call:STRIKE' for trees, 'g1'/'g2' for section4",
    )
    return parser


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as e:
        raise MarketError(f"cannot read {path}: {e.strerror}") from None


def _polar_report(market) -> dict:
    support = compute_omega_star(market)
    cls = classify(market)
    rep = {
        "omega_star": support.ids(market),
        "polar": support.ids(market, "polar_set"),
        "class": cls.tag,
        "witness": None,
    }
    if market.options:
        phi = compute_omega_phi(market)
        rep["omega_phi"] = phi.ids(market)
    if support.uniform_witness is not None:
        rep["uniform_measure"] = support.uniform_witness.as_dict(market)
    if cls.witness is not None:
        w = cls.witness
        rep["witness"] = {
            "holdings": [
                {"t": t, "paths": [market.ids[i] for i in market.levels.groups[t - 1][g]],
                 "h": [str(v) for v in h]}
                for (t, g), h in sorted(w.holdings.items())
                if any(h)
            ],
            "static": [str(v) for v in w.static],
            "gains": {pid: str(v) for pid, v in zip(market.ids, w.gains)},
            "strict": w.strict,
        }
    return rep


def _run_analysis(args) -> tuple:
    market = load_market(_read(args.market))
    payoff = load_payoff(_read(args.payoff), market) if getattr(args, "payoff", None) else None
    verb = args.verb
    if verb in ("omega-star", "classify"):
        return _polar_report(market), 0
    if verb == "price":
        target = args.target or "omega-star"
        p = price(market, payoff, target)
        hedge_set = resolve_target(market, target)
        return {
            "price": format_extended(p),
            "target": target,
            "hedge_set": [pid for i, pid in enumerate(market.ids) if i in hedge_set],
        }, 0
    if verb == "hedge":
        target = args.target or "omega-star"
        paths = resolve_target(market, target)
        if not paths:
            raise DomainError("empty hedge set: no martingale measure")
        plan = superhedge(market, payoff, paths)
        rep = plan_to_dict(plan)
        rep["target_kind"] = target
        return rep, 0
    if verb == "dual":
        rep = dual_value(market, payoff, args.with_options).to_dict(market)
        if args.cap is not None:
            vl = enumerate_vertices(market, args.with_options, args.cap)
            rep["vertices"] = [v.as_dict(market) for v in vl.measures]
            rep["truncated"] = vl.truncated
        return rep, 0
    if verb == "semistatic":
        plan = semistatic_price(market, payoff, args.target or "omega-phi")
        rep = plan.to_dict()
        rep["hypothesis"] = "holds" if check_theorem_hypothesis(market).holds else "fails"
        return rep, 0
    if verb == "replicate":
        r = check_replicable(market, payoff)
        return {
            "replicable": r.replicable,
            "cost": None if r.cost is None else str(r.cost),
            "gap": None if r.gap is None else str(r.gap),
        }, 0
    if verb == "check":
        return _check(market, payoff, args.seed)
    raise AssertionError(verb)


def _check(market, payoff, seed) -> tuple:
    if payoff is None:
        payoff = casebook.random_payoff(market, random.Random(seed))
    oracle = compute_omega_star(market).omega_star
    fast = compute_omega_star_iterative(market).omega_star
    rep = {"omega_star_agree": oracle == fast}
    ok = oracle == fast
    if len(market.levels.groups[0]) == 1:
        primal = price(market, payoff)
        dual = dual_value(market, payoff).value
        rep.update(primal=format_extended(primal), dual=format_extended(dual), equal=primal == dual)
        ok = ok and primal == dual
        if market.options and compute_omega_phi(market).omega_star:
            semi = semistatic_price(market, payoff).price
            dual_o = dual_value(market, payoff, True).value
            rep.update(
                semistatic=format_extended(semi),
                dual_with_options=format_extended(dual_o),
                options_equal=semi == dual_o,
                hypothesis="holds" if check_theorem_hypothesis(market).holds else "fails",
            )
            ok = ok and semi == dual_o
    else:
        # several roots: compare per root group on its own sub-market
        roots = []
        for grp, members in enumerate(market.levels.groups[0]):
            sub = market.restrict(members)
            g = type(payoff)(tuple(payoff.values[i] for i in members))
            p, d = price(sub, g), dual_value(sub, g).value
            roots.append({"paths": [market.ids[i] for i in members],
                          "primal": format_extended(p), "dual": format_extended(d)})
            ok = ok and p == d
        rep["roots"] = roots
        rep["equal"] = ok
    return rep, 0 if ok else 1


def _run_gen(args) -> tuple:
    kind = args.kind
    if kind == "section4":
        case = casebook.gen_section4()
        if args.emit == "market":
            return json.loads(dump_market(case.market)), 0
        if args.emit in case.payoffs:
            return json.loads(dump_payoff(case.payoffs[args.emit])), 0
        raise MarketError(f"section4 can emit market, g1 or g2, not {args.emit!r}")
    if kind == "binomial":
        market = casebook.gen_binomial(Fraction(args.u), Fraction(args.d), Fraction(args.s0), args.steps)
    elif kind == "trinomial":
        factors = [Fraction(f) for f in args.factors.split(",")]
        market = casebook.gen_trinomial(factors, Fraction(args.s0), args.steps)
    else:
        market = casebook.gen_random_tree(
            args.seed, args.assets, args.steps, args.branching, args.arbitrage_free
        )
    if args.emit == "market":
        return market_to_dict(market), 0
    if args.emit.startswith("call:"):
        return json.loads(dump_payoff(casebook.call_payoff(market, Fraction(args.emit[5:])))), 0
    raise MarketError(f"cannot emit {args.emit!r}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        if not obj:
            yield prefix, ""
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}.{i}" if prefix else str(i))
    else:
        yield prefix, "" if obj is None else (str(obj).lower() if isinstance(obj, bool) else str(obj))


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    rows = list(_flatten(report))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in rows)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        report, code = _run_gen(args) if args.verb == "gen" else _run_analysis(args)
    except (MarketError, ValueError) as e:
        print(f"superhedge: error: {e}", file=stderr)
        return 2
    except DomainError as e:
        print(f"superhedge: {e}", file=stderr)
        return 3
    stdout.write(render(report, args.format))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
