"""Command-line surface: gen, count, peel, extract, bounds, verify.

Reports are JSON on stdout (counts as decimal strings, log values with 12
significant digits); diagnostics go to stderr.  Exit codes: 0 success or
verdict holds, 1 verdict fails, 2 usage or format error, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import __version__, bounds, counting, extraction, formats, generators, kernels, peeling, relation

USAGE_ERROR = 2
BUDGET_ERROR = 3


class CliUsageError(Exception):
    """Bad flag combination; exits with the usage code."""


def _emit(report: dict) -> None:
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _log12(x: float | None):
    if x is None:
        return None
    return format(x, ".12g")


def _sha256(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _base_report(command: str, args, input_path: str | None = None) -> dict:
    rep = {
        "tool": {"name": "rbox", "version": __version__, "backend": kernels.BACKEND},
        "command": command,
        "parameters": {},
        "results": {},
    }
    if getattr(args, "seed", None) is not None:
        rep["seed"] = args.seed
    if input_path:
        rep["input"] = {"path": input_path, "sha256": _sha256(input_path)}
    return rep


def _parse_shape(text: str) -> tuple[int, ...]:
    try:
        return relation.check_shape([int(tok) for tok in text.split(",")])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _parse_alpha(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"alpha must be a decimal or p/q, got {text!r}") from exc


def _axes(args) -> tuple[int, ...]:
    if args.axes is not None:
        return tuple(int(tok) for tok in args.axes.split(","))
    if args.r is not None and args.n is not None:
        return (args.n,) * args.r
    raise CliUsageError("supply --axes n1,n2,... or both --r and --n")


def _report_bound(rep: dict, b: bounds.BoundReport) -> None:
    rep["results"].update(
        {
            "name": b.name,
            "hypotheses": b.hypotheses,
            "hypotheses_ok": b.hypotheses_ok,
            "lhs_log": _log12(b.lhs_log),
            "rhs_log": _log12(b.rhs_log),
            "strict": b.strict,
            "verdict": b.verdict,
            "details": {k: (str(v) if isinstance(v, (int, Fraction)) and not isinstance(v, bool) else v) for k, v in b.details.items()},
        }
    )


def cmd_gen(args) -> int:
    spec_kwargs = {"kind": args.kind, "seed": args.seed}
    if args.kind in ("bernoulli", "exact_count", "planted_box"):
        spec_kwargs["axis_sizes"] = _axes(args)
    else:
        if args.r is None or args.n is None:
            raise CliUsageError("hypergraph kinds need --r and --n")
        spec_kwargs.update(n=args.n, r=args.r)
    if args.alpha is not None:
        spec_kwargs["alpha"] = args.alpha
    if args.m is not None:
        spec_kwargs["count"] = args.m
    if args.planted_shape is not None:
        spec_kwargs["planted_shape"] = args.planted_shape
    result = generators.gen(generators.GenSpec(**spec_kwargs))
    if result.relation is not None:
        formats.write_rbox(result.relation, args.out)
        size = result.relation.size
    else:
        formats.write_hg(result.edges, args.n, args.r, args.out)
        size = len(result.edges)
    rep = _base_report("gen", args)
    rep["parameters"] = {
        "kind": args.kind,
        "alpha": str(args.alpha) if args.alpha is not None else None,
        "m": args.m,
        "planted_shape": list(args.planted_shape) if args.planted_shape else None,
    }
    rep["results"] = {
        "out": args.out,
        "sha256": _sha256(args.out),
        "size": size,
    }
    if result.planted is not None:
        rep["results"]["planted_parts"] = [list(p) for p in result.planted.parts]
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(rep)
    return 0


def cmd_count(args) -> int:
    rel = formats.read_rbox(args.input)
    res = counting.count_boxes_partitioned(rel, args.shape, jobs=args.jobs)
    rep = _base_report("count", args, args.input)
    # jobs only selects the worker count; it must not show up in the report,
    # which is byte-identical for every value
    rep["parameters"] = {"shape": list(args.shape), "oracle": args.oracle}
    rep["results"] = {
        "count": str(res.count),
        "rectangles_visited": res.rectangles_visited,
        "method": res.method,
    }
    exit_code = 0
    if args.oracle:
        oracle = counting.naive_count_boxes(rel, args.shape, budget=args.budget)
        agrees = oracle.count == res.count
        rep["results"]["oracle"] = {"count": str(oracle.count), "agrees": agrees}
        if not agrees:
            exit_code = 1
    _emit(rep)
    return exit_code


def cmd_peel(args) -> int:
    rel = formats.read_rbox(args.input)
    if args.no_peel:
        theta, alpha = 0, None
    elif args.theta is not None:
        theta, alpha = args.theta, None
    else:
        theta, alpha = peeling.default_theta(rel, args.alpha)
    res = peeling.peel(rel, theta)
    rep = _base_report("peel", args, args.input)
    rep["parameters"] = {
        "theta": str(theta),
        "alpha": str(alpha) if alpha is not None else None,
    }
    rep["results"] = {
        "survivors": list(res.survivors),
        "core_size": res.core.size,
        "removed": [[v, d] for v, d in res.removed],
        "mass_removed": rel.size - res.core.size,
    }
    if args.out:
        formats.write_rbox(res.core, args.out)
        rep["results"]["out"] = args.out
    _emit(rep)
    return 0


def cmd_extract(args) -> int:
    if args.input is None and args.hypergraph is None:
        raise CliUsageError("extract needs an RBOX file or --hypergraph")
    rep = _base_report("extract", args, args.input if args.hypergraph is None else None)
    if args.hypergraph is not None:
        edges, n, r = formats.read_hg(args.hypergraph)
        rep["input"] = {"path": args.hypergraph, "sha256": _sha256(args.hypergraph)}
        res = extraction.extract_multipartite(
            edges, n, r, args.shape, strategy=args.strategy, budget=args.budget,
            alpha=args.alpha, theta=0 if args.no_peel else args.theta, seed=args.seed,
        )
    else:
        rel = formats.read_rbox(args.input)
        res = extraction.extract_box(
            rel, args.shape, alpha=args.alpha, theta=0 if args.no_peel else args.theta,
            strategy=args.strategy, budget=args.budget, seed=args.seed, jobs=args.jobs,
        )
    rep["parameters"] = {
        "shape": list(args.shape),
        "strategy": args.strategy,
        "budget": args.budget,
        "theta": str(res.theta),
    }
    rep["results"] = {
        "parts": [list(p) for p in res.box.parts],
        "t": res.t,
        "strategy": res.strategy,
        "certificate_checked": res.certificate_checked,
        "averaging_floor": str(res.averaging_floor) if res.averaging_floor is not None else None,
        "peeled": res.peeled,
        "removed_count": res.removed_count,
    }
    _emit(rep)
    return 0


def cmd_bounds(args) -> int:
    rep = _base_report("bounds", args)
    rep["parameters"] = {
        "which": args.which,
        "r": args.r,
        "n": args.n,
        "ln_n": args.ln_n,
        "alpha": str(args.alpha) if args.alpha is not None else None,
        "shape": list(args.shape) if args.shape else None,
    }
    if args.which in ("thm2", "thm3", "thm4", "claim1", "chain") and not args.shape:
        raise CliUsageError(f"bounds {args.which} needs --shape")
    exit_code = 0
    if args.which == "frontier":
        fr = bounds.feasibility_frontier(args.r, args.target)
        rep["parameters"]["target"] = args.target
        rep["results"] = {"ln_n_min": _log12(fr.ln_n_min), "n_min": fr.n_min}
    elif args.which == "thm1":
        p = bounds.thm1_params(args.r, n=args.n, ln_n=args.ln_n, alpha=args.alpha)
        rep["results"] = {
            "s": p.s,
            "t": p.t,
            "t_log": _log12(p.t_log),
            "hypotheses": p.hypotheses,
            "hypotheses_ok": p.hypotheses_ok,
        }
    elif args.which == "r2":
        p = bounds.r2_remark_params(n=args.n, ln_n=args.ln_n, alpha=args.alpha)
        rep["results"] = {
            "s": p.s,
            "t_log": _log12(p.t_log),
            "hypotheses": p.hypotheses,
            "hypotheses_ok": p.hypotheses_ok,
        }
    elif args.which in ("claim1", "claim2", "chain"):
        if args.which == "claim1":
            c = bounds.claim1_check(args.r, n=args.n, ln_n=args.ln_n, alpha=args.alpha, shape=args.shape)
        elif args.which == "claim2":
            c = bounds.claim2_check(args.r, n=args.n, ln_n=args.ln_n, alpha=args.alpha)
        else:
            c = bounds.thm3_chain_check(args.r, n=args.n, ln_n=args.ln_n, alpha=args.alpha, shape=args.shape)
        rep["results"] = {
            "hypothesis": c.hypothesis,
            "conclusion": c.conclusion,
            "flags": c.flags,
            "lhs_log": _log12(c.lhs_log),
            "rhs_log": _log12(c.rhs_log),
        }
        if c.hypothesis and not c.conclusion:
            exit_code = 1
    elif args.which in ("thm2", "thm3"):
        fn = bounds.thm2_check if args.which == "thm2" else bounds.thm3_check
        b = fn(args.r, n=args.n, ln_n=args.ln_n, alpha=args.alpha, shape=args.shape, measured_t=args.measured_t)
        _report_bound(rep, b)
        exit_code = 1 if b.verdict == bounds.FAILS else 0
    elif args.which == "thm4":
        b = bounds.thm4_bound(args.r, n=args.n, ln_n=args.ln_n, alpha=args.alpha, shape=args.shape, count=args.count)
        _report_bound(rep, b)
        exit_code = 1 if b.verdict == bounds.FAILS else 0
    _emit(rep)
    return exit_code


def _verify_checks(rel, shape, alpha, budget, orders, rng_seed) -> list[dict]:
    """One entry per invariant check; every failure is reproducible via the
    matching subcommand with the same seed."""
    import random as _random

    from .relation import common_neighborhood, project_last

    checks: list[dict] = []
    prefix = shape[:-1]

    from math import comb as _comb

    res = counting.count_boxes(rel, shape)
    candidates = 1
    for n_i, s_i in zip(rel.axis_sizes, shape):
        candidates *= _comb(n_i, s_i)
    if candidates <= budget:
        oracle = counting.naive_count_boxes(rel, shape, budget=budget)
        checks.append(
            {
                "name": "oracle_equivalence",
                "ok": res.count == oracle.count,
                "count": str(res.count),
                "oracle_count": str(oracle.count),
            }
        )
    else:
        checks.append({"name": "oracle_equivalence", "ok": True, "skipped": f"{candidates} candidates exceed budget"})

    if rel.r >= 2:
        ssum = counting.support_sum(rel, prefix)
        dsum = 0
        for rect in counting.enumerate_rectangles(project_last(rel), prefix):
            dsum += len(common_neighborhood(rel, rect))
        checks.append({"name": "double_counting", "ok": ssum == dsum, "support_sum": str(ssum), "rect_degree_sum": str(dsum)})

        floor = counting.jensen_floor(rel, shape)
        checks.append({"name": "jensen_chain", "ok": res.count >= floor, "floor": str(floor)})
        if rel.r == 2 and shape[0] >= shape[1]:
            floor2 = counting.jensen_floor_r2(rel, shape)
            checks.append({"name": "jensen_chain_r2", "ok": res.count >= floor2, "floor": str(floor2)})

        theta, _ = peeling.default_theta(rel, alpha)
        peeled = peeling.peel(rel, theta)
        deg = relation.last_axis_degrees(peeled.core)
        survivors_ok = all(deg[v] >= theta for v in peeled.survivors)
        if peeled.removed:
            mass_ok = rel.size - peeled.core.size < theta * len(peeled.removed)
        else:
            mass_ok = rel.size == peeled.core.size
        again = peeling.peel(peeled.core, theta)
        idem_ok = again.core == peeled.core and again.survivors == peeled.survivors
        rng = _random.Random(rng_seed)
        order_ok = True
        for _ in range(orders):
            order = list(range(rel.axis_sizes[-1]))
            rng.shuffle(order)
            ref = _peel_in_order(rel, theta, order)
            if ref != (peeled.survivors, peeled.core.tuples):
                order_ok = False
                break
        checks.append({"name": "peel_survivor_degrees", "ok": survivors_ok, "theta": str(theta)})
        checks.append({"name": "peel_mass_bound", "ok": bool(mass_ok)})
        checks.append({"name": "peel_idempotence", "ok": idem_ok})
        checks.append({"name": "peel_order_invariance", "ok": order_ok, "orders": orders})

        try:
            guarantee = extraction.verify_guarantee(rel, prefix, theta=0, budget=budget)
            checks.append(
                {
                    "name": "averaging_floor",
                    "ok": bool(guarantee.details["averaging_floor_ok"]),
                    "t": guarantee.details["t"],
                    "floor": guarantee.details["averaging_floor"],
                }
            )
        except extraction.EmptySearchSpace as exc:
            checks.append({"name": "averaging_floor", "ok": True, "skipped": str(exc)})
    return checks


def _peel_in_order(rel, theta, order):
    """Order-oblivious reference peeling: remove the first eligible vertex in
    the given order, recompute degrees from the survivors, repeat."""
    tuples = list(rel.tuples)
    alive = set(range(rel.axis_sizes[-1]))
    while True:
        deg: dict[int, int] = {v: 0 for v in alive}
        for t in tuples:
            deg[t[-1]] += 1
        for v in order:
            if v in alive and deg[v] < theta:
                alive.discard(v)
                tuples = [t for t in tuples if t[-1] != v]
                break
        else:
            break
    return tuple(sorted(alive)), tuple(tuples)


def cmd_verify(args) -> int:
    if args.input:
        rel = formats.read_rbox(args.input)
        rep = _base_report("verify", args, args.input)
    else:
        if args.alpha is None:
            raise CliUsageError("verify needs --alpha (generation density)")
        spec = generators.GenSpec(kind="bernoulli", seed=args.seed, axis_sizes=_axes(args), alpha=args.alpha)
        rel = generators.gen(spec).relation
        rep = _base_report("verify", args)
    shape = args.shape
    if len(shape) != rel.r:
        raise CliUsageError(f"--shape needs {rel.r} entries for this instance")
    checks = _verify_checks(rel, shape, args.alpha, args.budget, args.orders, args.seed)
    rep["parameters"] = {
        "shape": list(shape),
        "alpha": str(args.alpha) if args.alpha is not None else None,
        "orders": args.orders,
        "budget": args.budget,
    }
    rep["results"] = {"checks": checks, "all_ok": all(c["ok"] for c in checks)}
    _emit(rep)
    return 0 if rep["results"]["all_ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rbox", description=__doc__)
    parser.add_argument("--version", action="version", version=f"rbox {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--kind", choices=generators.KINDS, required=True)
    p.add_argument("--axes", help="comma-separated axis sizes")
    p.add_argument("--r", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=_parse_alpha)
    p.add_argument("--m", type=int, help="exact tuple/edge count")
    p.add_argument("--planted-shape", type=_parse_shape)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("count", help="count boxes of a given shape")
    p.add_argument("input")
    p.add_argument("--shape", type=_parse_shape, required=True)
    p.add_argument("--oracle", action="store_true", help="cross-check against the naive oracle")
    p.add_argument("--budget", type=int, default=counting.NAIVE_BUDGET)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("peel", help="threshold-peel the last axis")
    p.add_argument("input")
    p.add_argument("--alpha", type=_parse_alpha)
    p.add_argument("--theta", type=float)
    p.add_argument("--no-peel", action="store_true", help="theta = 0")
    p.add_argument("--out", help="write the surviving relation here")
    p.set_defaults(fn=cmd_peel)

    p = sub.add_parser("extract", help="extract a box with maximum last part")
    p.add_argument("input", nargs="?")
    p.add_argument("--hypergraph", help="HG file; extract a complete multipartite subgraph")
    p.add_argument("--shape", type=_parse_shape, required=True, help="prefix part sizes")
    p.add_argument("--strategy", choices=("exhaustive", "greedy", "sampled"), default="exhaustive")
    p.add_argument("--budget", type=int, default=extraction.EXHAUSTIVE_BUDGET)
    p.add_argument("--alpha", type=_parse_alpha)
    p.add_argument("--theta", type=float)
    p.add_argument("--no-peel", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("bounds", help="evaluate a bound, claim or frontier")
    p.add_argument("which", choices=("thm1", "thm2", "thm3", "thm4", "claim1", "claim2", "chain", "r2", "frontier"))
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--ln-n", dest="ln_n", type=float)
    p.add_argument("--alpha", type=_parse_alpha)
    p.add_argument("--shape", type=_parse_shape)
    p.add_argument("--measured-t", dest="measured_t", type=int)
    p.add_argument("--count", type=int, help="exact box count to compare against thm4")
    p.add_argument("--target", choices=("thm4", "thm3", "thm1"), default="thm4")
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("verify", help="run the invariant suite on an instance")
    p.add_argument("--input", help="RBOX file (default: generate)")
    p.add_argument("--axes")
    p.add_argument("--r", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=_parse_alpha)
    p.add_argument("--shape", type=_parse_shape, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--orders", type=int, default=25, help="random removal orders for peel invariance")
    p.add_argument("--budget", type=int, default=counting.NAIVE_BUDGET)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    from .errors import BudgetExceeded, FormatError

    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BUDGET_ERROR
    except (FormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, extraction.ExtractionError, CliUsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
