"""Command-line front end.

Every command except ``bounds --format csv`` prints one JSON envelope::

    {"schema_version": "1", "command": ..., "inputs": {...}, "result": {...}}

Exit codes: 0 success, 1 nothing found / check failed, 2 input error,
3 budget or convergence failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

import numpy as np

from . import bounds, profiles, search, verify
from .core import (Committee, CommitteeDistribution, as_threshold, condorcet_dimension,
                   is_alpha_undominated, max_domination, stability_constant)
from .errors import BudgetExceeded, InputError, NotConverged, SamplingExhausted
from .lottery import (ActivationSpec, SolverOptions, expected_domination_all,
                      solve_undominated_lottery)

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_ABSENT, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


_ALPHA = re.compile(r"\s*\d+\s*(/\s*\d+\s*)?")


def cli_alpha(text: str) -> Fraction:
    """``P/Q`` or an integer; decimals are refused so thresholds stay visibly exact."""
    if not _ALPHA.fullmatch(text):
        raise InputError(f"alpha must be written P/Q, got {text!r}")
    return as_threshold(text)


def frac(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "float": float(x)}


def _jsonable(x):
    if isinstance(x, Fraction):
        return frac(x)
    if isinstance(x, Committee):
        return list(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer, np.floating)):
        return x.item()
    if isinstance(x, search.Certificate):
        return {"worst": x.worst, "count": x.count, "fraction": frac(x.fraction)}
    raise TypeError(f"not serialisable: {type(x).__name__}")


def envelope(command: str, inputs: dict, result) -> str:
    body = {"schema_version": SCHEMA_VERSION, "command": command, "inputs": inputs, "result": result}
    return json.dumps(body, default=_jsonable, sort_keys=True, indent=2)


def _committee_json(e, S):
    a, c = max_domination(e, S)
    return {"committee": list(S), "worst": a, "count": c, "fraction": frac(Fraction(c, e.num_voters))}


def cmd_gen(args):
    fam = args.family
    need = {"cyclic": ("m",), "cycle-product": ("s", "t"), "impartial": ("n", "m"),
            "factorial": ("m",), "minimal-dim3": ()}[fam]
    for name in need:
        if getattr(args, name) is None:
            raise InputError(f"--{name} is required for family {fam}")
    if fam == "cyclic":
        e = profiles.gen_cyclic(args.m)
    elif fam == "cycle-product":
        e = profiles.gen_cycle_product(args.s, args.t)
    elif fam == "minimal-dim3":
        e = profiles.gen_minimal_dim3()
    elif fam == "impartial":
        e = profiles.gen_impartial_culture(args.n, args.m, args.seed)
    else:
        e = profiles.gen_full_factorial(args.m)
    text = profiles.serialize_election(e)
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return EXIT_OK, None
    profiles.write_election(e, args.out)
    inputs = {k: getattr(args, k) for k in ("family", "m", "s", "t", "n", "seed", "out")}
    return EXIT_OK, envelope("gen", inputs, {"m": e.num_candidates, "n": e.num_voters, "path": args.out})


def cmd_check(args):
    e = profiles.read_election(args.profile)
    S = Committee.parse(args.committee)
    alpha = cli_alpha(args.alpha)
    ok = is_alpha_undominated(e, S, alpha)
    result = _committee_json(e, S)
    result.update(undominated=ok, stability_constant=frac(stability_constant(e, S)))
    inputs = {"profile": args.profile, "committee": list(S), "alpha": frac(alpha)}
    return (EXIT_OK if ok else EXIT_ABSENT), envelope("check", inputs, result)


def cmd_dim(args):
    e = profiles.read_election(args.profile)
    k, S = condorcet_dimension(e, budget=args.budget)
    result = {"dimension": k, **_committee_json(e, S)}
    return EXIT_OK, envelope("dim", {"profile": args.profile, "budget": args.budget}, result)


def cmd_lottery(args):
    e = profiles.read_election(args.profile)
    alpha = cli_alpha(args.alpha)
    g = ActivationSpec.parse(args.g, args.k)
    opts = SolverOptions(max_iterations=args.iters, tolerance=args.tol, step_scale=args.step,
                         seed=args.seed, stop_at_target=not args.full)
    inputs = {"profile": args.profile, "k": args.k, "alpha": frac(alpha), "g": str(g),
              "tol": args.tol, "iters": args.iters, "seed": args.seed}
    code = EXIT_OK
    try:
        res = solve_undominated_lottery(e, args.k, alpha, g, opts)
    except NotConverged as exc:
        res, code = exc.best, EXIT_BUDGET
    dom = expected_domination_all(e, res.weights, args.k)
    a, U = res.attacker
    result = {"weights": res.weights, "value": res.value, "target": res.target,
              "iterations": res.iterations, "converged": code == EXIT_OK,
              "attacker": {"candidate": a, "voters": list(U)},
              "max_expected_domination": float(dom.max())}
    return code, envelope("lottery", inputs, result)


def cmd_bounds(args):
    if args.figure:
        rows = bounds.figure_series(args.k_max)
        if args.format == "json":
            return EXIT_OK, json.dumps([dict(zip(("k", "thm4", "lower", "sixteen_over_k"), r)) for r in rows])
        lines = ["k,thm4,lower,sixteen_over_k"] + [f"{k},{a!r},{lo!r},{j!r}" for k, a, lo, j in rows]
        return EXIT_OK, "\n".join(lines)
    rows = bounds.theorem7_table(args.k_max, args.base)
    if args.format == "csv":
        return EXIT_OK, bounds.rows_to_csv(rows, args.precision).rstrip("\n")
    result = {"rows": [r.__dict__ for r in rows],
              "first_dp_improvement": bounds.first_dp_improvement(args.k_max, args.base)}
    return EXIT_OK, envelope("bounds", {"k_max": args.k_max, "base": args.base}, result)


def cmd_search(args):
    e = profiles.read_election(args.profile)
    alpha = cli_alpha(args.alpha)
    params = search.RecursiveParams(args.gamma, args.beta)
    g = ActivationSpec.parse(args.g, args.k) if args.g else None
    res = search.run_strategy(e, args.strategy, args.k, alpha, seed=args.seed, params=params, g=g)
    result = {"found": res.found, "committee": res.committee, "certificate": res.certificate,
              "stats": {k: v for k, v in res.stats.items()}}
    inputs = {"profile": args.profile, "k": args.k, "alpha": frac(alpha), "strategy": args.strategy,
              "seed": args.seed, "gamma": params.gamma, "beta": params.beta}
    return (EXIT_OK if res.found else EXIT_ABSENT), envelope("search", inputs, result)


def _parse_dist(text: str) -> CommitteeDistribution:
    pairs = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        members, sep, weight = chunk.partition("=")
        if not sep:
            raise InputError(f"distribution entry {chunk!r} must look like '1,4=9/20'")
        try:
            w = Fraction(weight.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad weight {weight!r}") from None
        pairs.append((Committee.parse(members), w))
    return CommitteeDistribution.from_pairs(pairs)


def cmd_verify(args):
    if args.suite == "thm6":
        report = verify.verify_theorem6(args.k, args.t)
        inputs = {"suite": "thm6", "k": args.k, "t": args.t}
    elif args.suite == "cor1":
        report = verify.verify_cor1_tightness(args.m, args.k)
        inputs = {"suite": "cor1", "m": args.m, "k": args.k}
    else:
        if not args.profile or not args.dist:
            raise InputError("claim-high needs --profile and --dist")
        e = profiles.read_election(args.profile)
        d = _parse_dist(args.dist)
        alpha = cli_alpha(args.alpha)
        g = ActivationSpec.parse(args.g, args.k)
        report = verify.verify_claim_high(e, d, alpha, g)
        inputs = {"suite": "claim-high", "profile": args.profile, "dist": args.dist,
                  "alpha": frac(alpha), "g": str(g)}
    result = json.loads(report.to_json())
    return (EXIT_OK if report.passed else EXIT_ABSENT), envelope("verify", inputs, result)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="undominated", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1, help="worker cap (all commands run single-threaded)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="write a generated profile")
    s.add_argument("--family", required=True, choices=profiles.FAMILIES)
    for flag in ("--m", "--s", "--t", "--n"):
        s.add_argument(flag, type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("check", help="test a committee for alpha-undomination")
    s.add_argument("--profile", required=True)
    s.add_argument("--committee", required=True)
    s.add_argument("--alpha", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("dim", help="Condorcet dimension by exhaustive search")
    s.add_argument("--profile", required=True)
    s.add_argument("--budget", type=int, default=10_000_000)
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("lottery", help="solve the confined-adversary lottery")
    s.add_argument("--profile", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alpha", default="1")
    s.add_argument("--g", default="identity")
    s.add_argument("--tol", type=float, default=1e-4)
    s.add_argument("--iters", type=int, default=20000)
    s.add_argument("--step", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--full", action="store_true", help="keep iterating after the target is met")
    s.set_defaults(func=cmd_lottery)

    s = sub.add_parser("bounds", help="alpha-versus-k table")
    s.add_argument("--k-max", type=int, required=True)
    s.add_argument("--base", choices=("thm1", "thm4"), default="thm1")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--precision", type=int, default=6)
    s.add_argument("--figure", action="store_true", help="emit the comparison-plot series instead")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("search", help="find an alpha-undominated committee")
    s.add_argument("--profile", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alpha", required=True)
    s.add_argument("--strategy", choices=search.STRATEGIES, default="brute")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--gamma", type=float, default=0.28467)
    s.add_argument("--beta", type=float)
    s.add_argument("--g", help="activation for the lottery strategy")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("--suite", required=True, choices=verify.SUITES)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--t", type=int, default=5)
    s.add_argument("--m", type=int, default=4)
    s.add_argument("--profile")
    s.add_argument("--dist", help="e.g. '1,4=9/20;2,5=7/20;3,6=1/5'")
    s.add_argument("--alpha", default="1/2")
    s.add_argument("--g", default="identity")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, out = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, SamplingExhausted, NotConverged) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if out is not None:
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
