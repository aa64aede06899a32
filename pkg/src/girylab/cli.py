"""Command-line front end.

Exit codes: 0 every law held, 1 some law failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from . import algebras as alg
from . import amplitudes as amp
from . import scvx, stdspace
from .errors import BadConfig, GiryError, ParseError
from .measure import NATURALS, CarrierDist, Cofinite, convex_combine, dirac, ev, join, min_support, pushforward
from .report import CheckReport
from .serialize import (
    amp_from_json,
    carrier_dist_from_json,
    dist_from_json,
    encode_value,
    parse_rat,
    report_to_json,
    seq_from_json,
    split_from_json,
    tree_from_json,
    tree_to_json,
)
from .suites import DEFAULT_SUITES, SuiteConfig, run_suites

SEED_ENV = "GIRYLAB_SEED"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _load_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _emit(doc: Any, path: str | None = None) -> None:
    text = json.dumps(doc, indent=2)
    print(text)
    if path:
        Path(path).write_text(text + "\n")


# --------------------------------------------------------------------------
# check
# --------------------------------------------------------------------------


def _config(args: argparse.Namespace) -> SuiteConfig:
    base: dict[str, Any] = {}
    if args.config:
        doc = _load_json(args.config)
        if not isinstance(doc, Mapping):
            raise BadConfig("config file must hold a JSON object")
        unknown = set(doc) - {"suites", "grid", "random_cases", "seed", "enumeration_cap", "n"}
        if unknown:
            raise BadConfig(f"unknown config keys: {', '.join(sorted(unknown))}")
        base.update(doc)
    for key, value in (
        ("suites", args.suite),
        ("grid", args.grid),
        ("random_cases", args.random),
        ("seed", args.seed),
        ("enumeration_cap", args.cap),
        ("n", args.n),
    ):
        if value is not None:
            base[key] = value
    if "seed" not in base:
        env = os.environ.get(SEED_ENV)
        if env is not None:
            try:
                base["seed"] = int(env)
            except ValueError:
                raise BadConfig(f"{SEED_ENV} must be an integer, got {env!r}") from None
    try:
        return SuiteConfig(**base).validate()
    except TypeError as exc:
        raise BadConfig(str(exc)) from exc


def cmd_check(args: argparse.Namespace) -> int:
    cfg = _config(args)
    reports = run_suites(cfg)
    ok = all(r.ok for r in reports)
    _emit(
        {
            "ok": ok,
            "seed": cfg.seed,
            "config": {"grid": cfg.grid, "random_cases": cfg.random_cases, "enumeration_cap": cfg.enumeration_cap, "n": cfg.n},
            "reports": [r.to_json(timing=not args.no_timing) for r in reports],
        },
        args.json,
    )
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# eval
# --------------------------------------------------------------------------


def _set_shape(doc: Any):
    if doc == "N":
        return NATURALS
    if isinstance(doc, list):
        return frozenset(doc)
    if isinstance(doc, Mapping):
        if "cofinite" in doc:
            return Cofinite(frozenset(doc["cofinite"]))
        if "down" in doc:
            return frozenset(range(doc["down"]))
    raise ParseError(f"bad set description {doc!r}")


def _int_table(doc: Any) -> dict[int, Any]:
    if isinstance(doc, list):
        return dict(enumerate(doc))
    if isinstance(doc, Mapping):
        try:
            return {int(k): v for k, v in doc.items()}
        except ValueError as exc:
            raise ParseError(f"bad table key: {exc}") from exc
    raise ParseError(f"expected a table, got {doc!r}")


def _outer(doc: Any) -> CarrierDist:
    try:
        return CarrierDist((dist_from_json(d), parse_rat(w)) for d, w in doc)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad outer distribution: {exc}") from exc


def evaluate(expr: Any) -> Any:
    """Evaluate one JSON expression and return its exact result."""
    if not isinstance(expr, Mapping) or "op" not in expr:
        raise ParseError("an expression is a JSON object with an 'op' key")
    op = expr["op"]
    try:
        if op == "dirac":
            return dirac(expr["index"])
        if op == "ev":
            return ev(_set_shape(expr["set"]), dist_from_json(expr["dist"]))
        if op in ("min_support", "eps_N"):
            return min_support(dist_from_json(expr["dist"]), expr.get("cap", 10**6))
        if op == "pushforward":
            return pushforward(_int_table(expr["map"]), dist_from_json(expr["dist"]))
        if op == "join":
            return join(_outer(expr["outer"]))
        if op == "convex_combine":
            family = {k: dist_from_json(v) for k, v in _int_table(expr["family"]).items()}
            return convex_combine(dist_from_json(expr["dist"]), family)
        if op == "affine_sum":
            space = scvx.builtin_space(expr["space"])
            return scvx.affine_sum(space, dist_from_json(expr["dist"]), seq_from_json(expr["seq"], space))
        if op == "algebra":
            a = alg.builtin_algebra(expr["name"])
            if a.name == "eps_free":
                return a(_outer(expr["outer"]))
            if "dist" in expr:
                return a(dist_from_json(expr["dist"]).as_carrier())
            return a(carrier_dist_from_json(expr, a.space))
        if op == "l2_to_l1":
            return amp.l2_to_l1(amp_from_json(expr))
        if op == "amp_min_support":
            return amp.amp_min_support(amp_from_json(expr))
        if op == "phi_formula":
            return list(stdspace.phi_formula(expr["i"], expr["n"]))
    except KeyError as exc:
        raise ParseError(f"expression {op!r} is missing key {exc}") from exc
    raise ParseError(f"unknown op {op!r}")


def cmd_eval(args: argparse.Namespace) -> int:
    result = evaluate(_load_json(args.file))
    _emit({"result": encode_value(result)})
    return EXIT_OK


# --------------------------------------------------------------------------
# refine
# --------------------------------------------------------------------------


def cmd_refine(args: argparse.Namespace) -> int:
    tree = tree_from_json(_load_json(args.tree))
    if args.script:
        script = _load_json(args.script)
        if isinstance(script, Mapping):
            script = script.get("splits", [])
        if not isinstance(script, list):
            raise ParseError("a refinement script is a list of splits")
        for step in script:
            s = split_from_json(step)
            tree = stdspace.refine(tree, s.atom, s.left, s.right)
    diagram = stdspace.check_all_diagrams(tree)
    chains = CheckReport("chain-intersection")
    for chain in stdspace.full_chains(tree):
        meet = stdspace.chain_intersection(tree, chain)
        chains.record(bool(meet), chain=list(chain), meet=tree.ordered(meet))
    _emit(
        {
            "tree": tree_to_json(tree),
            "depth": tree.depth,
            "collapses": [list(t) for t in tree.collapses],
            "diagram": report_to_json(diagram),
            "chains": report_to_json(chains),
            "ok": diagram.ok and chains.ok,
        },
        args.json,
    )
    return EXIT_OK if diagram.ok and chains.ok else EXIT_FAIL


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="girylab", description="Exact law checks for the Giry monad and super convex spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run law suites")
    check.add_argument("--suite", action="append", help=f"suite to run (repeatable); default: {', '.join(DEFAULT_SUITES)}; also: divergence")
    check.add_argument("--grid", type=int, help="weight-grid denominator bound (default 4)")
    check.add_argument("--random", type=int, help="random cases per law (default 1000)")
    check.add_argument("--seed", type=int, help=f"random seed (fallback: ${SEED_ENV}, then 0)")
    check.add_argument("--cap", type=int, help="tail enumeration cap (default 10**6)")
    check.add_argument("--n", type=int, help="size for ns-equivalence (default 5)")
    check.add_argument("--config", help="JSON config file; flags override it")
    check.add_argument("--json", help="also write the report to this path")
    check.add_argument("--no-timing", action="store_true", help="omit wall times for byte-stable output")
    check.set_defaults(func=cmd_check)

    ev_ = sub.add_parser("eval", help="evaluate a JSON expression file ('-' for stdin)")
    ev_.add_argument("file")
    ev_.set_defaults(func=cmd_eval)

    ref = sub.add_parser("refine", help="apply a split script to a tree and check every square")
    ref.add_argument("tree")
    ref.add_argument("script", nargs="?")
    ref.add_argument("--json", help="also write the result to this path")
    ref.set_defaults(func=cmd_refine)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GiryError as exc:
        print(f"girylab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE

