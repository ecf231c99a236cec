"""Command-line front end.

Every subcommand reads/writes the JSON formats from :mod:`choquet.jsonio`,
emits a machine-readable report embedding the library version and the
tolerance in force, and exits 0 on success, 1 on a property failure, and 2
on an input error. Events are named by '|'-joined state labels.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import Act, choquet_integral, validate_capacity
from .comonotonic import envelope_capacity, is_comonotonic
from .credal import core_vertices
from .errors import (
    ChoquetError,
    InputError,
    NotRationalizableError,
)
from .generators import KINDS, generate
from .jsonio import (
    capacity_from_dict,
    capacity_to_dict,
    credal_to_dict,
    dumps,
    load_capacity,
    load_credal,
    loads_strict,
)
from .axioms import PreferenceOracle, run_axiom_suite
from .tolerance import default_tol
from .updating import UpdateRule, infer_alpha, verify_prop1


def _report(command: str, payload: dict) -> dict:
    return {"command": command, "version": __version__, "tolerance": default_tol(), **payload}


def _emit(args, data: dict) -> None:
    text = dumps(data)
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_valid_capacity(path: str):
    cap = load_capacity(path)
    report = validate_capacity(cap)
    if not report.ok:
        first = report.violations[0]
        raise InputError(f"capacity in {path} is invalid ({first.kind}): {first.message}")
    return cap


def _parse_rule(rule: str, alpha: float | None) -> UpdateRule:
    if rule == "erml":
        if alpha is None:
            raise InputError("--rule erml requires --alpha")
        return UpdateRule("erml", alpha)
    if alpha is not None:
        raise InputError(f"--rule {rule} takes no --alpha")
    return UpdateRule(rule)


def _parse_alpha_grid(raw: str) -> tuple[float, ...]:
    try:
        grid = tuple(float(tok) for tok in raw.split(","))
    except ValueError:
        raise InputError(f"bad --alpha-grid {raw!r}: expected comma-separated numbers") from None
    for a in grid:
        if not 0.0 <= a <= 1.0:
            raise InputError(f"alpha {a!r} in --alpha-grid outside [0, 1]")
    return grid


def cmd_validate(args) -> int:
    cap = load_capacity(args.input)
    report = validate_capacity(cap)
    _emit(args, _report("validate", report.to_json_dict(cap.space)))
    return 0 if report.ok else 1


def cmd_generate(args) -> int:
    cap = generate(args.kind, args.n, args.seed)
    _emit(args, capacity_to_dict(cap, form=args.form))
    return 0


def cmd_update(args) -> int:
    cap = _load_valid_capacity(args.input)
    event = cap.space.parse_event(args.event)
    rule = _parse_rule(args.rule, args.alpha)
    updated = rule.apply(cap, event)
    _emit(args, capacity_to_dict(updated, form="explicit"))
    return 0


def cmd_core_vertices(args) -> int:
    cap = _load_valid_capacity(args.input)
    _emit(args, credal_to_dict(core_vertices(cap)))
    return 0


def cmd_choquet(args) -> int:
    cap = _load_valid_capacity(args.input)
    try:
        utils = [float(tok) for tok in args.act.split(",")]
    except ValueError:
        raise InputError(f"bad --act {args.act!r}: expected comma-separated numbers") from None
    if len(utils) != cap.space.n:
        raise InputError(f"--act lists {len(utils)} utilities for {cap.space.n} states")
    value = choquet_integral(cap, Act(cap.space, np.array(utils)))
    _emit(args, _report("choquet", {"act": utils, "value": value}))
    return 0


def cmd_check_prop1(args) -> int:
    cap = _load_valid_capacity(args.input)
    report = verify_prop1(cap, _parse_alpha_grid(args.alpha_grid))
    _emit(args, _report("check-prop1", report.to_json_dict()))
    return 0 if report.ok else 1


def cmd_check_comonotonic(args) -> int:
    credal = load_credal(args.input)
    result = is_comonotonic(credal)
    space = credal.space
    payload = {
        "comonotonic": result.comonotonic,
        "failing_chain": [space.event_key(m) for m in result.failing.chain] if result.failing else None,
        "witness": None,
        "envelope_convex": None,
    }
    if result.comonotonic:
        from .capacity import is_convex

        payload["envelope_convex"] = bool(is_convex(envelope_capacity(credal)))
    _emit(args, _report("check-comonotonic", payload))
    return 0 if result.comonotonic else 1


def cmd_check_axioms(args) -> int:
    cap = _load_valid_capacity(args.prior)
    rule = _parse_rule(args.rule, args.alpha)
    oracle = PreferenceOracle(cap, rule)
    report = run_axiom_suite(oracle, seed=args.seed, samples=args.samples)
    _emit(args, _report("check-axioms", report.to_json_dict()))
    return 0 if report.all_passed else 1


def cmd_infer_alpha(args) -> int:
    prior = _load_valid_capacity(args.prior)
    posterior = _load_valid_capacity(args.posterior)
    event = prior.space.parse_event(args.event)
    try:
        alpha = infer_alpha(prior, posterior, event)
    except NotRationalizableError as exc:
        _emit(args, _report("infer-alpha", {"rationalizable": False, "alpha": None, "reason": str(exc)}))
        return 1
    payload = {"rationalizable": True, "alpha": alpha, "determinate": alpha is not None}
    _emit(args, _report("infer-alpha", payload))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choquet",
        description="Convex capacities: validation, cores, Choquet values, conditioning rules, and their cross-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a capacity file against the representation rules")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generate", help="emit a seeded random convex capacity")
    p.add_argument("--kind", choices=KINDS, default="belief-function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--form", choices=("explicit", "moebius"), default="explicit")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("update", help="condition a capacity on an event")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--rule", choices=("ds", "fh", "erml"), required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--event", required=True, help="'|'-joined state labels")
    p.add_argument("--out")
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("core-vertices", help="emit the extreme points of a convex capacity's core")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_core_vertices)

    p = sub.add_parser("choquet", help="integrate an act against a capacity")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--act", required=True, help="comma-separated utilities in state order")
    p.add_argument("--out")
    p.set_defaults(func=cmd_choquet)

    p = sub.add_parser("check-prop1", help="closed form vs credal-mixture envelope, all events and weights")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--alpha-grid", default="0,0.25,0.5,0.75,1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_prop1)

    p = sub.add_parser("check-comonotonic", help="is the credal set the core of a convex capacity?")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_comonotonic)

    p = sub.add_parser("check-axioms", help="run the sampled axiom suite against a prior and rule")
    p.add_argument("--prior", required=True)
    p.add_argument("--rule", choices=("ds", "fh", "erml"), required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_axioms)

    p = sub.add_parser("infer-alpha", help="recover the mixing weight from a prior/posterior pair")
    p.add_argument("--prior", required=True)
    p.add_argument("--posterior", required=True)
    p.add_argument("--event", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_infer_alpha)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(dumps({"error": "input", "message": str(exc)}))
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(dumps({"error": "input", "message": str(exc)}))
        return 2
    except ChoquetError as exc:
        sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
