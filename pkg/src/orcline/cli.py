"""Command-line front end.

Subcommands::

    orcline orc run FILE        execute one interleaving, JSON-lines trace
    orcline orc explore FILE    exhaustive interleaving exploration
    orcline fm validate FILE    check a configuration against a model
    orcline fm products FILE    enumerate all products
    orcline fm count FILE       count products
    orcline mts check FAM PROD  decide the product relation
    orcline mts products FILE   derive all products of a family
    orcline mts dot FILE        GraphViz export
    orcline encode FILE         compile a feature model to Orc
    orcline fixtures ...        list/show/export the bundled corpus

Exit codes: 0 success, 1 unreadable or unparseable input, 2 a bound
cut the computation short, 3 well-formed input with a negative verdict
(invalid configuration, not a product, unencodable model).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import corpus
from . import feature_model as fm_mod
from . import mts as mts_mod
from . import orc_parser
from . import orc_semantics as sem
from . import variability_encoding as enc
from .errors import BoundExceeded
from .orc_ast import Signal, render_value, value_sort_key

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BOUND = 2
EXIT_NEGATIVE = 3


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        with open(path, "r") as handle:
            return handle.read()
    except OSError as exc:
        raise _CliError(EXIT_INPUT, f"cannot read {path}: {exc}")


def _emit(text: str, out):
    if out:
        with open(out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _diag(message: str):
    print(message, file=sys.stderr)


def _bounds(args) -> sem.Bounds:
    return sem.Bounds(max_steps=args.max_steps,
                      max_states=args.max_states,
                      max_depth=args.max_depth)


def _load_program(path: str):
    src = _read(path)
    program, diagnostics = orc_parser.parse_program_with_diagnostics(src)
    for d in diagnostics:
        _diag(orc_parser.format_diagnostic(d, path))
    if program is None:
        raise _CliError(EXIT_INPUT, f"{path}: parsing failed")
    return program


def _load_fm(path: str):
    try:
        return orc_parser.parse_feature_model(_read(path))
    except orc_parser.ParseError as exc:
        for d in exc.diagnostics:
            _diag(orc_parser.format_diagnostic(d, path))
        raise _CliError(EXIT_INPUT, f"{path}: parsing failed")


def _load_ts(path: str, kind: str):
    parse = orc_parser.parse_mts if kind == "mts" else orc_parser.parse_lts
    try:
        return parse(_read(path))
    except orc_parser.ParseError as exc:
        for d in exc.diagnostics:
            _diag(orc_parser.format_diagnostic(d, path))
        raise _CliError(EXIT_INPUT, f"{path}: parsing failed")


def _plain(value):
    """A publication value as plain JSON (tuples become arrays)."""
    if isinstance(value, Signal):
        return "signal"
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value


def _sorted_outcomes(outcome_set):
    return sorted(outcome_set,
                  key=lambda seq: (len(seq), [value_sort_key(v)
                                              for v in seq]))


# ---------------------------------------------------------------------------
# orc

def _cmd_orc_run(args) -> int:
    program = _load_program(args.file)
    policy = sem.SeededRandom(args.seed) if args.seed is not None \
        else sem.Deterministic()
    code = EXIT_OK
    try:
        trace = sem.run(program, policy, _bounds(args))
    except BoundExceeded as exc:
        trace = exc.partial
        _diag(f"truncated: {exc}")
        code = EXIT_BOUND
    lines = [json.dumps(sem.event_to_json(clock, event), sort_keys=True)
             for (clock, event) in trace.events]
    _emit("".join(line + "\n" for line in lines), args.out)
    if trace.truncated and code == EXIT_OK:
        _diag("truncated: a definition reached the expansion depth bound")
        code = EXIT_BOUND
    if code == EXIT_OK:
        shown = ", ".join(render_value(v) for v in trace.publications)
        _diag(f"quiescent after {len(trace.events)} events; "
              f"published: {shown if shown else '(nothing)'}")
    return code


def _explore_text(explored) -> str:
    lines = [f"states {len(explored.states)}",
             f"edges {len(explored.edges)}",
             f"outcomes {len(explored.outcomes)}"]
    for seq in _sorted_outcomes(explored.outcomes):
        lines.append("  {" + ", ".join(render_value(v) for v in seq) + "}")
    if explored.truncated_outcomes:
        lines.append(f"truncated outcomes "
                     f"{len(explored.truncated_outcomes)}")
        for seq in _sorted_outcomes(explored.truncated_outcomes):
            lines.append("  {" + ", ".join(render_value(v) for v in seq)
                         + "}")
    return "\n".join(lines) + "\n"


def _explore_json(explored) -> str:
    payload = {
        "states": len(explored.states),
        "edges": len(explored.edges),
        "outcomes": [[_plain(v) for v in seq]
                     for seq in _sorted_outcomes(explored.outcomes)],
        "truncated_outcomes": [
            [_plain(v) for v in seq]
            for seq in _sorted_outcomes(explored.truncated_outcomes)],
        "truncated": explored.truncated,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _cmd_orc_explore(args) -> int:
    program = _load_program(args.file)
    code = EXIT_OK
    try:
        explored = sem.explore(program, _bounds(args))
    except BoundExceeded as exc:
        explored = exc.partial
        _diag(f"truncated: {exc}")
        code = EXIT_BOUND
    if args.format == "json":
        text = _explore_json(explored)
    elif args.format == "dot":
        text = mts_mod.export_dot(sem.lts_view(explored), name="explored")
    elif args.format == "lts":
        text = orc_parser.render_lts(sem.lts_view(explored),
                                     name="explored")
    else:
        text = _explore_text(explored)
    _emit(text, args.out)
    return code


# ---------------------------------------------------------------------------
# fm

def _selection(arg: str) -> list:
    return [part.strip() for part in arg.split(",") if part.strip()]


def _cmd_fm_validate(args) -> int:
    model = _load_fm(args.file)
    try:
        violations = fm_mod.validate(model, _selection(args.select))
    except fm_mod.UnknownFeature as exc:
        raise _CliError(EXIT_INPUT, f"unknown feature: {exc}")
    if args.format == "json":
        payload = {"valid": not violations,
                   "violations": [{"rule": v.rule,
                                   "features": sorted(v.features),
                                   "message": v.message}
                                  for v in violations]}
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n",
              args.out)
    else:
        lines = ["VALID"] if not violations else \
            ["INVALID"] + [f"  {v.rule}: {v.message}" for v in violations]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if not violations else EXIT_NEGATIVE


def _sorted_products(products) -> list:
    return sorted((sorted(p) for p in products),
                  key=lambda names: (len(names), names))


def _cmd_fm_products(args) -> int:
    model = _load_fm(args.file)
    try:
        products = _sorted_products(fm_mod.enumerate_products(model))
    except BoundExceeded as exc:
        _diag(f"truncated: {exc}")
        return EXIT_BOUND
    if args.format == "json":
        _emit(json.dumps(products, indent=2) + "\n", args.out)
    else:
        lines = [f"products {len(products)}"]
        lines += ["  " + ", ".join(names) for names in products]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_fm_count(args) -> int:
    model = _load_fm(args.file)
    try:
        _emit(f"{fm_mod.product_count(model)}\n", args.out)
    except BoundExceeded as exc:
        _diag(f"truncated: {exc}")
        return EXIT_BOUND
    return EXIT_OK


# ---------------------------------------------------------------------------
# mts

def _cmd_mts_check(args) -> int:
    family = _load_ts(args.family, "mts")
    product = _load_ts(args.product, "lts")
    try:
        check = mts_mod.is_product(product, family)
    except mts_mod.ActionMismatch as exc:
        if args.format == "json":
            payload = {"product": False, "witness": None,
                       "failure": {"clause": "alphabet",
                                   "message": str(exc)}}
            _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                  args.out)
        else:
            _emit(f"NOT-A-PRODUCT\n  alphabet: {exc}\n", args.out)
        return EXIT_NEGATIVE
    witness = sorted(check.witness) if check.holds else None
    if args.format == "json":
        failure = None
        if check.failure is not None:
            f = check.failure
            failure = {"clause": f.clause, "product_state": f.product_state,
                       "family_state": f.family_state, "action": f.action,
                       "target": f.target, "message": str(f)}
        payload = {"product": check.holds,
                   "witness": [list(pair) for pair in witness]
                   if witness else None,
                   "failure": failure, "rounds": check.rounds}
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n",
              args.out)
    elif check.holds:
        lines = ["PRODUCT", f"witness ({len(witness)} pairs):"]
        lines += [f"  ({p}, {q})" for (p, q) in witness]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(f"NOT-A-PRODUCT\n  {check.failure.clause}: "
              f"{check.failure}\n", args.out)
    return EXIT_OK if check.holds else EXIT_NEGATIVE


def _cmd_mts_products(args) -> int:
    family = _load_ts(args.file, "mts")
    try:
        products = mts_mod.derive_products(family)
    except BoundExceeded as exc:
        _diag(f"truncated: {exc}")
        return EXIT_BOUND
    if args.format == "json":
        payload = [{"states": sorted(p.states), "init": p.init,
                    "trans": sorted(list(t) for t in p.trans)}
                   for p in products]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        blocks = [orc_parser.render_lts(p, name=f"product{i}")
                  for i, p in enumerate(products)]
        _emit("\n".join(blocks), args.out)
    _diag(f"{len(products)} product(s)")
    return EXIT_OK


def _cmd_mts_dot(args) -> int:
    kind = "lts" if args.file.endswith(".lts") else "mts"
    system = _load_ts(args.file, kind)
    _emit(mts_mod.export_dot(system, name=kind), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# encode / fixtures

def _cmd_encode(args) -> int:
    model = _load_fm(args.file)
    plan = None
    if args.plan:
        try:
            plan = enc.plan_from_json(_read(args.plan))
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise _CliError(EXIT_INPUT, f"{args.plan}: bad plan file: {exc}")
    if plan is None:
        plan = enc.default_plan(model)
    try:
        program = enc.encode(model, plan)
    except (enc.UnsupportedGroupSize, enc.MissingTrigger,
            enc.PlanMismatch) as exc:
        _diag(f"no encoding: {exc}")
        return EXIT_NEGATIVE
    _emit(orc_parser.render_program(program), args.out)
    for note in plan.notes:
        _diag(note)
    return EXIT_OK


def _cmd_fixtures(args) -> int:
    if args.action == "list":
        _emit("".join(name + "\n" for name in corpus.fixture_names()),
              args.out)
        return EXIT_OK
    if args.action == "show":
        if not args.name:
            raise _CliError(EXIT_INPUT, "fixtures show needs a file name")
        try:
            _emit(corpus.fixture_text(args.name), args.out)
        except KeyError as exc:
            raise _CliError(EXIT_INPUT, str(exc.args[0]))
        return EXIT_OK
    if not args.name:
        raise _CliError(EXIT_INPUT,
                        "fixtures export needs a destination directory")
    written = corpus.export_fixtures(args.name)
    _emit("".join(path + "\n" for path in written), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing

def _add_bounds(parser):
    parser.add_argument("--max-steps", type=int, default=10000,
                        help="run-length bound (default 10000)")
    parser.add_argument("--max-states", type=int, default=100000,
                        help="exploration state bound (default 100000)")
    parser.add_argument("--max-depth", type=int, default=16,
                        help="definition expansion bound (default 16)")


def _add_out(parser):
    parser.add_argument("--out", default=None,
                        help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="orcline",
        description="Workbench for Orc orchestrations, feature models "
                    "and modal transition systems.")
    sub = top.add_subparsers(dest="command", required=True)

    orc = sub.add_parser("orc", help="run or explore Orc programs")
    orc_sub = orc.add_subparsers(dest="action", required=True)
    p = orc_sub.add_parser("run", help="execute one interleaving")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=None,
                   help="randomise scheduling with this seed")
    _add_bounds(p)
    _add_out(p)
    p.set_defaults(func=_cmd_orc_run)
    p = orc_sub.add_parser("explore", help="explore all interleavings")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json", "dot", "lts"),
                   default="text")
    _add_bounds(p)
    _add_out(p)
    p.set_defaults(func=_cmd_orc_explore)

    fm = sub.add_parser("fm", help="feature-model commands")
    fm_sub = fm.add_subparsers(dest="action", required=True)
    p = fm_sub.add_parser("validate", help="check one configuration")
    p.add_argument("file")
    p.add_argument("--select", required=True,
                   help="comma-separated selected feature names")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_out(p)
    p.set_defaults(func=_cmd_fm_validate)
    p = fm_sub.add_parser("products", help="enumerate all products")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_out(p)
    p.set_defaults(func=_cmd_fm_products)
    p = fm_sub.add_parser("count", help="count products")
    p.add_argument("file")
    _add_out(p)
    p.set_defaults(func=_cmd_fm_count)

    mts = sub.add_parser("mts", help="modal transition system commands")
    mts_sub = mts.add_subparsers(dest="action", required=True)
    p = mts_sub.add_parser("check", help="is PRODUCT a product of FAMILY?")
    p.add_argument("family")
    p.add_argument("product")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_out(p)
    p.set_defaults(func=_cmd_mts_check)
    p = mts_sub.add_parser("products", help="derive all products")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_out(p)
    p.set_defaults(func=_cmd_mts_products)
    p = mts_sub.add_parser("dot", help="GraphViz export")
    p.add_argument("file")
    _add_out(p)
    p.set_defaults(func=_cmd_mts_dot)

    p = sub.add_parser("encode",
                       help="compile a feature model to an Orc program")
    p.add_argument("file")
    p.add_argument("--plan", default=None,
                   help="JSON file mapping features to sites and groups "
                        "to trigger pairs")
    _add_out(p)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("fixtures", help="bundled example files")
    p.add_argument("action", choices=("list", "show", "export"))
    p.add_argument("name", nargs="?", default=None,
                   help="file name (show) or destination directory "
                        "(export)")
    _add_out(p)
    p.set_defaults(func=_cmd_fixtures)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        _diag(f"error: {exc}")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
