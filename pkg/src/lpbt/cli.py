"""Command-line front end.

Exit codes: ``eval`` returns 0 for true and 1 for false; ``validate`` returns 0
for a clean model; ``axioms`` returns 0 when nothing fails; ``counterexample``
returns 1 when the search is exhausted. Usage, parse and validation errors
return 2 everywhere.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import axioms as ax
from .dot import export_dot
from .generators import FIXTURES, fixture
from .model import BtModel, ModelError, Policy, PolicyUnsupported, validate
from .modelio import ModelFormatError, dump_model, load_model, parse_point_ref
from .parser import ParseError, parse, render
from .semantics import Evaluator, SearchExhausted, explain, find_strengthening_counterexample


class UsageError(Exception):
    pass


def _load(spec: str, raw: bool = False) -> BtModel:
    if spec.startswith("fixture:"):
        name = spec.split(":", 1)[1]
        try:
            return fixture(name)
        except KeyError:
            raise UsageError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None
    try:
        return load_model(spec, close=not raw)
    except FileNotFoundError:
        raise UsageError(f"no such model file: {spec}") from None
    except (ModelError, ValueError) as exc:
        raise UsageError(f"{spec}: {exc}") from None


def _require_valid(model: BtModel, label: str) -> None:
    report = validate(model)
    if report:
        lines = "\n".join(f"  {v}" for v in report)
        raise UsageError(f"{label} is not a valid model:\n{lines}")


def _policy(text: str) -> Policy:
    try:
        return Policy.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown policy {text!r}") from None


def cmd_eval(args) -> int:
    model = _load(args.model, args.raw_precedence)
    _require_valid(model, args.model)
    try:
        f = parse(args.formula)
    except ParseError as exc:
        raise UsageError(f"parse error: {exc}") from None
    try:
        pts = parse_point_ref(args.point, model.histories, model.moments)
    except ModelFormatError as exc:
        raise UsageError(f"unknown point: {exc}") from None
    try:
        ev = Evaluator(model, args.policy)
        values = {p: ev.holds(p, f) for p in pts}
    except PolicyUnsupported as exc:
        raise UsageError(f"policy unsupported: {exc}") from None
    if len(set(values.values())) > 1:
        detail = ", ".join(f"{p.ref()}={str(v).lower()}" for p, v in values.items())
        raise UsageError(f"{args.point!r} is ambiguous for this formula ({detail}); give moment@history")
    value = next(iter(values.values()))
    print(str(value).lower())
    if args.explain:
        for p in pts:
            print("\n".join(explain(model, p, f, args.policy)))
    return 0 if value else 1


def cmd_validate(args) -> int:
    model = _load(args.model, args.raw_precedence)
    report = validate(model)
    for v in report:
        print(v)
    if not report:
        print(f"ok: {len(model.moments)} moments, {len(model.histories)} histories, {len(model.points())} points")
    return 0 if not report else 2


def cmd_axioms(args) -> int:
    schemas = [s.strip() for s in args.schemas.split(",") if s.strip()] if args.schemas else None
    for s in schemas or ():
        if ax.ALIASES.get(s, s) not in ax.REGISTRY:
            raise UsageError(f"unknown schema {s!r}; known: {', '.join(ax.REGISTRY)}")
    if args.rules is not None:
        rules = tuple(r.strip() for r in args.rules.split(",") if r.strip())
        bad = [r for r in rules if r not in ax.RULES]
        if bad:
            raise UsageError(f"unknown rule(s) {bad}; known: {', '.join(ax.RULES)}")
    else:
        rules = () if schemas else ax.RULES
    policies = [args.policy] if args.policy else None
    if args.fuzz:
        if args.model:
            raise UsageError("give either a model file or --fuzz, not both")
        seed, count = args.fuzz
        report = ax.fuzz(
            seed, count, schemas=schemas, policies=policies, substitutions=args.substitutions, rules=rules
        )
    elif args.model:
        model = _load(args.model, args.raw_precedence)
        problems = validate(model)
        if problems:
            print(f"warning: {args.model} fails validation ({len(problems)} violations); checking anyway", file=sys.stderr)
            for v in problems:
                print(f"  {v}", file=sys.stderr)
        if args.policy is Policy.COPRESENT and model.instants is None:
            raise UsageError("policy unsupported: co-presence needs an instant partition")
        report = ax.check_model(
            model, seed=args.seed, schemas=schemas, policies=policies, substitutions=args.substitutions,
            rules=rules, model_id=args.model,
        )
    else:
        raise UsageError("give a model file or --fuzz SEED COUNT")
    print(report.to_text())
    for r in report.schemas.values():
        for fail in r.failures[: args.show]:
            print(f"  {r.name} fails at {fail.point.ref()} [{fail.policy}] in {fail.model_id} with {fail.substitution}")
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n")
    return 0 if report.ok else 1


def cmd_export_dot(args) -> int:
    model = _load(args.model, args.raw_precedence)
    _require_valid(model, args.model)
    highlight = None
    if args.highlight:
        try:
            pts = parse_point_ref(args.highlight, model.histories, model.moments)
        except ModelFormatError as exc:
            raise UsageError(f"unknown point: {exc}") from None
        if len(pts) != 1:
            raise UsageError(f"{args.highlight!r} names several points; give moment@history")
        highlight = pts[0]
    sys.stdout.write(export_dot(model, highlight))
    return 0


def cmd_counterexample(args) -> int:
    try:
        w = find_strengthening_counterexample(args.seed, max_tries=args.max_tries, policy=args.policy)
    except SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return 1
    dump_model(w.model, args.out)
    ev = Evaluator(w.model, w.policy)
    weak, strong = w.formulas
    print(f"model written to {args.out} (attempt {w.tries}, seed {w.seed})")
    print(f"point: {w.point.ref()}  policy: {w.policy.value}")
    print(f"{render(weak)}: {str(ev.holds(w.point, weak)).lower()}")
    print(f"{render(strong)}: {str(ev.holds(w.point, strong)).lower()}")
    return 0


def cmd_fixture(args) -> int:
    try:
        model = fixture(args.name, args.preset)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    text = dump_model(model, args.out)
    if not args.out:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpbt", description="Counterfactuals over Ockhamist branching time.")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_arg(p, optional=False):
        if optional:
            p.add_argument("model", nargs="?", help="model JSON file or fixture:NAME")
        else:
            p.add_argument("model", help="model JSON file or fixture:NAME")
        p.add_argument(
            "--raw-precedence", action="store_true", help="do not transitively close the precedence relation"
        )

    p = sub.add_parser("eval", help="evaluate a formula at a point")
    model_arg(p)
    p.add_argument("point", help="moment@historyIndex, or a bare moment when all histories agree")
    p.add_argument("formula")
    p.add_argument("--policy", type=_policy, default=Policy.UNRESTRICTED, help="unrestricted | copresent | hist")
    p.add_argument("--explain", action="store_true", help="print the evaluation trace")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("validate", help="check frame, history, similarity and instant conditions")
    model_arg(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("axioms", help="check axiom schemas and rules on a model or fuzzed models")
    model_arg(p, optional=True)
    p.add_argument("--fuzz", nargs=2, type=int, metavar=("SEED", "COUNT"))
    p.add_argument("--schemas", help="comma-separated schema names (default: all)")
    p.add_argument("--rules", help=f"comma-separated rules from {', '.join(ax.RULES)}")
    p.add_argument("--policy", type=_policy, help="restrict to one policy (default: all applicable)")
    p.add_argument("--substitutions", type=int, default=20)
    p.add_argument("--seed", type=int, default=0, help="substitution seed for a single model")
    p.add_argument("--show", type=int, default=3, help="failures to print per schema")
    p.add_argument("--json", help="also write the machine-readable report here")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("export-dot", help="print the moment tree in Graphviz DOT")
    model_arg(p)
    p.add_argument("--highlight", help="point to highlight")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("counterexample", help="find a model where strengthening the antecedent fails")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="counterexample.json")
    p.add_argument("--max-tries", type=int, default=500)
    p.add_argument("--policy", type=_policy, default=Policy.UNRESTRICTED)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("fixture", help="write a named fixture as a model file")
    p.add_argument("name", choices=sorted(FIXTURES))
    p.add_argument("--preset", choices=("stoic", "anti-stoic"))
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
