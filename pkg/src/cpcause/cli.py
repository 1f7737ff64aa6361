"""Command-line front end.

Exit codes: 0 success, 1 invalid theory/story/context, 2 usage error,
3 node budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import semantics
from .causation import DEFINITIONS, causal_score, counterfactual, get_definition
from .kernel import BudgetExceeded, CPLogicError, format_rational, is_identifier, probability_from_text
from .neuron import load_diagram, translate
from .parser import ParseError, format_story, format_theory, parse_literal, parse_literals, parse_story, parse_theory
from .semantics import DEFAULT_NODE_BUDGET
from .story import Context

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def format_value(value: Fraction) -> str:
    """``49/50 (= 0.98)``; non-terminating decimals are shown approximately."""
    exact = format_rational(value)
    if "/" not in exact:
        return f"{value} (= {exact})"
    return f"{value} (~ {float(value):.6g})"


def _bindings(pairs: list[str]) -> dict[str, Fraction]:
    out = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not is_identifier(name):
            raise UsageError(f"--set expects NAME=VALUE, got {pair!r}")
        if name in out:
            raise UsageError(f"--set {name} given twice")
        try:
            out[name] = probability_from_text(value)
        except ValueError as exc:
            raise UsageError(f"--set {name}: {exc}") from None
    return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


class _SourceError(Exception):
    def __init__(self, path: str, error: ParseError):
        super().__init__(f"{path}:{error.diagnostic}")


def _theory(args):
    try:
        return parse_theory(_read(args.theory), _bindings(args.set))
    except ParseError as exc:
        raise _SourceError(args.theory, exc) from None


def _story(args, theory):
    try:
        return parse_story(_read(args.story), theory)
    except ParseError as exc:
        raise _SourceError(args.story, exc) from None


def _literal_arg(text: str, flag: str):
    try:
        return parse_literal(text)
    except ParseError as exc:
        raise UsageError(f"{flag}: {exc.diagnostic.message}") from None


def _literals_arg(text: str, flag: str):
    try:
        return parse_literals(text)
    except ParseError as exc:
        raise UsageError(f"{flag}: {exc.diagnostic.message}") from None


def cmd_prob(args, out) -> int:
    theory = _theory(args)
    query = _literals_arg(args.query, "--query")
    print(format_value(semantics.marginal(theory, query, args.budget)), file=out)
    return EXIT_OK


def cmd_counterfactual(args, out) -> int:
    theory = _theory(args)
    story = _story(args, theory)
    do = _literal_arg(args.do, "--do")
    query = _literals_arg(args.query, "--query")
    print(format_value(counterfactual(theory, story, do, query, args.budget)), file=out)
    return EXIT_OK


def _ids(mapping) -> str:
    return "{" + ", ".join(str(i) for i in sorted(mapping)) + "}"


def cmd_cause(args, out) -> int:
    theory = _theory(args)
    story = _story(args, theory)
    cause = _literal_arg(args.cause, "--cause")
    effect = _literal_arg(args.effect, "--effect")
    if args.definition == "all":
        specs = list(DEFINITIONS)
    else:
        try:
            specs = [get_definition(args.definition)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    context = Context(theory, story, cause, effect)
    width = max(len(s.name) for s in specs)
    print(f"cause {cause}  effect {effect}  story {format_story(story).strip()}", file=out)
    for spec in specs:
        verdict = causal_score(spec, context, literal=args.literal_overlap, budget=args.budget)
        label = "cause" if verdict.is_cause else "no"
        print(
            f"{spec.name:<{width}}  {format_value(verdict.score)}  {label}  "
            f"Int={_ids(verdict.intrinsic)}  Irr={_ids(verdict.irrelevant)}",
            file=out,
        )
        for note in verdict.notes:
            print(f"  note: {note}", file=out)
        if verdict.oracle is not None:
            holds, best = verdict.oracle
            print(f"  reduction verdict: {'cause' if holds else 'no'} (best {format_value(best)})", file=out)
        if args.show_theory:
            for line in format_theory(verdict.modified_theory).splitlines():
                print(f"    {line}", file=out)
    return EXIT_OK


def cmd_stories(args, out) -> int:
    theory = _theory(args)
    stories = semantics.enumerate_branches(theory, budget=args.budget)
    for i, story in enumerate(stories, start=1):
        leaf = "{" + ", ".join(sorted(map(str, story.leaf))) + "}"
        steps = format_story(story).strip() or "(empty)"
        print(f"{i}. {steps}  {format_value(story.probability)}  {leaf}", file=out)
    print(f"{len(stories)} branch(es), total {format_value(sum(s.probability for s in stories))}", file=out)
    return EXIT_OK


def cmd_tree(args, out) -> int:
    theory = _theory(args)
    print(semantics.build_tree(theory, budget=args.budget).render(theory), file=out)
    return EXIT_OK


def cmd_import_neuron(args, out) -> int:
    diagram = load_diagram(_read(args.diagram))
    theory, story = translate(diagram)
    prefix = Path(args.out)
    theory_path = prefix.with_name(prefix.name + ".cpl")
    story_path = prefix.with_name(prefix.name + ".story")
    theory_path.write_text(format_theory(theory), encoding="utf-8")
    story_path.write_text(format_story(story), encoding="utf-8")
    leaf = {a.name for a in story.leaf}
    ok = leaf == set(diagram.fired)
    print(f"wrote {theory_path} ({len(theory)} laws) and {story_path}", file=out)
    print(f"leaf check: {'ok' if ok else 'MISMATCH'} (story leaf matches the fired neurons)", file=out)
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_oracles(args, out) -> int:
    from .oracles import build_corpus, run_battery

    corpus = build_corpus(args.seed, args.count, args.count)
    results = run_battery(corpus, args.seed)
    total = 0
    for name, found in results.items():
        total += len(found)
        print(f"{name}: {len(found)} discrepancies", file=out)
        for d in found[:5]:
            print(f"  {d.detail}", file=out)
    return EXIT_OK if total == 0 else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpcause", description="CP-logic inference and actual causation.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET, help="maximum tree nodes to expand")
    with_theory = argparse.ArgumentParser(add_help=False, parents=[common])
    with_theory.add_argument("theory", help="theory file (.cpl)")
    with_theory.add_argument("--set", action="append", default=[], metavar="NAME=VALUE", help="bind a probability parameter")

    p = sub.add_parser("prob", parents=[with_theory], help="marginal probability of a conjunction of literals")
    p.add_argument("--query", required=True)
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("counterfactual", parents=[with_theory], help="probability of a query under do() given a story")
    p.add_argument("--story", required=True)
    p.add_argument("--do", required=True)
    p.add_argument("--query", required=True)
    p.set_defaults(func=cmd_counterfactual)

    p = sub.add_parser("cause", parents=[with_theory], help="causal scores under one or all definitions")
    p.add_argument("--story", required=True)
    p.add_argument("--cause", required=True)
    p.add_argument("--effect", required=True)
    p.add_argument("--definition", default="all", help="|".join([s.name for s in DEFINITIONS] + ["all"]))
    p.add_argument("--show-theory", action="store_true", help="print each modified theory")
    p.add_argument("--literal-overlap", action="store_true", help="keep laws that are both intrinsic and irrelevant")
    p.set_defaults(func=cmd_cause)

    p = sub.add_parser("stories", parents=[with_theory], help="list all branches")
    p.set_defaults(func=cmd_stories)

    p = sub.add_parser("tree", parents=[with_theory], help="render the probability tree")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("import-neuron", parents=[common], help="translate a neuron diagram")
    p.add_argument("diagram", help="diagram file (.nd.json)")
    p.add_argument("--out", required=True, metavar="PREFIX", help="writes PREFIX.cpl and PREFIX.story")
    p.set_defaults(func=cmd_import_neuron)

    p = sub.add_parser("oracles", help="run the differential checks on a random corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200, help="random theories and random diagrams each")
    p.set_defaults(func=cmd_oracles)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=err)
        return EXIT_BUDGET
    except _SourceError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    except (CPLogicError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
