from fractions import Fraction
from pathlib import Path

from cpcause.neuron import load_diagram
from cpcause.parser import parse_literal, parse_story, parse_theory
from cpcause.story import Context

DATA = Path(__file__).resolve().parent.parent / "data"


def load(name: str, **params):
    theory = parse_theory((DATA / f"{name}.cpl").read_text(), {k: Fraction(v) for k, v in params.items()})
    return theory


def load_with_story(theory_name: str, story_name: str | None = None, **params):
    theory = load(theory_name, **params)
    story = parse_story((DATA / f"{story_name or theory_name}.story").read_text(), theory)
    return theory, story


def context(theory, story, cause: str, effect: str) -> Context:
    return Context(theory, story, parse_literal(cause), parse_literal(effect))


def diagram(name: str):
    return load_diagram((DATA / f"early_preemption_{name}.nd.json").read_text())
