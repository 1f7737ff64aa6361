"""Actual causation as counterfactual dependence in a modified theory.

Each definition picks a set of intrinsic laws (pinned to their actual
outcome) and a set of irrelevant laws (deleted).  The cause is then undone
by intervention and the score is the resulting probability that the effect
fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import semantics
from .kernel import CPTheory, Literal
from .reduction import is_simple, necessary_laws, reduction_verdict, sibling_necessary
from .semantics import DEFAULT_NODE_BUDGET
from .story import Context, Story, applied_before, could_have_applied, effect_pretrue
from .transform import counterfactual_intervention, determinize, intervene, remove_laws

LAWS_B = "laws_b"
NEC = "nec"
EMPTY = "empty"
BV12_IRR = "bv12_irr"
PRODUCTION_IRR = "production_irr"


@dataclass(frozen=True)
class DefinitionSpec:
    name: str
    intrinsic_rule: str
    irrelevant_rule: str


DEFINITIONS: tuple[DefinitionSpec, ...] = (
    DefinitionSpec("dependence", LAWS_B, EMPTY),
    DefinitionSpec("hall07", NEC, EMPTY),
    DefinitionSpec("bv12", LAWS_B, BV12_IRR),
    DefinitionSpec("bv07", NEC, BV12_IRR),
    DefinitionSpec("production", LAWS_B, PRODUCTION_IRR),
    DefinitionSpec("production07", NEC, PRODUCTION_IRR),
)
BY_NAME = {spec.name: spec for spec in DEFINITIONS}


def get_definition(name: str) -> DefinitionSpec:
    try:
        return BY_NAME[name.lower()]
    except KeyError:
        raise ValueError(f"unknown definition {name!r}; choose from {', '.join(BY_NAME)}") from None


@dataclass(frozen=True)
class CausalVerdict:
    definition: str
    score: Fraction
    modified_theory: CPTheory
    intrinsic: Mapping[int, int | None]
    irrelevant: frozenset[int]
    notes: tuple[str, ...] = ()
    oracle: tuple[bool, Fraction] | None = None
    is_cause: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "is_cause", self.score > 0)


def intrinsic_set(spec: DefinitionSpec, context: Context, budget: int = DEFAULT_NODE_BUDGET) -> dict[int, int | None]:
    """Intrinsic laws mapped to the outcome they are pinned to."""
    story = context.story
    if spec.intrinsic_rule == LAWS_B:
        return story.outcomes()
    if spec.intrinsic_rule != NEC:
        raise ValueError(f"unknown intrinsic rule {spec.intrinsic_rule!r}")
    if is_simple(context, budget):
        # On simple stories necessity reduces to a local check at the law's node;
        # deterministic laws have no siblings and are kept vacuously.
        return {
            r: o
            for r, o in story.steps
            if story.theory.law(r).is_deterministic or sibling_necessary(context, r, budget)
        }
    return necessary_laws(context, budget=budget)


def irrelevant_set(spec: DefinitionSpec, context: Context, budget: int = DEFAULT_NODE_BUDGET) -> frozenset[int]:
    story, effect = context.story, context.effect
    rule = spec.irrelevant_rule
    if rule == EMPTY:
        return frozenset()
    if rule == BV12_IRR:
        return frozenset(
            law.id
            for law in context.theory.laws
            if not applied_before(story, law.id, effect) and could_have_applied(story, law.id, effect, budget)
        )
    if rule == PRODUCTION_IRR:
        late = {law.id for law in context.theory.laws if not applied_before(story, law.id, effect)}
        redundant = {r for r in story.laws if effect_pretrue(story, r)}
        return frozenset(late | redundant)
    raise ValueError(f"unknown irrelevance rule {rule!r}")


def modified_theory(context: Context, intrinsic, irrelevant, literal: bool = False) -> CPTheory:
    """Delete irrelevant laws and pin intrinsic ones to the story.

    A law that is both intrinsic and irrelevant is deleted.  With
    ``literal=True`` it is instead kept and pinned, i.e. the set expression
    [T minus (Irr + Int)] + pinned(Int) is taken at face value.
    """
    intrinsic = set(intrinsic)
    irrelevant = set(irrelevant)
    if literal:
        pinned, dropped = intrinsic, irrelevant - intrinsic
    else:
        pinned, dropped = intrinsic - irrelevant, irrelevant
    theory = determinize(context.theory, context.story, pinned)
    return remove_laws(theory, dropped)


def _extension_notes(context: Context) -> tuple[str, ...]:
    notes = []
    if not context.cause.positive:
        notes.append(f"extension: omission {context.cause} scored via do({context.cause.atom})")
    if not context.effect.positive:
        notes.append(f"extension: negative effect {context.effect} scored via the marginal of {context.effect.atom}")
    return tuple(notes)


def causal_score(
    spec: DefinitionSpec | str,
    context: Context,
    literal: bool = False,
    budget: int = DEFAULT_NODE_BUDGET,
) -> CausalVerdict:
    if isinstance(spec, str):
        spec = get_definition(spec)
    intrinsic = intrinsic_set(spec, context, budget)
    irrelevant = irrelevant_set(spec, context, budget)
    theory = modified_theory(context, intrinsic, irrelevant, literal)
    undone = counterfactual_intervention(theory, context.cause)
    score = semantics.marginal(undone, [~context.effect], budget)
    notes = list(_extension_notes(context))
    oracle = None
    if spec.intrinsic_rule == NEC and not is_simple(context, budget):
        notes.append("story is not simple: necessity-based score may be positive where no reduction witnesses causation")
        if spec.name == "hall07":
            oracle = reduction_verdict(context, budget)
    if literal:
        notes.append("literal overlap: laws both intrinsic and irrelevant were kept and pinned")
    return CausalVerdict(spec.name, score, theory, intrinsic, irrelevant, tuple(notes), oracle)


def compare_all(context: Context, literal: bool = False, budget: int = DEFAULT_NODE_BUDGET) -> list[CausalVerdict]:
    return [causal_score(spec, context, literal, budget) for spec in DEFINITIONS]


def counterfactual(
    theory: CPTheory,
    story: Story,
    do: Literal,
    query: Sequence[Literal],
    budget: int = DEFAULT_NODE_BUDGET,
) -> Fraction:
    """Probability of ``query`` had ``do`` been forced, given that ``story`` happened.

    Pins every law applied in the story, intervenes, then marginalizes.
    """
    pinned = determinize(theory, story, story.laws)
    return semantics.marginal(intervene(pinned, do), list(query), budget)
