"""Stories (branches of a probability tree) and the predicates over them that
the causation definitions quantify over."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import semantics
from .kernel import Atom, CPLogicError, CPTheory, Literal, TheoryError
from .semantics import DEFAULT_NODE_BUDGET, NodeState


class StoryError(CPLogicError):
    pass


class ContextError(CPLogicError):
    pass


@dataclass(frozen=True)
class Story:
    theory: CPTheory
    steps: tuple[tuple[int, int | None], ...]
    leaf: frozenset[Atom] = field(compare=False)
    probability: Fraction = field(compare=False)

    @classmethod
    def _trusted(cls, theory, steps, leaf, probability) -> "Story":
        return cls(theory, tuple((int(i), o) for i, o in steps), frozenset(leaf), probability)

    @property
    def laws(self) -> frozenset[int]:
        """Laws applied in the story."""
        return frozenset(law_id for law_id, _ in self.steps)

    def outcome(self, law_id: int) -> int | None:
        for i, o in self.steps:
            if i == law_id:
                return o
        raise StoryError(f"law {law_id} is not applied in this story")

    def outcomes(self) -> dict[int, int | None]:
        return dict(self.steps)

    def index_of(self, law_id: int) -> int:
        """1-based position at which ``law_id`` was applied."""
        for pos, (i, _) in enumerate(self.steps, start=1):
            if i == law_id:
                return pos
        raise StoryError(f"law {law_id} is not applied in this story")

    def state_after(self, count: int) -> NodeState:
        """Replay the first ``count`` steps from the root."""
        state = semantics.root_state(self.theory)
        for law_id, outcome in self.steps[:count]:
            state = semantics.apply_law(self.theory, state, law_id, outcome)
        return state

    def __str__(self) -> str:
        return " ".join(f"{i}:{'none' if o is None else o}" for i, o in self.steps)


def validate(theory: CPTheory, steps: Iterable[Sequence]) -> Story:
    """Replay ``steps`` from the root, checking every execution rule."""
    state = semantics.root_state(theory)
    prob = Fraction(1)
    clean = []
    for pos, (law_id, outcome) in enumerate(steps, start=1):
        try:
            law = theory.law(law_id)
        except TheoryError as exc:
            raise StoryError(f"step {pos}: {exc}") from None
        if law_id in state.applied:
            raise StoryError(f"step {pos}: law {law_id} applied twice")
        if outcome is not None and not 1 <= outcome <= len(law.head):
            raise StoryError(f"step {pos}: outcome {outcome} out of range for law {law_id}")
        if outcome is None and law.remainder == 0:
            raise StoryError(f"step {pos}: law {law_id} has no empty outcome")
        if law_id not in semantics.applicable_laws(theory, state):
            raise StoryError(f"step {pos}: law {law_id} is not applicable here")
        prob *= law.outcome_prob(outcome)
        state = semantics.apply_law(theory, state, law_id, outcome)
        clean.append((law_id, outcome))
    remaining = semantics.applicable_laws(theory, state)
    if remaining:
        raise StoryError(f"story ends early: law(s) {sorted(remaining)} still applicable")
    return Story(theory, tuple(clean), state.true_atoms, prob)


def _as_literal(effect: Atom | Literal) -> Literal:
    return effect if isinstance(effect, Literal) else Literal(effect, True)


def effect_position(story: Story, effect: Atom | Literal) -> int:
    """1-based index of the step that first made ``effect`` true.

    A negative effect has no producing step; it is placed after the last
    step, so every applied law counts as applied before it.
    """
    effect = _as_literal(effect)
    if not effect.holds_in(story.leaf):
        raise ContextError(f"effect {effect} does not hold in the story's leaf")
    if not effect.positive:
        return len(story.steps)
    for pos, (law_id, outcome) in enumerate(story.steps, start=1):
        if story.theory.law(law_id).outcome_atom(outcome) == effect.atom:
            return pos
    raise ContextError(f"effect {effect} never became true")  # pragma: no cover


def applied_before(story: Story, law_id: int, effect: Atom | Literal) -> bool:
    """True iff ``law_id`` was applied at or before the step producing ``effect``."""
    if law_id not in story.laws:
        return False
    return story.index_of(law_id) <= effect_position(story, effect)


def effect_pretrue(story: Story, law_id: int) -> bool:
    pos = story.index_of(law_id)
    atom = story.theory.law(law_id).outcome_atom(story.steps[pos - 1][1])
    if atom is None:
        return False
    return atom in story.state_after(pos - 1).true_atoms


def could_have_applied(story: Story, law_id: int, effect: Atom | Literal, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """Is there a continuation of the story's prefix up to ``effect`` that applies ``law_id``?"""
    if applied_before(story, law_id, effect):
        raise StoryError(f"law {law_id} was applied before {effect}; the question does not arise")
    theory = story.theory
    start = story.state_after(effect_position(story, effect))
    seen: set = set()
    stack = [start]
    steps = 0
    # Any law that becomes applicable stays applicable until applied, so
    # reaching a state where it is applicable suffices.
    while stack:
        state = stack.pop()
        key = (state.true_atoms, state.applied)
        if key in seen:
            continue
        seen.add(key)
        steps += 1
        if steps > budget:
            raise semantics.BudgetExceeded(f"search exceeds node budget of {budget}")
        candidates = semantics.applicable_laws(theory, state)
        if law_id in candidates:
            return True
        if not candidates:
            continue
        nxt = semantics.pick_law(candidates)
        for outcome in theory.law(nxt).outcomes():
            stack.append(semantics.apply_law(theory, state, nxt, outcome))
    return False


def sibling_outcomes(story: Story, law_id: int) -> set[int | None]:
    chosen = story.outcome(law_id)
    return {o for o in story.theory.law(law_id).outcomes() if o != chosen}


@dataclass(frozen=True)
class Context:
    """The quadruple (theory, story, cause, effect)."""

    theory: CPTheory
    story: Story
    cause: Literal
    effect: Literal

    def __post_init__(self):
        if isinstance(self.cause, Atom):
            object.__setattr__(self, "cause", Literal(self.cause, True))
        object.__setattr__(self, "effect", _as_literal(self.effect))
        if self.story.theory != self.theory:
            raise ContextError("story does not belong to this theory")
        for role, lit in (("cause", self.cause), ("effect", self.effect)):
            if lit.atom not in self.theory.atoms:
                raise ContextError(f"{role} {lit.atom} does not occur in the theory")
            if not lit.holds_in(self.story.leaf):
                raise ContextError(f"{role} {lit} does not hold in the story's leaf")

    @property
    def leaf(self) -> frozenset[Atom]:
        return self.story.leaf

    def holds(self, leaf: frozenset[Atom]) -> bool:
        """Do both cause and effect hold in ``leaf``?"""
        return self.cause.holds_in(leaf) and self.effect.holds_in(leaf)
