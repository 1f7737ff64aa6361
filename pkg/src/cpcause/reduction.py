"""(C,E)-reductions, necessary laws, simple stories, and the reduction-based
verdict of Hall's account.

Everything here is exhaustive enumeration.  Subtrees are pruned only with
monotone tests: true atoms never disappear along a branch, so once a state
holds an atom outside the actual leaf (or makes an omitted cause true) no
branch below it can be a reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import semantics
from .kernel import Literal, TheoryError
from .semantics import DEFAULT_NODE_BUDGET, NodeState
from .story import Context, Story, StoryError
from .transform import counterfactual_intervention, determinize


@dataclass(frozen=True)
class ReductionSet:
    base: Story
    cause: Literal
    effect: Literal
    members: tuple[Story, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def is_reduction(candidate: Story, base: Story) -> bool:
    if candidate.theory != base.theory:
        raise TheoryError("stories belong to different theories")
    return candidate.leaf <= base.leaf


def _pruner(context: Context):
    leaf = context.leaf
    cause = context.cause

    def prune(state: NodeState) -> bool:
        if not state.true_atoms <= leaf:
            return True
        return not cause.positive and cause.atom in state.true_atoms

    return prune


def story_schedule(story: Story) -> list[int]:
    """Priority order that reproduces ``story`` as a branch of its tree.

    Laws the story never applies cannot become applicable along it, so they
    only matter off the story's path, where they rank after it by id.
    """
    return [law_id for law_id, _ in story.steps]


def _is_member(context: Context, leaf) -> bool:
    return leaf <= context.leaf and context.holds(leaf)


def ce_reductions(context: Context, budget: int = DEFAULT_NODE_BUDGET) -> ReductionSet:
    """All (C,E)-reductions in the probability tree that contains the story."""
    theory = context.theory
    members = []
    for steps, prob, state in semantics.continuations(
        theory,
        semantics.root_state(theory),
        schedule=story_schedule(context.story),
        budget=budget,
        prune=_pruner(context),
    ):
        if _is_member(context, state.true_atoms):
            members.append(Story._trusted(theory, steps, state.true_atoms, prob))
    assert context.story in members
    return ReductionSet(context.story, context.cause, context.effect, tuple(members))


def _reduction_below(context: Context, state: NodeState, budget: int) -> bool:
    for _, _, leaf in semantics.continuations(
        context.theory, state, schedule=story_schedule(context.story), budget=budget, prune=_pruner(context)
    ):
        if _is_member(context, leaf.true_atoms):
            return True
    return False


def necessary_laws(context: Context, reductions: ReductionSet | None = None, budget: int = DEFAULT_NODE_BUDGET) -> dict[int, int | None]:
    """Laws applied with one and the same outcome in every (C,E)-reduction."""
    if reductions is None:
        reductions = ce_reductions(context, budget)
    common = dict(context.story.outcomes())
    for member in reductions:
        outcomes = member.outcomes()
        common = {r: o for r, o in common.items() if r in outcomes and outcomes[r] == o}
    return common


def is_simple(context: Context, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    theory = context.theory
    if any(theory.law(r).alternatives > 2 for r in context.story.laws):
        return False
    reductions = ce_reductions(context, budget)
    nec = necessary_laws(context, reductions)
    for member in reductions:
        for pos, (r, chosen) in enumerate(member.steps):
            law = theory.law(r)
            if law.is_deterministic or r in nec:
                continue
            before = member.state_after(pos)
            if not any(
                _reduction_below(context, semantics.apply_law(theory, before, r, o), budget)
                for o in law.outcomes()
                if o != chosen
            ):
                return False
    return True


def reduction_verdict(context: Context, budget: int = DEFAULT_NODE_BUDGET) -> tuple[bool, Fraction]:
    """Is there a (C,E)-reduction whose determinized counterfactual makes not-E possible?

    Returns the verdict and the largest counterfactual probability found.
    """
    best = Fraction(0)
    for member in ce_reductions(context, budget):
        pinned = determinize(context.theory, member, member.laws)
        value = semantics.marginal(counterfactual_intervention(pinned, context.cause), [~context.effect], budget)
        best = max(best, value)
    return best > 0, best


def sibling_necessary(context: Context, law_id: int, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """No branch through a sibling of the law's node in the story is a (C,E)-reduction."""
    story = context.story
    if law_id not in story.laws:
        raise StoryError(f"law {law_id} is not applied in this story")
    pos = story.index_of(law_id)
    before = story.state_after(pos - 1)
    for outcome in story.theory.law(law_id).outcomes():
        if outcome == story.outcome(law_id):
            continue
        if _reduction_below(context, semantics.apply_law(story.theory, before, law_id, outcome), budget):
            return False
    return True
