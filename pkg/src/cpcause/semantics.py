"""Execution of CP-theories over probability trees.

A node state records which atoms are true and which laws have been applied.
A law is applicable once its positive body atoms are true and each negated
body atom has become impossible, i.e. no unapplied law can still make it
true.  Possibility is the least fixpoint of "some unapplied law could fire"
starting from the currently true atoms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .kernel import Atom, BudgetExceeded, CPTheory, Literal, TheoryError

DEFAULT_NODE_BUDGET = 10**6


@dataclass(frozen=True)
class NodeState:
    true_atoms: frozenset[Atom]
    applied: frozenset[int]
    impossible_atoms: frozenset[Atom] = field(compare=False)


def possible_atoms(theory: CPTheory, true_atoms: Iterable[Atom], applied: Iterable[int]) -> frozenset[Atom]:
    """Atoms that are true or could still become true from this state."""
    possible = set(true_atoms)
    applied = set(applied)
    pending = [law for law in theory.laws if law.id not in applied and law.head]
    true_now = frozenset(possible)
    changed = True
    while changed:
        changed = False
        rest = []
        for law in pending:
            if any(a not in possible for a in law.positive_body()) or any(a in true_now for a in law.negative_body()):
                rest.append(law)
                continue
            for d in law.head:
                if d.atom not in possible:
                    possible.add(d.atom)
                    changed = True
        pending = rest
    return frozenset(possible)


def make_state(theory: CPTheory, true_atoms: Iterable[Atom] = (), applied: Iterable[int] = ()) -> NodeState:
    true_atoms = frozenset(true_atoms)
    applied = frozenset(applied)
    impossible = theory.atoms - possible_atoms(theory, true_atoms, applied)
    return NodeState(true_atoms, applied, frozenset(impossible))


def root_state(theory: CPTheory) -> NodeState:
    return make_state(theory)


def applicable_laws(theory: CPTheory, state: NodeState) -> frozenset[int]:
    result = set()
    for law in theory.laws:
        if law.id in state.applied or not law.head:
            continue
        if all(a in state.true_atoms for a in law.positive_body()) and all(
            a in state.impossible_atoms for a in law.negative_body()
        ):
            result.add(law.id)
    return frozenset(result)


def pick_law(applicable: Iterable[int], schedule=None) -> int:
    """Choose the next law.  ``schedule`` is None (lowest id first) or a
    priority order of law ids; ids missing from it rank last, lowest first."""
    applicable = set(applicable)
    if schedule is not None:
        for law_id in schedule:
            if law_id in applicable:
                return law_id
    return min(applicable)


def apply_law(theory: CPTheory, state: NodeState, law_id: int, outcome: int | None) -> NodeState:
    law = theory.law(law_id)
    atom = law.outcome_atom(outcome)
    true_atoms = state.true_atoms | {atom} if atom is not None else state.true_atoms
    return make_state(theory, true_atoms, state.applied | {law_id})


@dataclass
class TreeNode:
    state: NodeState
    law: int | None = None
    children: list[tuple[int | None, Fraction, "TreeNode"]] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class ProbabilityTree:
    root: TreeNode
    size: int

    def leaves(self) -> Iterator[tuple[Fraction, TreeNode]]:
        stack = [(Fraction(1), self.root)]
        while stack:
            prob, node = stack.pop()
            if node.is_leaf:
                yield prob, node
            for _, p, child in reversed(node.children):
                stack.append((prob * p, child))

    def render(self, theory: CPTheory) -> str:
        lines = ["* {}"]

        def walk(node: TreeNode, depth: int):
            for outcome, p, child in node.children:
                law = theory.law(node.law)
                atom = law.outcome_atom(outcome)
                effect = str(atom) if atom is not None else "none"
                true = "{" + ", ".join(sorted(map(str, child.state.true_atoms))) + "}"
                lines.append(f"{'  ' * depth}- law {node.law} -> {effect} [{p}] {true}")
                walk(child, depth + 1)

        walk(self.root, 1)
        return "\n".join(lines)


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(f"probability tree exceeds node budget of {self.limit}")


def build_tree(theory: CPTheory, schedule=None, budget: int = DEFAULT_NODE_BUDGET) -> ProbabilityTree:
    counter = _Budget(budget)

    def expand(state: NodeState) -> TreeNode:
        counter.tick()
        node = TreeNode(state)
        candidates = applicable_laws(theory, state)
        if not candidates:
            return node
        node.law = pick_law(candidates, schedule)
        law = theory.law(node.law)
        for outcome in law.outcomes():
            child = expand(apply_law(theory, state, node.law, outcome))
            node.children.append((outcome, law.outcome_prob(outcome), child))
        return node

    return ProbabilityTree(expand(root_state(theory)), counter.used)


def continuations(
    theory: CPTheory,
    state: NodeState,
    schedule=None,
    budget: int = DEFAULT_NODE_BUDGET,
    prune=None,
) -> Iterator[tuple[list[tuple[int, int | None]], Fraction, NodeState]]:
    """Yield ``(steps, probability, leaf state)`` for every branch below ``state``.

    ``prune(state)`` may return True to skip a subtree; callers use it with
    monotone conditions only (true atoms never shrink along a branch).
    """
    counter = _Budget(budget)

    def walk(state, prefix, prob):
        counter.tick()
        if prune is not None and prune(state):
            return
        candidates = applicable_laws(theory, state)
        if not candidates:
            yield list(prefix), prob, state
            return
        law_id = pick_law(candidates, schedule)
        law = theory.law(law_id)
        for outcome in law.outcomes():
            prefix.append((law_id, outcome))
            yield from walk(apply_law(theory, state, law_id, outcome), prefix, prob * law.outcome_prob(outcome))
            prefix.pop()

    yield from walk(state, [], Fraction(1))


def distribution(theory: CPTheory, schedule=None, budget: int = DEFAULT_NODE_BUDGET) -> dict[frozenset[Atom], Fraction]:
    """Probability of each leaf truth set, aggregated over equal leaves."""
    counter = _Budget(budget)
    memo: dict[tuple[frozenset, frozenset], dict[frozenset[Atom], Fraction]] = {}

    def leaves_from(state: NodeState) -> dict[frozenset[Atom], Fraction]:
        key = (state.true_atoms, state.applied)
        if key in memo:
            return memo[key]
        counter.tick()
        candidates = applicable_laws(theory, state)
        if not candidates:
            result = {state.true_atoms: Fraction(1)}
        else:
            law_id = pick_law(candidates, schedule)
            law = theory.law(law_id)
            result: dict[frozenset[Atom], Fraction] = {}
            for outcome in law.outcomes():
                p = law.outcome_prob(outcome)
                for leaf, q in leaves_from(apply_law(theory, state, law_id, outcome)).items():
                    result[leaf] = result.get(leaf, Fraction(0)) + p * q
        memo[key] = result
        return result

    return dict(leaves_from(root_state(theory)))


def _check_query(theory: CPTheory, query: Sequence[Literal]):
    for lit in query:
        if lit.atom not in theory.atoms:
            raise TheoryError(f"unknown atom {lit.atom} in query")


def marginal(theory: CPTheory, query: Sequence[Literal], budget: int = DEFAULT_NODE_BUDGET) -> Fraction:
    """Probability that every literal in ``query`` holds in the final state."""
    _check_query(theory, query)
    total = Fraction(0)
    for leaf, p in distribution(theory, budget=budget).items():
        if all(lit.holds_in(leaf) for lit in query):
            total += p
    return total


def enumerate_branches(theory: CPTheory, schedule=None, budget: int = DEFAULT_NODE_BUDGET) -> list:
    """All root-to-leaf branches as validated :class:`~cpcause.story.Story` values."""
    from .story import Story

    return [
        Story._trusted(theory, steps, leaf.true_atoms, prob)
        for steps, prob, leaf in continuations(theory, root_state(theory), schedule, budget)
    ]
