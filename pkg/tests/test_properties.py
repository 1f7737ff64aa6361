"""Property tests over random stratified theories.

The marginal oracle here never builds a probability tree: it enumerates one
outcome per law, takes the stratified least model of the chosen rules, and
sums the products of the chosen probabilities.
"""

from collections import defaultdict
from fractions import Fraction
from itertools import product

from hypothesis import given, settings, strategies as st

from cpcause import semantics
from cpcause.kernel import Literal, stratify
from cpcause.oracles import random_theory
from cpcause.parser import format_theory, parse_theory
from cpcause.transform import determinize

theories = st.randoms(use_true_random=False).map(lambda rng: random_theory(rng, max_alternatives=3))


def perfect_model(laws, choice, levels):
    true = set()
    for level in sorted(set(levels.values())):
        rules = [(law, o) for law, o in zip(laws, choice) if o is not None and levels[law.outcome_atom(o)] == level]
        changed = True
        while changed:
            changed = False
            for law, o in rules:
                atom = law.outcome_atom(o)
                if atom not in true and all(lit.holds_in(true) for lit in law.body):
                    true.add(atom)
                    changed = True
    return frozenset(true)


def world_distribution(theory):
    levels = stratify(theory.laws)
    out = defaultdict(Fraction)
    for choice in product(*(law.outcomes() for law in theory.laws)):
        weight = Fraction(1)
        for law, o in zip(theory.laws, choice):
            weight *= law.outcome_prob(o)
        out[perfect_model(theory.laws, choice, levels)] += weight
    return dict(out)


@settings(max_examples=150, deadline=None)
@given(theories)
def test_tree_matches_possible_worlds(theory):
    assert semantics.distribution(theory) == world_distribution(theory)


@settings(max_examples=100, deadline=None)
@given(theories)
def test_format_parse_round_trip(theory):
    parsed = parse_theory(format_theory(theory))
    assert parsed.laws == theory.laws


@settings(max_examples=100, deadline=None)
@given(theories, st.randoms(use_true_random=False))
def test_distribution_normalized_and_schedule_free(theory, rng):
    dist = semantics.distribution(theory)
    assert sum(dist.values()) == 1
    ids = list(theory.ids)
    rng.shuffle(ids)
    assert semantics.distribution(theory, ids) == dist


@settings(max_examples=100, deadline=None)
@given(theories, st.randoms(use_true_random=False))
def test_literal_and_complement_sum_to_one(theory, rng):
    atom = rng.choice(sorted(theory.atoms))
    lit = Literal(atom)
    assert semantics.marginal(theory, [lit]) + semantics.marginal(theory, [~lit]) == 1


@settings(max_examples=100, deadline=None)
@given(theories, st.randoms(use_true_random=False))
def test_pinning_a_branch_makes_its_leaf_certain(theory, rng):
    story = rng.choice(semantics.enumerate_branches(theory))
    pinned = determinize(theory, story, story.laws)
    assert semantics.distribution(pinned) == {story.leaf: 1}


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_adding_a_positive_law_is_monotone(rng):
    theory = random_theory(rng)
    # Strip negation so that more causes can only mean more effects.
    laws = [law.__class__(law.id, law.head, tuple(l for l in law.body if l.positive)) for law in theory.laws]
    positive = theory.replace(laws)
    extra = positive.replace(positive.laws[:-1])
    for atom in positive.atoms:
        lit = [Literal(atom)]
        assert semantics.marginal(extra, lit) <= semantics.marginal(positive, lit)


def test_oracle_on_suzy_billy():
    from tests.helpers import load

    theory = load("suzy_billy")
    assert world_distribution(theory) == semantics.distribution(theory)
