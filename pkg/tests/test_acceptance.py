"""Acceptance criteria 1-9, one recorded PASS/FAIL line each.

The random corpora are seeded, so every run checks the same 200 theories and
202 diagrams.
"""

import random
import time
from fractions import Fraction
from itertools import product

import pytest

from cpcause import semantics
from cpcause.causation import causal_score
from cpcause.kernel import Atom, Literal
from cpcause.oracles import (
    build_corpus,
    check_hall_translation,
    check_order_invariance,
    check_production,
    check_reduction_vs_necessity,
    check_sibling_necessity,
)
from cpcause.parser import format_theory
from cpcause.reduction import is_simple, reduction_verdict
from cpcause.story import Context
from cpcause.transform import determinize, intervene_negative
from cpcause.neuron import translate

from tests.helpers import context, diagram, load, load_with_story

SEED = 20240601
GRID = [Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)]


@pytest.fixture(scope="module")
def corpus():
    return build_corpus(SEED, n_theories=200, n_diagrams=200)


def test_suzy_billy_marginal_is_exactly_49_over_50(criterion):
    start = time.perf_counter()
    theory = load("suzy_billy")
    value = semantics.marginal(theory, [Literal(Atom("Breaks"))])
    elapsed = time.perf_counter() - start
    ok = value == Fraction(49, 50) and elapsed < 1
    criterion(1, ok, f"P(Breaks) = {value}, {elapsed:.3f}s (< 1s)")
    assert value == Fraction(49, 50)
    assert elapsed < 1


def test_assassin_scores_match_closed_forms_on_grid(criterion):
    start = time.perf_counter()
    mismatches = []
    for p, q, r in product(GRID, repeat=3):
        theory, story = load_with_story("assassin_symbolic", "assassin", p=p, q=q, r=r)
        ctx = context(theory, story, "Assassin", "Dies")
        expected = {"dependence": 0, "production": 1, "bv12": 1 - r, "hall07": (1 - r) * (1 - q)}
        for name, want in expected.items():
            got = causal_score(name, ctx).score
            if got != want:
                mismatches.append((p, q, r, name, got, want))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 5
    criterion(2, ok, f"27 grid points x 4 definitions, {len(mismatches)} mismatches, {elapsed:.2f}s (< 5s)")
    assert not mismatches
    assert elapsed < 5


def test_suzy_billy_determinization_and_intervention_listings(criterion):
    theory, story = load_with_story("suzy_billy")
    pinned = format_theory(determinize(theory, story, story.laws)).splitlines()
    blocked = format_theory(intervene_negative(theory, Atom("Throws", ("Suzy",)))).splitlines()
    want_pinned = ["Throws(Suzy) <- .", "Throws(Billy) <- .", "Breaks <- Throws(Suzy).", "Breaks <- Throws(Billy)."]
    want_blocked = ["<- .", "Throws(Billy) <- .", "Breaks:0.9 <- Throws(Suzy).", "Breaks:0.8 <- Throws(Billy)."]
    ok = pinned == want_pinned and blocked == want_blocked
    criterion(3, ok, "pinned theory and do(~Throws(Suzy)) listings")
    assert pinned == want_pinned
    assert blocked == want_blocked


def test_diagram_hall_verdict_matches_reduction_verdict(corpus, criterion):
    found = []
    pairs = 0
    for d in corpus.diagrams:
        pairs += len(d.fired) ** 2
        found += check_hall_translation(d)
    criterion(4, not found, f"{len(corpus.diagrams)} diagrams, {pairs} fired pairs, {len(found)} discrepancies")
    assert not found, found[:5]


def test_reduction_verdict_and_necessity_score(corpus, criterion):
    found = []
    simple = 0
    for ctx in corpus.contexts:
        simple += is_simple(ctx)
        found += [d for d in check_reduction_vs_necessity(ctx) if d.check in ("forward", "equivalence")]
    criterion(
        5, not found, f"{len(corpus.contexts)} contexts ({simple} simple), {len(found)} discrepancies"
    )
    assert not found, found[:5]


def test_sibling_check_matches_necessity_on_simple_stories(corpus, criterion):
    found = []
    checked = 0
    for ctx in corpus.contexts:
        if is_simple(ctx):
            checked += sum(1 for r in ctx.story.laws if not ctx.theory.law(r).is_deterministic)
            found += check_sibling_necessity(ctx)
    criterion(6, not found, f"{checked} non-deterministic laws on simple stories, {len(found)} discrepancies")
    assert not found, found[:5]


def test_producer_path_matches_positive_production_score(corpus, criterion):
    found = []
    for d in corpus.diagrams:
        found += check_production(d)
    criterion(7, not found, f"{len(corpus.diagrams)} diagrams, {len(found)} discrepancies")
    assert not found, found[:5]


def test_distribution_is_schedule_invariant(corpus, criterion):
    rng = random.Random(SEED)
    found = []
    for theory in corpus.theories:
        found += check_order_invariance(rng, theory)
    criterion(8, not found, f"{len(corpus.theories)} theories x 3 schedules, {len(found)} discrepancies")
    assert not found, found[:5]


def test_early_preemption_scores(criterion):
    theory, story = translate(diagram("a"))
    ctx = Context(theory, story, Literal(Atom("C")), Literal(Atom("E")))
    scores = {name: causal_score(name, ctx).score for name in ("hall07", "production", "dependence", "bv12")}
    oracle, _ = reduction_verdict(ctx)
    ok = (
        scores["hall07"] == Fraction(1, 2)
        and scores["production"] == 1
        and scores["dependence"] == 0
        and oracle == (scores["hall07"] > 0)
    )
    criterion(
        9,
        ok,
        "hall07 {hall07}, production {production}, dependence {dependence}, bv12 {bv12}".format(**scores),
    )
    assert scores["hall07"] == Fraction(1, 2)
    assert scores["production"] == 1
    assert scores["dependence"] == 0
    assert oracle is True
