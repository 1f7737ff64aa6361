from fractions import Fraction

import pytest

from cpcause import semantics
from cpcause.kernel import Atom, BudgetExceeded, CPTheory, Literal, TheoryError
from cpcause.parser import parse_theory

from tests.helpers import load

A, B, C = Atom("A"), Atom("B"), Atom("C")


def test_suzy_billy_distribution():
    theory = load("suzy_billy")
    suzy, billy, breaks = Atom("Throws", ("Suzy",)), Atom("Throws", ("Billy",)), Atom("Breaks")
    assert semantics.distribution(theory) == {
        frozenset({suzy, billy, breaks}): Fraction(49, 50),
        frozenset({suzy, billy}): Fraction(1, 50),
    }


def test_complement_and_conjunction_marginals():
    theory = load("suzy_billy")
    breaks = Literal(Atom("Breaks"))
    assert semantics.marginal(theory, [~breaks]) == Fraction(1, 50)
    assert semantics.marginal(theory, []) == 1
    with pytest.raises(TheoryError):
        semantics.marginal(theory, [Literal(Atom("Nope"))])


def test_branch_counts():
    assert len(semantics.enumerate_branches(load("suzy_billy"))) == 4
    assert len(semantics.enumerate_branches(load("assassin"))) == 6


def test_empty_theory_has_one_empty_branch():
    branches = semantics.enumerate_branches(CPTheory(()))
    assert len(branches) == 1
    assert branches[0].steps == () and branches[0].probability == 1


def test_negation_waits_until_the_atom_is_impossible():
    theory = parse_theory("A:0.5 <- .\nB <- ~A.\n")
    root = semantics.root_state(theory)
    assert semantics.applicable_laws(theory, root) == {1}
    after_none = semantics.apply_law(theory, root, 1, None)
    assert A in after_none.impossible_atoms
    assert semantics.applicable_laws(theory, after_none) == {2}
    assert semantics.marginal(theory, [Literal(B)]) == Fraction(1, 2)


def test_positive_loop_atoms_are_impossible():
    # A and B only support each other, so C <- ~A fires.
    theory = parse_theory("A <- B.\nB <- A.\nC <- ~A.\n")
    assert semantics.marginal(theory, [Literal(C)]) == 1
    assert semantics.possible_atoms(theory, (), ()) == {C}


def test_schedule_changes_tree_but_not_distribution():
    theory = load("assassin")
    forward = semantics.build_tree(theory)
    backward = semantics.build_tree(theory, list(reversed(theory.ids)))
    assert forward.root.law == 1 and backward.root.law == 2
    assert semantics.distribution(theory) == semantics.distribution(theory, list(reversed(theory.ids)))


def test_leaf_probabilities_sum_to_one():
    tree = semantics.build_tree(load("assassin"))
    assert sum(p for p, _ in tree.leaves()) == 1


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        semantics.build_tree(load("assassin"), budget=3)
    with pytest.raises(BudgetExceeded):
        semantics.distribution(load("suzy_billy"), budget=2)


def test_render_lists_edges():
    text = semantics.build_tree(load("suzy_billy")).render(load("suzy_billy"))
    assert text.splitlines()[0] == "* {}"
    assert "law 3 -> Breaks [9/10]" in text
    assert text.count("law 4 ->") == 4
