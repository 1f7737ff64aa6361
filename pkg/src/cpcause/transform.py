"""Syntactic theory surgery: determinization, interventions, law removal.

All transforms keep law ids stable.  Striking every disjunct from a head
leaves an empty-headed law in place; only ``remove_laws`` deletes laws.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable

from .kernel import Atom, CPLaw, CPTheory, Disjunct, Literal, TheoryError
from .story import Story


def determinize(theory: CPTheory, story: Story, subset: Iterable[int]) -> CPTheory:
    """Pin each law in ``subset`` to the outcome it had in ``story``.

    The chosen disjunct gets probability 1; a law that chose the empty
    disjunct gets an empty head.  ``theory`` may differ from
    ``story.theory`` (e.g. with laws removed) as long as the ids line up.
    """
    subset = set(subset)
    unapplied = subset - story.laws
    if unapplied:
        raise TheoryError(f"law(s) {sorted(unapplied)} were not applied in the story")
    laws = []
    for law in theory.laws:
        if law.id in subset:
            atom = story.theory.law(law.id).outcome_atom(story.outcome(law.id))
            head = (Disjunct(atom, 1),) if atom is not None else ()
            law = replace(law, head=head)
        laws.append(law)
    return theory.replace(laws)


def intervene_negative(theory: CPTheory, atom: Atom) -> CPTheory:
    """do(not atom): strike ``atom`` from every head."""
    if atom not in theory.atoms:
        raise TheoryError(f"unknown atom {atom}")
    laws = [replace(law, head=tuple(d for d in law.head if d.atom != atom)) for law in theory.laws]
    return theory.replace(laws)


def intervene_positive(theory: CPTheory, atom: Atom) -> CPTheory:
    """do(atom): append the vacuous deterministic law ``atom <- .``"""
    law = CPLaw(theory.next_id(), (Disjunct(atom, 1),), ())
    return theory.replace(theory.laws + (law,))


def intervene(theory: CPTheory, literal: Literal) -> CPTheory:
    """Force ``literal`` to hold: do(atom) for a positive literal, do(not atom) otherwise."""
    if literal.positive:
        return intervene_positive(theory, literal.atom)
    return intervene_negative(theory, literal.atom)


def counterfactual_intervention(theory: CPTheory, cause: Literal) -> CPTheory:
    """Undo ``cause``: do(not C) for a positive cause, do(C) for an omission."""
    return intervene(theory, ~cause)


def remove_laws(theory: CPTheory, subset: Iterable[int]) -> CPTheory:
    subset = set(subset)
    unknown = subset - set(theory.ids)
    if unknown:
        raise TheoryError(f"unknown law id(s) {sorted(unknown)}")
    return theory.replace(law for law in theory.laws if law.id not in subset)
