import pytest

from cpcause.kernel import Atom, Literal
from cpcause.parser import parse_theory
from cpcause.story import (
    Context,
    ContextError,
    StoryError,
    applied_before,
    could_have_applied,
    effect_position,
    effect_pretrue,
    sibling_outcomes,
    validate,
)

from tests.helpers import load_with_story

DIES, BREAKS = Atom("Dies"), Atom("Breaks")


def test_effect_position_is_first_step_making_it_true():
    _, story = load_with_story("assassin")
    assert effect_position(story, DIES) == 3  # law 4 is the third step
    assert applied_before(story, 4, DIES)
    assert not applied_before(story, 6, DIES)
    assert not applied_before(story, 3, DIES)


def test_negative_effect_sits_at_the_end():
    theory = parse_theory("A:0.5 <- .\nB:0.5 <- .\n")
    story = validate(theory, [(1, None), (2, 1)])
    assert effect_position(story, Literal(Atom("A"), False)) == 2


def test_effect_pretrue_flags_redundant_applications():
    _, story = load_with_story("assassin")
    assert effect_pretrue(story, 6)
    assert not effect_pretrue(story, 4)
    _, suzy = load_with_story("suzy_billy")
    assert effect_pretrue(suzy, 4)


def test_could_have_applied():
    _, story = load_with_story("assassin")
    # Murder's law fires later in the story, Backup's law can never fire once Assassin is true.
    assert could_have_applied(story, 6, DIES)
    assert not could_have_applied(story, 3, DIES)
    with pytest.raises(StoryError):
        could_have_applied(story, 1, DIES)


def test_sibling_outcomes():
    _, story = load_with_story("assassin")
    assert sibling_outcomes(story, 1) == {None}
    assert sibling_outcomes(story, 4) == set()


def test_story_queries():
    _, story = load_with_story("suzy_billy")
    assert story.index_of(3) == 3
    assert story.outcome(3) == 1
    assert story.state_after(2).true_atoms == {Atom("Throws", ("Suzy",)), Atom("Throws", ("Billy",))}
    assert str(story) == "1:1 2:1 3:1 4:1"


def test_incomplete_story_is_rejected():
    theory = parse_theory("A:0.5 <- .\nB <- A.\n")
    with pytest.raises(StoryError):
        validate(theory, [(1, 1)])
    with pytest.raises(StoryError):
        validate(theory, [(1, None), (2, 1)])


def test_context_requires_cause_and_effect_in_leaf():
    theory, story = load_with_story("assassin")
    Context(theory, story, Literal(Atom("Assassin")), DIES)
    with pytest.raises(ContextError):
        Context(theory, story, Literal(Atom("Backup")), Literal(DIES))
    with pytest.raises(ContextError):
        Context(theory, story, Literal(Atom("Ghost")), Literal(DIES))
