from fractions import Fraction

import pytest

from cpcause.kernel import Atom
from cpcause.parser import (
    ParseError,
    format_story,
    format_theory,
    parse_literals,
    parse_story,
    parse_theory,
)
from cpcause.story import StoryError

from tests.helpers import DATA

SUZY = (DATA / "suzy_billy.cpl").read_text()


def test_suzy_billy_parses_to_four_laws():
    theory = parse_theory(SUZY)
    assert theory.ids == [1, 2, 3, 4]
    assert theory.law(3).head[0].prob == Fraction(9, 10)
    assert Atom("Throws", ("Suzy",)) in theory.atoms


def test_format_then_parse_is_identity():
    theory = parse_theory(SUZY)
    assert parse_theory(format_theory(theory)) == theory


def test_disjunctions_empty_heads_and_labels():
    text = "#coin Heads:0.5 | Tails:0.5 <- .\n<- Heads.\nWin <- Heads, ~Tails.\n"
    theory = parse_theory(text)
    assert theory.by_ref("coin").id == 1
    assert theory.law(2).head == ()
    assert format_theory(theory) == text


def test_empty_theory():
    assert parse_theory("% nothing here\n").laws == ()
    assert format_theory(parse_theory("")) == ""


def test_parameters_need_binding():
    text = (DATA / "assassin_symbolic.cpl").read_text()
    theory = parse_theory(text, {"p": Fraction(1, 2), "q": Fraction(1, 3), "r": Fraction(1, 4)})
    assert theory.law(3).head[0].prob == Fraction(1, 4)
    with pytest.raises(ParseError, match="unbound"):
        parse_theory(text, {"p": Fraction(1, 2)})
    with pytest.raises(ParseError, match="not used"):
        parse_theory(SUZY, {"p": Fraction(1, 2)})


@pytest.mark.parametrize(
    "text, line, col, fragment",
    [
        ("A <- .\nB <- A\n", 3, 1, "expected '.'"),
        ("A:1.2 <- .", 1, 3, "outside"),
        ("A(_X) <- .", 1, 3, "non-ground"),
        ("A <- ~B.\nB <- ~A.\n", 1, 1, "stratif"),
        ("A:0.7 | B:0.7 <- .", 1, 1, "sum to"),
    ],
)
def test_errors_carry_positions(text, line, col, fragment):
    with pytest.raises(ParseError) as info:
        parse_theory(text)
    diag = info.value.diagnostic
    assert (diag.line, diag.column) == (line, col)
    assert fragment.lower() in diag.message.lower()


def test_query_literals():
    lits = parse_literals("Breaks, ~Throws(Suzy)")
    assert [str(l) for l in lits] == ["Breaks", "~Throws(Suzy)"]


def test_story_round_trip_and_labels():
    theory = parse_theory("#s A:0.5 <- .\nB <- A.\n")
    story = parse_story("s:none\n", theory)
    assert format_story(story) == "1:none\n"
    assert parse_story("1:1 2:1", theory).leaf == {Atom("A"), Atom("B")}


@pytest.mark.parametrize("steps", ["1:1", "2:1 1:1", "1:3 2:1", "1:1 1:1 2:1"])
def test_invalid_stories(steps):
    theory = parse_theory("A:0.5 <- .\nB <- A.\n")
    with pytest.raises((StoryError, ParseError)):
        parse_story(steps, theory)
