"""Core immutable types for CP-theories.

Probabilities are :class:`fractions.Fraction` values throughout; nothing in the
package ever touches a float except for display.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_DECIMAL = re.compile(r"(\d+)(?:\.(\d+))?\Z|\.(\d+)\Z")
_FRACTION = re.compile(r"(\d+)\s*/\s*(\d+)\Z")


class CPLogicError(Exception):
    """Base class for domain errors (invalid theory, story, or context)."""


class TheoryError(CPLogicError):
    pass


class BudgetExceeded(CPLogicError):
    """Raised when an enumeration would visit more nodes than allowed."""


def is_identifier(text: str) -> bool:
    return bool(_IDENT.match(text))


@dataclass(frozen=True, order=True)
class Atom:
    name: str
    args: tuple[str, ...] = ()

    def __post_init__(self):
        if not is_identifier(self.name):
            raise TheoryError(f"invalid atom name {self.name!r}")
        object.__setattr__(self, "args", tuple(self.args))
        for arg in self.args:
            if not is_identifier(arg):
                raise TheoryError(f"non-ground or malformed argument {arg!r} in atom {self.name}")

    def __str__(self) -> str:
        if self.args:
            return f"{self.name}({','.join(self.args)})"
        return self.name


@dataclass(frozen=True, order=True)
class Literal:
    atom: Atom
    positive: bool = True

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"~{self.atom}"

    def __invert__(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def holds_in(self, atoms: frozenset[Atom] | set[Atom]) -> bool:
        return (self.atom in atoms) == self.positive


def rational_from_decimal(text: str) -> Fraction:
    """Parse ``"0.9"``, ``"1"`` or ``"9/10"`` into an exact fraction.

    Only unsigned finite decimals and integer ratios are accepted; exponent
    notation and signs are rejected so that no float ever sneaks in.
    """
    text = text.strip()
    if _DECIMAL.match(text):
        return Fraction(text)
    m = _FRACTION.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    raise ValueError(f"malformed numeral {text!r}")


def probability_from_text(text: str) -> Fraction:
    value = rational_from_decimal(text)
    if not 0 <= value <= 1:
        raise ValueError(f"probability {text} outside [0, 1]")
    return value


def format_rational(value: Fraction) -> str:
    """Render exactly: as a terminating decimal when possible, else ``a/b``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    places = max(twos, fives)
    scaled = value * 10**places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


@dataclass(frozen=True)
class Disjunct:
    atom: Atom
    prob: Fraction

    def __post_init__(self):
        object.__setattr__(self, "prob", Fraction(self.prob))
        if not 0 < self.prob <= 1:
            raise TheoryError(f"probability of {self.atom} must lie in (0, 1], got {self.prob}")

    def __str__(self) -> str:
        if self.prob == 1:
            return str(self.atom)
        return f"{self.atom}:{format_rational(self.prob)}"


@dataclass(frozen=True)
class CPLaw:
    id: int
    head: tuple[Disjunct, ...]
    body: tuple[Literal, ...] = ()
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "body", tuple(self.body))
        if self.id < 1:
            raise TheoryError(f"law ids start at 1, got {self.id}")
        if self.label is not None and not is_identifier(self.label):
            raise TheoryError(f"invalid law label {self.label!r}")
        heads = [d.atom for d in self.head]
        if len(set(heads)) != len(heads):
            raise TheoryError(f"law {self.id}: atom repeated in head")
        if len(set(self.body)) != len(self.body):
            raise TheoryError(f"law {self.id}: literal repeated in body")
        total = sum((d.prob for d in self.head), Fraction(0))
        if total > 1:
            raise TheoryError(f"law {self.id}: head probabilities sum to {total} > 1")

    @property
    def remainder(self) -> Fraction:
        return head_remainder(self)

    @property
    def is_deterministic(self) -> bool:
        """Exactly one possible outcome; an empty head counts."""
        return self.alternatives == 1

    @property
    def alternatives(self) -> int:
        """Number of possible outcomes, counting the implicit empty disjunct."""
        return len(self.head) + (1 if self.remainder > 0 else 0)

    def outcomes(self) -> list[int | None]:
        result: list[int | None] = list(range(1, len(self.head) + 1))
        if self.remainder > 0:
            result.append(None)
        return result

    def outcome_atom(self, outcome: int | None) -> Atom | None:
        if outcome is None:
            return None
        return self.head[outcome - 1].atom

    def outcome_prob(self, outcome: int | None) -> Fraction:
        if outcome is None:
            return self.remainder
        return self.head[outcome - 1].prob

    def positive_body(self) -> list[Atom]:
        return [lit.atom for lit in self.body if lit.positive]

    def negative_body(self) -> list[Atom]:
        return [lit.atom for lit in self.body if not lit.positive]

    def atoms(self) -> set[Atom]:
        return {d.atom for d in self.head} | {lit.atom for lit in self.body}

    def __str__(self) -> str:
        prefix = f"#{self.label} " if self.label else ""
        head = " | ".join(str(d) for d in self.head)
        body = ", ".join(str(lit) for lit in self.body)
        left = f"{head} <-" if head else "<-"
        return f"{prefix}{left} {body}." if body else f"{prefix}{left} ."


def head_remainder(law: CPLaw) -> Fraction:
    """Probability mass of the implicit empty disjunct."""
    return 1 - sum((d.prob for d in law.head), Fraction(0))


def stratify(laws: Sequence[CPLaw]) -> dict[Atom, int]:
    """Return a level mapping witnessing stratified negation.

    Head atoms must sit at a level >= every positive body atom and strictly
    above every negated body atom.  Raises :class:`TheoryError` when no such
    mapping exists (a cycle through negation).
    """
    atoms: set[Atom] = set()
    for law in laws:
        atoms |= law.atoms()
    level = {a: 0 for a in atoms}
    # Bellman-Ford style relaxation; any level beyond |atoms| means a negative cycle.
    limit = len(atoms)
    changed = True
    while changed:
        changed = False
        for law in laws:
            for d in law.head:
                need = level[d.atom]
                for a in law.positive_body():
                    need = max(need, level[a])
                for a in law.negative_body():
                    need = max(need, level[a] + 1)
                if need > level[d.atom]:
                    if need > limit:
                        raise TheoryError(
                            f"negation is not stratified (cycle through negation involving {d.atom}, law {law.id})"
                        )
                    level[d.atom] = need
                    changed = True
    return level


@dataclass(frozen=True)
class CPTheory:
    """An ordered collection of CP-laws.

    ``atoms`` always contains every atom mentioned by a law, and may carry
    extra atoms inherited from the theory this one was derived from (an
    intervention can remove the last mention of an atom, yet queries about
    it remain meaningful).  It does not take part in equality.
    """

    laws: tuple[CPLaw, ...] = ()
    atoms: frozenset[Atom] = field(default=frozenset(), compare=False)

    def __post_init__(self):
        laws = tuple(self.laws)
        object.__setattr__(self, "laws", laws)
        ids = [law.id for law in laws]
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise TheoryError("law ids must be strictly increasing")
        found: set[Atom] = set(self.atoms)
        for law in laws:
            found |= law.atoms()
        object.__setattr__(self, "atoms", frozenset(found))
        stratify(laws)

    def __len__(self) -> int:
        return len(self.laws)

    def __iter__(self):
        return iter(self.laws)

    @property
    def ids(self) -> list[int]:
        return [law.id for law in self.laws]

    def law(self, law_id: int) -> CPLaw:
        for law in self.laws:
            if law.id == law_id:
                return law
        raise TheoryError(f"unknown law id {law_id}")

    def by_ref(self, ref: str) -> CPLaw:
        """Look a law up by integer id or by label."""
        if ref.isdigit():
            return self.law(int(ref))
        for law in self.laws:
            if law.label == ref:
                return law
        raise TheoryError(f"unknown law {ref!r}")

    def next_id(self) -> int:
        return self.laws[-1].id + 1 if self.laws else 1

    def replace(self, laws: Iterable[CPLaw]) -> "CPTheory":
        return CPTheory(tuple(laws), self.atoms)

    def __str__(self) -> str:
        return "\n".join(str(law) for law in self.laws)


def make_theory(laws: Iterable[CPLaw], extra_atoms: Iterable[Atom] = ()) -> CPTheory:
    return CPTheory(tuple(laws), frozenset(extra_atoms))
