"""Neuron diagrams, their translation into CP-logic, and two diagram-level
causation checks that serve as independent oracles.

A neuron fires iff at least one stimulatory parent fires and no inhibitory
parent fires.  Exogenous neurons have no parents and fire with probability
``p``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping

from . import semantics
from .kernel import Atom, CPLaw, CPLogicError, CPTheory, Disjunct, Literal, is_identifier, probability_from_text
from .story import Story, validate


class DiagramError(CPLogicError):
    pass


@dataclass(frozen=True)
class Neuron:
    id: str
    exogenous: bool
    prob: Fraction | None = None
    stim: tuple[str, ...] = ()
    inhib: tuple[str, ...] = ()


@dataclass(frozen=True)
class NeuronDiagram:
    nodes: tuple[Neuron, ...]
    fired: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "fired", frozenset(self.fired))
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise DiagramError("duplicate neuron id")
        known = set(ids)
        for n in self.nodes:
            if not is_identifier(n.id):
                raise DiagramError(f"invalid neuron id {n.id!r}")
            if n.exogenous:
                if n.stim or n.inhib:
                    raise DiagramError(f"exogenous neuron {n.id} cannot have parents")
                if n.prob is None or not 0 < n.prob < 1:
                    raise DiagramError(f"exogenous neuron {n.id} needs a probability strictly between 0 and 1")
            else:
                if not n.stim:
                    raise DiagramError(f"endogenous neuron {n.id} needs a stimulatory parent")
                if set(n.stim) & set(n.inhib):
                    raise DiagramError(f"neuron {n.id} has a parent that both stimulates and inhibits")
                missing = (set(n.stim) | set(n.inhib)) - known
                if missing:
                    raise DiagramError(f"neuron {n.id} has unknown parent(s) {sorted(missing)}")
        if self.fired - known:
            raise DiagramError(f"unknown fired neuron(s) {sorted(self.fired - known)}")
        self.topological_order()  # raises on cycles
        expected = evaluate_diagram(self, {n.id: n.id in self.fired for n in self.exogenous()})
        wrong = sorted(i for i in ids if expected[i] != (i in self.fired))
        if wrong:
            raise DiagramError(f"firing record violates the firing rule at {wrong}")

    def node(self, node_id: str) -> Neuron:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise DiagramError(f"unknown neuron {node_id!r}")

    def exogenous(self) -> list[Neuron]:
        return [n for n in self.nodes if n.exogenous]

    def endogenous(self) -> list[Neuron]:
        return [n for n in self.nodes if not n.exogenous]

    @property
    def actual(self) -> dict[str, bool]:
        return {n.id: n.id in self.fired for n in self.nodes}

    def topological_order(self) -> list[Neuron]:
        """Kahn's algorithm, breaking ties by declaration order."""
        remaining = list(self.nodes)
        done: set[str] = set()
        order = []
        while remaining:
            for n in remaining:
                if set(n.stim) | set(n.inhib) <= done:
                    break
            else:
                raise DiagramError("diagram contains a cycle")
            remaining.remove(n)
            done.add(n.id)
            order.append(n)
        return order


def evaluate_diagram(
    diagram: NeuronDiagram, exo: Mapping[str, bool], force: Mapping[str, bool] | None = None
) -> dict[str, bool]:
    """Propagate exogenous values through the diagram; ``force`` overrides neurons."""
    force = dict(force or {})
    values: dict[str, bool] = {}
    for n in diagram.topological_order():
        if n.id in force:
            values[n.id] = force[n.id]
        elif n.exogenous:
            values[n.id] = bool(exo[n.id])
        else:
            values[n.id] = any(values[s] for s in n.stim) and not any(values[i] for i in n.inhib)
    return values


def _subsets(items: tuple[str, ...]):
    for size in range(1, len(items) + 1):
        yield from combinations(items, size)


def translate(diagram: NeuronDiagram) -> tuple[CPTheory, Story]:
    """Translate to a CP-theory plus the story that replays the firing record.

    Exogenous neurons become ``(V:p) <- .``; an endogenous neuron gets one
    deterministic law per nonempty subset of its stimulatory parents, each
    guarded by the negation of every inhibitor.

    The story settles each firing neuron through the law for the full set of
    its firing stimulators, visiting neurons in topological order, and only
    then applies the remaining (now redundant) subset laws.
    """
    laws: list[CPLaw] = []
    exo_law: dict[str, int] = {}
    subset_law: dict[tuple[str, frozenset[str]], int] = {}
    for n in diagram.exogenous():
        law = CPLaw(len(laws) + 1, (Disjunct(Atom(n.id), n.prob),), ())
        exo_law[n.id] = law.id
        laws.append(law)
    for n in diagram.endogenous():
        inhibitors = tuple(Literal(Atom(i), False) for i in n.inhib)
        for subset in _subsets(n.stim):
            body = tuple(Literal(Atom(s)) for s in subset) + inhibitors
            law = CPLaw(len(laws) + 1, (Disjunct(Atom(n.id), 1),), body)
            subset_law[(n.id, frozenset(subset))] = law.id
            laws.append(law)
    theory = CPTheory(tuple(laws), frozenset(Atom(n.id) for n in diagram.nodes))

    steps: list[tuple[int, int | None]] = []
    for n in diagram.exogenous():
        steps.append((exo_law[n.id], 1 if n.id in diagram.fired else None))
    for n in diagram.topological_order():
        if not n.exogenous and n.id in diagram.fired:
            firing = frozenset(s for s in n.stim if s in diagram.fired)
            steps.append((subset_law[(n.id, firing)], 1))
    state = semantics.root_state(theory)
    for law_id, outcome in steps:
        state = semantics.apply_law(theory, state, law_id, outcome)
    while True:
        pending = semantics.applicable_laws(theory, state)
        if not pending:
            break
        law_id = min(pending)
        steps.append((law_id, 1))
        state = semantics.apply_law(theory, state, law_id, 1)
    return theory, validate(theory, steps)


def diagram_reductions(diagram: NeuronDiagram) -> list[dict[str, bool]]:
    """Variants where some firing exogenous neurons are switched off and every
    neuron keeps its actual value or its default (off) value."""
    firing_exo = [n.id for n in diagram.exogenous() if n.id in diagram.fired]
    result = []
    for keep in product((True, False), repeat=len(firing_exo)):
        exo = {n.id: False for n in diagram.exogenous()}
        exo.update({i: k for i, k in zip(firing_exo, keep)})
        values = evaluate_diagram(diagram, exo)
        if all(not v or i in diagram.fired for i, v in values.items()) and values not in result:
            result.append(values)
    return result


def _require_fired(diagram: NeuronDiagram, *ids: str):
    for i in ids:
        diagram.node(i)
        if i not in diagram.fired:
            raise DiagramError(f"neuron {i} did not fire")


def hall_cause_diagram(diagram: NeuronDiagram, cause: str, effect: str) -> bool:
    """Some reduction keeping cause and effect on has effect off once cause is forced off."""
    _require_fired(diagram, cause, effect)
    exo_ids = [n.id for n in diagram.exogenous()]
    for values in diagram_reductions(diagram):
        if not (values[cause] and values[effect]):
            continue
        exo = {i: values[i] for i in exo_ids}
        if not evaluate_diagram(diagram, exo, force={cause: False})[effect]:
            return True
    return False


def producer_path(diagram: NeuronDiagram, cause: str, effect: str) -> bool:
    """A directed path of firing neurons along stimulatory links from cause to effect."""
    _require_fired(diagram, cause, effect)
    reached = {cause}
    frontier = [cause]
    while frontier:
        current = frontier.pop()
        for n in diagram.nodes:
            if n.id in diagram.fired and current in n.stim and n.id not in reached:
                reached.add(n.id)
                frontier.append(n.id)
    return effect in reached


def load_diagram(text: str) -> NeuronDiagram:
    """Read the ``.nd.json`` format."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("nodes"), list):
        raise DiagramError('expected an object with a "nodes" list')
    nodes, fired = [], set()
    for entry in data["nodes"]:
        try:
            node_id = entry["id"]
            kind = entry.get("kind", "endo")
        except (TypeError, KeyError):
            raise DiagramError(f"malformed node entry {entry!r}") from None
        if kind not in ("exo", "endo"):
            raise DiagramError(f"neuron {node_id}: kind must be 'exo' or 'endo'")
        prob = None
        if kind == "exo":
            try:
                prob = probability_from_text(str(entry.get("p", "1/2")))
            except ValueError as exc:
                raise DiagramError(f"neuron {node_id}: {exc}") from None
        nodes.append(
            Neuron(node_id, kind == "exo", prob, tuple(entry.get("stim", ())), tuple(entry.get("inhib", ())))
        )
        if entry.get("fires", False):
            fired.add(node_id)
    return NeuronDiagram(tuple(nodes), frozenset(fired))


def dump_diagram(diagram: NeuronDiagram) -> str:
    nodes = []
    for n in diagram.nodes:
        entry: dict = {"id": n.id, "kind": "exo" if n.exogenous else "endo"}
        if n.exogenous:
            entry["p"] = f"{n.prob.numerator}/{n.prob.denominator}"
        else:
            entry["stim"] = list(n.stim)
            if n.inhib:
                entry["inhib"] = list(n.inhib)
        entry["fires"] = n.id in diagram.fired
        nodes.append(entry)
    return json.dumps({"nodes": nodes}, indent=2) + "\n"
