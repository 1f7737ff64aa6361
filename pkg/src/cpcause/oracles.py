"""Random small-model corpora and the differential checks run over them.

Each check compares two independently computed answers and returns the list
of inputs on which they disagree; an empty list means agreement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import semantics
from .causation import causal_score
from .kernel import Atom, CPLaw, CPTheory, Disjunct, Literal
from .neuron import Neuron, NeuronDiagram, evaluate_diagram, hall_cause_diagram, producer_path, translate
from .reduction import is_simple, necessary_laws, reduction_verdict, sibling_necessary
from .story import Context, Story

_PROBS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)]


def random_theory(rng: random.Random, max_atoms: int = 5, max_laws: int = 6, max_alternatives: int = 2) -> CPTheory:
    """A random stratified ground theory.

    Atoms get random levels; positive body atoms sit at or below the head
    level and negated ones strictly below, which guarantees stratification.
    """
    n_atoms = rng.randint(2, max_atoms)
    atoms = [Atom(f"A{i}") for i in range(n_atoms)]
    level = {a: rng.randint(0, 2) for a in atoms}
    laws = []
    for law_id in range(1, rng.randint(1, max_laws) + 1):
        shape = rng.random()
        if shape < 0.35:
            head_atoms = [rng.choice(atoms)]
            probs = [Fraction(1)]
        elif shape < 0.75 or max_alternatives < 3:
            head_atoms = rng.sample(atoms, rng.randint(1, min(2, max_alternatives)))
            if len(head_atoms) == 1:
                probs = [rng.choice(_PROBS)]
            else:
                p = rng.choice(_PROBS)
                probs = [p, 1 - p]
        else:
            head_atoms = rng.sample(atoms, 2)
            p = rng.choice([Fraction(1, 4), Fraction(1, 3)])
            probs = [p, p]
        floor = min(level[a] for a in head_atoms)
        body = []
        for a in atoms:
            if a in head_atoms or rng.random() > 0.3:
                continue
            if level[a] < floor and rng.random() < 0.4:
                body.append(Literal(a, False))
            elif level[a] <= floor:
                body.append(Literal(a, True))
        laws.append(CPLaw(law_id, tuple(Disjunct(a, p) for a, p in zip(head_atoms, probs)), tuple(body)))
    return CPTheory(tuple(laws), frozenset(atoms))


def random_schedule(rng: random.Random, theory: CPTheory) -> list[int]:
    ids = list(theory.ids)
    rng.shuffle(ids)
    return ids


def random_context(rng: random.Random, theory: CPTheory) -> Context | None:
    """A story drawn under a random schedule plus a cause/effect pair from its leaf."""
    stories = semantics.enumerate_branches(theory, random_schedule(rng, theory))
    story = rng.choice(stories)
    leaf = sorted(story.leaf)
    if len(leaf) < 2:
        return None
    cause, effect = rng.sample(leaf, 2)
    return Context(theory, story, Literal(cause, True), Literal(effect, True))


def random_diagram(rng: random.Random, max_nodes: int = 6) -> NeuronDiagram:
    count = rng.randint(1, max_nodes)
    nodes: list[Neuron] = []
    for i in range(count):
        node_id = f"N{i}"
        if i == 0 or rng.random() < 0.35:
            nodes.append(Neuron(node_id, True, rng.choice([Fraction(1, 2), Fraction(1, 3), Fraction(3, 4)])))
            continue
        earlier = [n.id for n in nodes]
        stim = rng.sample(earlier, rng.randint(1, min(3, len(earlier))))
        rest = [e for e in earlier if e not in stim]
        inhib = rng.sample(rest, rng.randint(0, min(1, len(rest)))) if rest and rng.random() < 0.5 else []
        nodes.append(Neuron(node_id, False, None, tuple(stim), tuple(inhib)))
    stub = NeuronDiagram.__new__(NeuronDiagram)
    object.__setattr__(stub, "nodes", tuple(nodes))
    exo = {n.id: rng.random() < 0.7 for n in nodes if n.exogenous}
    values = evaluate_diagram(stub, exo)
    return NeuronDiagram(tuple(nodes), frozenset(i for i, v in values.items() if v))


def early_preemption_diagrams() -> dict[str, NeuronDiagram]:
    """Early preemption (a) and its variant (b) where A does not fire."""
    half = Fraction(1, 2)
    nodes = (
        Neuron("A", True, half),
        Neuron("C", True, half),
        Neuron("B", False, None, ("A",), ("C",)),
        Neuron("D", False, None, ("C",)),
        Neuron("E", False, None, ("B", "D")),
    )
    return {
        "a": NeuronDiagram(nodes, frozenset({"A", "C", "D", "E"})),
        "b": NeuronDiagram(nodes, frozenset({"C", "D", "E"})),
    }


@dataclass(frozen=True)
class Discrepancy:
    check: str
    detail: str


def _fired_pairs(diagram: NeuronDiagram):
    fired = [n.id for n in diagram.nodes if n.id in diagram.fired]
    for c in fired:
        for e in fired:
            yield c, e


def check_hall_translation(diagram: NeuronDiagram) -> list[Discrepancy]:
    """Diagram-level Hall verdict against the reduction verdict on the translation."""
    theory, story = translate(diagram)
    out = []
    for c, e in _fired_pairs(diagram):
        context = Context(theory, story, Literal(Atom(c)), Literal(Atom(e)))
        left = hall_cause_diagram(diagram, c, e)
        right = reduction_verdict(context)[0]
        if left != right:
            out.append(Discrepancy("hall-translation", f"{c}->{e}: diagram {left}, translation {right}"))
    return out


def check_production(diagram: NeuronDiagram) -> list[Discrepancy]:
    """Firing-path production against a positive production score."""
    theory, story = translate(diagram)
    out = []
    for c, e in _fired_pairs(diagram):
        context = Context(theory, story, Literal(Atom(c)), Literal(Atom(e)))
        left = producer_path(diagram, c, e)
        right = causal_score("production", context).score > 0
        if left != right:
            out.append(Discrepancy("production", f"{c}->{e}: path {left}, score {right}"))
    return out


def nec_score(context: Context) -> Fraction:
    """Counterfactual probability with exactly the necessary laws pinned."""
    from .transform import counterfactual_intervention, determinize

    pinned = determinize(context.theory, context.story, necessary_laws(context))
    return semantics.marginal(counterfactual_intervention(pinned, context.cause), [~context.effect])


def check_reduction_vs_necessity(context: Context) -> list[Discrepancy]:
    """Reduction verdict implies a positive necessity score; on simple stories the converse too."""
    verdict, _ = reduction_verdict(context)
    score = nec_score(context)
    hall = causal_score("hall07", context).score
    simple = is_simple(context)
    label = f"{context.story} C={context.cause} E={context.effect}"
    out = []
    if verdict and score == 0:
        out.append(Discrepancy("forward", f"{label}: reduction verdict true but necessity score 0"))
    if simple and (score > 0) != verdict:
        out.append(Discrepancy("equivalence", f"{label}: simple story, verdict {verdict}, score {score}"))
    if (hall > 0) != (score > 0):
        out.append(Discrepancy("hall07", f"{label}: hall07 score {hall} vs necessity score {score}"))
    return out


def check_sibling_necessity(context: Context) -> list[Discrepancy]:
    """On simple stories the sibling test decides necessity of non-deterministic laws."""
    if not is_simple(context):
        return []
    nec = necessary_laws(context)
    out = []
    for r in sorted(context.story.laws):
        if context.theory.law(r).is_deterministic:
            continue
        if sibling_necessary(context, r) != (r in nec):
            out.append(Discrepancy("sibling", f"{context.story} C={context.cause} E={context.effect}: law {r}"))
    return out


def check_order_invariance(rng: random.Random, theory: CPTheory) -> list[Discrepancy]:
    canonical = semantics.distribution(theory)
    reverse = semantics.distribution(theory, sorted(theory.ids, reverse=True))
    shuffled = semantics.distribution(theory, random_schedule(rng, theory))
    out = []
    if sum(canonical.values()) != 1:
        out.append(Discrepancy("normalization", str(theory)))
    if not canonical == reverse == shuffled:
        out.append(Discrepancy("order", str(theory)))
    return out


@dataclass
class Corpus:
    theories: list[CPTheory]
    contexts: list[Context]
    diagrams: list[NeuronDiagram]


def build_corpus(seed: int = 0, n_theories: int = 200, n_diagrams: int = 200) -> Corpus:
    rng = random.Random(seed)
    theories, contexts = [], []
    while len(contexts) < n_theories:
        theory = random_theory(rng)
        context = random_context(rng, theory)
        if context is None:
            continue
        theories.append(theory)
        contexts.append(context)
    diagrams = list(early_preemption_diagrams().values()) + [random_diagram(rng) for _ in range(n_diagrams)]
    return Corpus(theories, contexts, diagrams)


def run_battery(corpus: Corpus, seed: int = 0) -> dict[str, list[Discrepancy]]:
    rng = random.Random(seed)
    results: dict[str, list[Discrepancy]] = {
        "hall-translation": [],
        "reduction-vs-necessity": [],
        "sibling-necessity": [],
        "production": [],
        "order-invariance": [],
    }
    for diagram in corpus.diagrams:
        results["hall-translation"] += check_hall_translation(diagram)
        results["production"] += check_production(diagram)
    for context in corpus.contexts:
        results["reduction-vs-necessity"] += check_reduction_vs_necessity(context)
        results["sibling-necessity"] += check_sibling_necessity(context)
    for theory in corpus.theories:
        results["order-invariance"] += check_order_invariance(rng, theory)
    return results
