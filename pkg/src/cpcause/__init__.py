"""CP-logic interpreter with counterfactual and actual-causation queries."""

from .causation import DEFINITIONS, CausalVerdict, causal_score, compare_all, counterfactual
from .kernel import Atom, BudgetExceeded, CPLaw, CPLogicError, CPTheory, Disjunct, Literal, TheoryError
from .neuron import NeuronDiagram, load_diagram, translate
from .parser import ParseError, format_story, format_theory, parse_story, parse_theory
from .reduction import ce_reductions, is_simple, necessary_laws, reduction_verdict
from .semantics import build_tree, distribution, enumerate_branches, marginal
from .story import Context, Story

__all__ = [
    "Atom", "BudgetExceeded", "CPLaw", "CPLogicError", "CPTheory", "CausalVerdict", "Context",
    "DEFINITIONS", "Disjunct", "Literal", "NeuronDiagram", "ParseError", "Story", "TheoryError",
    "build_tree", "causal_score", "ce_reductions", "compare_all", "counterfactual", "distribution",
    "enumerate_branches", "format_story", "format_theory", "is_simple", "load_diagram", "marginal",
    "necessary_laws", "parse_story", "parse_theory", "reduction_verdict", "translate",
]
