"""Concept-based interpretable learning on formal contexts."""

from .attribution import (
    ShapleyVector,
    estimate_shapley_sampling,
    shapley_jsm,
    shapley_stability,
)
from .context import (
    Concept,
    FormalContext,
    close_attributes,
    derive_attributes,
    derive_objects,
)
from .errors import ConceptShapError, ContractError, ResourceLimitError, ValidationError
from .jsm import ClassificationContext, HypothesisSet, Label, Verdict, classify, classify_all, learn_hypotheses
from .lattice import clarify, enumerate_concepts, generators, minimal_generators, reduce
from .stability import rank_concepts_by_stability, stability_extensional, stability_level

__version__ = "0.1.0"
