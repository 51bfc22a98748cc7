"""Sensor topology logic: zone models of overlapping sensor ranges, a
first-order logic over them, SCAN's reduction / overlap / estimate steps,
and a branching-time extension for topologies that change."""

from .dynamic import (
    AXIOMS, DynamicModel, SpatialRelation, Verdict, check_state, classify, eval_state,
    transition_allowed, valid_at, validate_axioms, validate_dynamic,
)
from .evaluate import EvaluationError, evaluate, valid
from .geometry import ConvexPolygon, Disk, GeomSensor, Scene, count_targets, extract_topology
from .model import (
    EMPTY_MODEL, ModelError, StaticModel, UnknownSensorError, reduce_by, sense,
    topologically_equivalent, validate,
)
from .parser import ParseError, parse, to_text
from .scan import (
    Estimate, enumerate_irreducibles, estimate, is_possibly_redundant, is_redundant, max_overlap,
    reduce_destructive, reduce_marking,
)
from .syntax import Sort, SortError, desugar, typecheck

__version__ = "0.1.0"

__all__ = [
    "AXIOMS",
    "check_state",
    "classify",
    "ConvexPolygon",
    "count_targets",
    "desugar",
    "Disk",
    "DynamicModel",
    "EMPTY_MODEL",
    "enumerate_irreducibles",
    "Estimate",
    "estimate",
    "eval_state",
    "evaluate",
    "EvaluationError",
    "extract_topology",
    "GeomSensor",
    "is_possibly_redundant",
    "is_redundant",
    "max_overlap",
    "ModelError",
    "parse",
    "ParseError",
    "reduce_by",
    "reduce_destructive",
    "reduce_marking",
    "Scene",
    "sense",
    "Sort",
    "SortError",
    "SpatialRelation",
    "StaticModel",
    "to_text",
    "topologically_equivalent",
    "transition_allowed",
    "typecheck",
    "UnknownSensorError",
    "valid",
    "valid_at",
    "validate",
    "validate_axioms",
    "validate_dynamic",
    "Verdict",
]
