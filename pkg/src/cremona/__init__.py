"""Exact decision procedures for symplectic blowups of the projective plane."""
from .formvec import (
    ConeStatus,
    FormVector,
    MoveRecord,
    cone_status,
    cremona,
    defect,
    is_reduced,
    lorentz_product,
    standard_move,
)
from .reduction import Inconclusive, MoveTrace, ReductionResult, chamber_probe, reduce, reflect
from .homology import HomologyClass, apply_move, area, chern, intersection, is_exceptional, transport
from .exceptional import EnumerationResult, demazure_classes, enumerate_exceptional

__version__ = "0.1.0"
