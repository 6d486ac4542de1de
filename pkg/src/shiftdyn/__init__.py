"""Dynamics of weighted generalized backward shifts on coechelon sequence spaces.

Decide continuity, transitivity, hypercyclicity, mixing, chaos, and a
sufficient condition for topological ergodicity by reducing each property to
conditions on transported weight sequences, and emit replayable witnesses.
"""

from .classifier import (
    InternalInconsistencyError,
    Report,
    ScanBounds,
    SpaceSpec,
    Structure,
    classify,
    lattice_violations,
    propagate,
)
from .conjugacy import (
    Conjugation,
    WeightSequence,
    apply_generalized_shift,
    conjugate_family,
    plain_backward_shift,
    scaled,
    sqrt_index_weights,
    unit_weights,
)
from .gallery import ALIASES, GALLERY, build, run_expectations
from .symbols import BUILTIN_SYMBOLS, Symbol, snake_symbol, successor_symbol, verify_symbol
from .vectors import TruncatedVector
from .verdicts import Status, Verdict
from .weights import Exponent, WeightFamily
from .witnesses import (
    WitnessRecord,
    hypercyclic_candidate,
    periodic_approximant,
    replay,
    return_set,
    transitivity_witness,
)

__version__ = "0.1.0"

__all__ = [
    "ALIASES",
    "BUILTIN_SYMBOLS",
    "Conjugation",
    "Exponent",
    "GALLERY",
    "InternalInconsistencyError",
    "Report",
    "ScanBounds",
    "SpaceSpec",
    "Status",
    "Structure",
    "Symbol",
    "TruncatedVector",
    "Verdict",
    "WeightFamily",
    "WeightSequence",
    "WitnessRecord",
    "apply_generalized_shift",
    "build",
    "classify",
    "conjugate_family",
    "hypercyclic_candidate",
    "lattice_violations",
    "periodic_approximant",
    "plain_backward_shift",
    "propagate",
    "replay",
    "return_set",
    "run_expectations",
    "scaled",
    "snake_symbol",
    "sqrt_index_weights",
    "successor_symbol",
    "transitivity_witness",
    "unit_weights",
    "verify_symbol",
]
