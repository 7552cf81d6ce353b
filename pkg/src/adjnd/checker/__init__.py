"""Type checking: equirecursive type equality, the declarative system used as a
reference, and the algorithm that computes used hypotheses."""

from .algorithmic import (AlgorithmicChecker, CheckOutcome, accepts,
                          check_algorithmic, check_substitution,
                          synth_algorithmic)
from .declarative import (DeclarativeChecker, check_declarative,
                          derive_declarative, synth_declarative)
from .ndtree import NDNode
from .typeeq import TypeEqState, type_equal

__all__ = [
    "AlgorithmicChecker", "CheckOutcome", "accepts", "check_algorithmic", "check_substitution",
    "synth_algorithmic", "DeclarativeChecker", "check_declarative", "derive_declarative",
    "synth_declarative", "NDNode", "TypeEqState", "type_equal",
]
