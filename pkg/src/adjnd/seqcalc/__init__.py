"""Sequent calculus: derivations, cut and identity elimination, translations
to and from natural deduction, and normalization to verifications."""

from .cutelim import eliminate_cuts, eliminate_cuts_counted, unfold_depth
from .derivation import (SeqNode, conclude, count_rules, format_seq,
                         has_atomic_ids, is_cut_free, rename, subformula_violations,
                         subformulas, validate_seq, weaken)
from .identity import expand_identities, identity
from .nd import is_verification, validate_nd
from .normalize import inline_calls, normalize, normalize_full, normalize_term
from .translate import nd_to_seq, seq_to_nd, substitution_split

__all__ = [
    "SeqNode", "conclude", "count_rules", "format_seq", "has_atomic_ids", "is_cut_free",
    "rename", "subformula_violations", "subformulas", "validate_seq", "weaken",
    "eliminate_cuts", "eliminate_cuts_counted", "unfold_depth", "expand_identities",
    "identity", "is_verification", "validate_nd", "inline_calls", "normalize",
    "normalize_full", "normalize_term", "nd_to_seq", "seq_to_nd", "substitution_split",
]
