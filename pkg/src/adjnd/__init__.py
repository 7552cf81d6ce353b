"""Adjoint natural deduction as a small substructural functional language.

Submodules: ``modes`` (mode theories), ``syntax`` (types, terms, contexts),
``frontend`` (parser and printer), ``ctxops`` (the context algebra),
``checker`` (declarative and algorithmic typing), ``seqcalc`` (sequent
calculus, cut elimination, normalization), ``machine`` (the abstract machine
and its monitors) and ``cli``.
"""

__version__ = "0.1.0"
