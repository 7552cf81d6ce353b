"""Normalization to verifications by a round trip through the sequent calculus."""

from __future__ import annotations

from dataclasses import dataclass

from ..checker.declarative import DeclarativeChecker
from ..checker.ndtree import NDNode
from ..errors import BudgetExceeded, InvalidInput
from ..modes import ModeTheory
from ..syntax import (Annot, Call, Context, Expr, Signature, Type, free_vars,
                      map_children, rename_apart, substitute)
from .cutelim import DEFAULT_BUDGET, DEFAULT_MAX_UNFOLD, CutEliminator
from .derivation import SeqNode
from .identity import expand_identities
from .translate import nd_to_seq, seq_to_nd

MAX_INLINE_DEPTH = 32


def inline_calls(sig: Signature, e: Expr, depth: int = MAX_INLINE_DEPTH) -> Expr:
    """Replace every call ``f[x => e_x]`` by ``(e : A)``, where ``e`` is
    ``f``'s body with each ``x`` bound to ``(e_x : A_x)`` and ``A`` its type.  Definitions that keep calling themselves run
    out of ``depth`` and raise BudgetExceeded."""
    def go(e: Expr, depth: int) -> Expr:
        if isinstance(e, Call):
            if depth <= 0:
                raise BudgetExceeded(f"inlining {e.name} exceeded depth {MAX_INLINE_DEPTH}")
            d = sig.terms.get(e.name)
            if d is None:
                raise InvalidInput(f"unknown definition {e.name}")
            args = {x: Annot(go(b, depth), d.ctx[x].type) for x, b in e.subst}
            body = rename_apart(d.body, set().union(*(free_vars(a) for a in args.values())) if args else ())
            return Annot(go(substitute(body, args), depth - 1), d.type)
        return map_children(e, lambda c: go(c, depth))
    return go(e, depth)


@dataclass
class NormalizeResult:
    expr: Expr
    derivation: NDNode
    sequent: SeqNode
    cut_free: SeqNode
    long: SeqNode
    cut_steps: int


def normalize_full(t: ModeTheory, sig: Signature, nd: NDNode, budget: int = DEFAULT_BUDGET,
                   max_unfold: int = DEFAULT_MAX_UNFOLD) -> NormalizeResult:
    if any(n.rule == "call" for n in nd.walk()):
        e = inline_calls(sig, nd.expr)
        nd2 = DeclarativeChecker(t, sig).check(nd.ctx, rename_apart(e, nd.ctx.names()), nd.type)
        if nd2 is None:
            raise InvalidInput("inlined term no longer checks")
        nd = nd2
    seq = nd_to_seq(t, sig, nd)
    ce = CutEliminator(t, sig, budget, max_unfold)
    cut_free = ce.run(seq)
    long = expand_identities(t, sig, cut_free, max_unfold)
    e, out = seq_to_nd(t, sig, long)
    return NormalizeResult(e, out, seq, cut_free, long, ce.steps)


def normalize(t: ModeTheory, sig: Signature, nd: NDNode, budget: int = DEFAULT_BUDGET,
              max_unfold: int = DEFAULT_MAX_UNFOLD) -> tuple[Expr, NDNode]:
    """A verification of the judgment ``nd`` derives.  Not canonical: nothing
    is claimed about which verification comes out."""
    r = normalize_full(t, sig, nd, budget, max_unfold)
    return r.expr, r.derivation


def normalize_term(t: ModeTheory, sig: Signature, delta: Context, e: Expr, a: Type, **kw) -> tuple[Expr, NDNode]:
    nd = DeclarativeChecker(t, sig).check(delta, rename_apart(e, delta.names()), a)
    if nd is None:
        raise InvalidInput("term does not check")
    return normalize(t, sig, nd, **kw)
