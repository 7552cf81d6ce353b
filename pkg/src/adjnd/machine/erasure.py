"""The erasure experiment: code below the result mode never runs.

Every subterm whose mode is not ``>= r`` is replaced by Ω, the term is run
again, and the two answers are compared after masking the original in the
same way.  Reaching Ω in the erased run would contradict the dead code
theorem, so it is reported rather than raised.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DeadCodeReached, InvalidInput
from ..modes import ModeTheory
from ..syntax import (Annot, App, Call, DownI, Expr, Force, Inj, Lam, Match,
                      Omega, Pair, Proj, Record, Signature, Susp, TermDef,
                      Type, Var, Unit, alpha_eq, is_purely_positive,
                      map_children, rebuild_arms)
from .state import CBV, run
from .values import Value, value_to_expr


class _Eraser:
    def __init__(self, t: ModeTheory, sig: Signature, r: str):
        self.t = t
        self.sig = sig
        self.r = r
        self.count = 0

    def __call__(self, e: Expr, m: str) -> Expr:
        """``e`` has mode ``m``."""
        if isinstance(e, Omega):
            return e
        if not self.t.geq(m, self.r):
            self.count += 1
            return Omega()
        go = self
        if isinstance(e, (Var, Unit)):
            return e
        if isinstance(e, Susp):
            if e.lo is None:
                raise InvalidInput("erasure needs an elaborated term")
            return Susp(go(e.body, e.lo), e.hi, e.lo)
        if isinstance(e, Force):
            if e.hi is None:
                raise InvalidInput("erasure needs an elaborated term")
            return Force(go(e.subj, e.hi), e.hi, e.lo, e.ty)
        if isinstance(e, DownI):
            if e.hi is None:
                raise InvalidInput("erasure needs an elaborated term")
            return DownI(go(e.body, e.hi), e.hi, e.lo)
        if isinstance(e, Match):
            if e.mode is None:
                raise InvalidInput("erasure needs an elaborated term")
            arms = rebuild_arms(e.arms, lambda xs, b: (xs, go(b, m)))
            return Match(go(e.subj, e.mode), arms, e.mode, e.result, e.ty)
        if isinstance(e, Call):
            d = self.sig.terms.get(e.name)
            if d is None:
                raise InvalidInput(f"unknown definition {e.name}")
            return Call(e.name, tuple((x, go(b, d.ctx[x].mode)) for x, b in e.subst))
        if isinstance(e, (Lam, App, Record, Proj, Pair, Inj, Annot)):
            return map_children(e, lambda c: go(c, m))
        raise InvalidInput(f"cannot erase {type(e).__name__}")


def erase(t: ModeTheory, sig: Signature, e: Expr, m: str, r: str) -> tuple[Expr, int]:
    """Replace the subterms of ``e`` (of mode ``m``) whose mode is not ``>= r``."""
    er = _Eraser(t, sig, r)
    return er(e, m), er.count


def erase_signature(t: ModeTheory, sig: Signature, r: str) -> tuple[Signature, int]:
    er = _Eraser(t, sig, r)
    defs = [TermDef(d.name, d.ctx, d.type, er(d.body, d.mode)) for d in sig.terms.values()]
    return sig.with_terms(defs), er.count


@dataclass
class ErasureReport:
    agree: bool
    original: Value
    erased: Value | None
    masked: Expr
    erased_subterms: int
    steps: int
    erased_steps: int | None
    error: str | None = None

    def lines(self) -> list[str]:
        from ..frontend import print_expr
        out = [f"erasure.agree={'yes' if self.agree else 'no'}",
               f"erasure.erased_subterms={self.erased_subterms}",
               f"erasure.original={print_expr(value_to_expr(self.original))}",
               f"erasure.masked={print_expr(self.masked)}",
               f"erasure.steps={self.steps}"]
        if self.erased is not None:
            out.append(f"erasure.erased={print_expr(value_to_expr(self.erased))}")
            out.append(f"erasure.erased_steps={self.erased_steps}")
        if self.error is not None:
            out.append(f"erasure.error={self.error}")
        return out


def erasure_harness(t: ModeTheory, sig: Signature, e: Expr, a: Type, r: str | None = None,
                    strategy: str = CBV, budget: int | None = None) -> ErasureReport:
    """Run ``e : A_r+`` and its erasure at ``r`` and compare the answers."""
    from ..checker.algorithmic import check_algorithmic
    from ..syntax import Context
    from ..wellformed import wf_signature
    r = a.mode if r is None else r
    t.check(r)
    if not t.geq(a.mode, r):
        raise InvalidInput(f"the result mode {a.mode} is not >= the target mode {r}")
    sig = wf_signature(t, sig)
    if not is_purely_positive(a, sig):
        raise InvalidInput(f"erasure compares observable answers; {a} is not purely positive")
    el = check_algorithmic(t, sig, Context(), e, a).elaborated
    first = run(t, sig, el, a, strategy, budget, check=False)
    e2, n1 = erase(t, sig, el, a.mode, r)
    sig2, n2 = erase_signature(t, sig, r)
    masked, _ = erase(t, sig, value_to_expr(first.value), a.mode, r)
    try:
        second = run(t, sig2, e2, a, strategy, budget, check=False)
    except DeadCodeReached as exc:
        return ErasureReport(False, first.value, None, masked, n1 + n2, first.steps, None, f"DeadCodeReached: {exc}")
    agree = alpha_eq(value_to_expr(second.value), masked)
    return ErasureReport(agree, first.value, second.value, masked, n1 + n2, first.steps, second.steps)
