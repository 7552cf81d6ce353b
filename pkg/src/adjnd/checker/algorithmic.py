"""Syntax-directed checker that computes the hypotheses each term uses.

``check(gamma, e, A)`` returns the elaborated term together with the used
context Ξ: plain entries are definitely used, provisional ones may or may not
be.  Gamma lists every variable in scope regardless of mode.  The elaborated
term carries the modes of shifts and matches plus the types of elimination
heads, which the machine and its state typing rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import ctxops
from ..errors import (ArityMismatch, IndependenceViolation, MergeUndefined,
                      NotSynthesizable, TypeCheckError, TypeMismatch,
                      UnknownDefinition, UnknownLabel, UnknownVariable)
from ..modes import ModeTheory
from ..syntax import (Annot, App, Call, Context, Down, DownArm, DownI, Expr,
                      Force, Hyp, Inj, InjArms, Lam, Lolli, Match, One, Omega,
                      Pair, PairArm, Plus, Proj, Record, Signature, Susp,
                      Tensor, Type, Unit, UnitArm, Up, Var, With, prime)
from .typeeq import type_equal


@dataclass(frozen=True)
class CheckOutcome:
    elaborated: Expr
    used: Context


class AlgorithmicChecker:
    def __init__(self, t: ModeTheory, sig: Signature, remove_literal: bool = False,
                 provisional_contraction: bool = False):
        self.t = t
        self.sig = sig
        self.remove_literal = remove_literal
        self.provisional_contraction = provisional_contraction

    # -- helpers

    def _merge(self, a: Context, b: Context, rule: str) -> Context:
        out = ctxops.merge(self.t, a, b, self.provisional_contraction)
        if out is None:
            bad = next(h.name for h in a if h.name in b and not self.t.C(h.mode))
            raise MergeUndefined(bad, rule)
        return out

    def _remove(self, xi: Context, x: str, a: Type, rule: str) -> Context:
        return ctxops.remove(self.t, xi, x, a, literal=self.remove_literal, rule=rule)

    def _bind(self, gamma: Context, x: str) -> str:
        return x if x not in gamma else prime(x, set(gamma.names()))

    def _geq(self, m: str, r: str, rule: str) -> None:
        if not self.t.geq(m, r):
            raise TypeCheckError(f"scrutinee mode {m} is not >= result mode {r}", rule)

    # -- checking

    def check(self, gamma: Context, e: Expr, a: Type) -> CheckOutcome:
        a_head = self.sig.unfold(a)
        m = a.mode
        if isinstance(e, Lam):
            if not isinstance(a_head, Lolli):
                raise TypeMismatch(f"lambda checked against {a}", "-oI")
            x = self._bind(gamma, e.var)
            body = e.body if x == e.var else _rename(e.body, e.var, x)
            r = self.check(gamma.extend(x, a_head.dom), body, a_head.cod)
            return CheckOutcome(Lam(x, r.elaborated), self._remove(r.used, x, a_head.dom, "-oI"))
        if isinstance(e, Record):
            if not isinstance(a_head, With):
                raise TypeMismatch(f"record checked against {a}", "&I")
            labels = [l for l, _ in e.fields]
            if set(labels) != set(l for l, _ in a_head.fields) or len(labels) != len(set(labels)):
                raise TypeMismatch(f"record labels {labels} do not match {a}", "&I")
            if not e.fields:
                return CheckOutcome(e, ctxops.provisional_restrict(self.t, gamma, m))
            fields, used = [], None
            for l, b in e.fields:
                r = self.check(gamma, b, a_head.field(l))
                fields.append((l, r.elaborated))
                used = r.used if used is None else ctxops.join(self.t, used, r.used, "&I")
            return CheckOutcome(Record(tuple(fields)), used)
        if isinstance(e, Susp):
            if not isinstance(a_head, Up):
                raise TypeMismatch(f"susp checked against {a}", "^I")
            r = self.check(gamma, e.body, a_head.body)
            used = ctxops.restrict(self.t, r.used, a_head.hi, "^I")
            return CheckOutcome(Susp(r.elaborated, a_head.hi, a_head.lo), used)
        if isinstance(e, Pair):
            if not isinstance(a_head, Tensor):
                raise TypeMismatch(f"pair checked against {a}", "*I")
            r1 = self.check(gamma, e.left, a_head.left)
            r2 = self.check(gamma, e.right, a_head.right)
            return CheckOutcome(Pair(r1.elaborated, r2.elaborated), self._merge(r1.used, r2.used, "*I"))
        if isinstance(e, Unit):
            if not isinstance(a_head, One):
                raise TypeMismatch(f"() checked against {a}", "1I")
            return CheckOutcome(e, Context())
        if isinstance(e, Inj):
            if not isinstance(a_head, Plus):
                raise TypeMismatch(f"injection checked against {a}", "+I")
            b = a_head.field(e.label)
            if b is None:
                raise UnknownLabel(f"label {e.label} not in {a}", "+I")
            r = self.check(gamma, e.body, b)
            return CheckOutcome(Inj(e.label, r.elaborated), r.used)
        if isinstance(e, DownI):
            if not isinstance(a_head, Down):
                raise TypeMismatch(f"down checked against {a}", "vI")
            r = self.check(gamma, e.body, a_head.body)
            return CheckOutcome(DownI(r.elaborated, a_head.hi, a_head.lo), r.used)
        if isinstance(e, Match):
            return self._match(gamma, e, a)
        if isinstance(e, Omega):
            raise TypeCheckError("the erasure placeholder has no typing", "omega")
        # synthesizable in checking position
        b, used, el = self.synth(gamma, e)
        if not type_equal(self.sig, b, a):
            raise TypeMismatch(f"expected {a}, synthesized {b}", "=>/<=")
        return CheckOutcome(el, used)

    def _match(self, gamma: Context, e: Match, c: Type) -> CheckOutcome:
        r = c.mode
        s_ty, s_used, s_el = self.synth(gamma, e.subj)
        h = self.sig.unfold(s_ty)
        m = s_ty.mode
        arms = e.arms
        if isinstance(arms, PairArm):
            if not isinstance(h, Tensor):
                raise TypeMismatch(f"pair pattern against {s_ty}", "*E")
            self._geq(m, r, "*E")
            x1 = self._bind(gamma, arms.x1)
            g1 = gamma.extend(x1, h.left)
            x2 = self._bind(g1, arms.x2)
            body = _rename(_rename(arms.body, arms.x1, x1), arms.x2, x2) if (x1, x2) != (arms.x1, arms.x2) else arms.body
            br = self.check(g1.extend(x2, h.right), body, c)
            inner = self._remove(self._remove(br.used, x1, h.left, "*E"), x2, h.right, "*E")
            new_arms = PairArm(x1, x2, br.elaborated)
            used = self._merge(s_used, inner, "*E")
        elif isinstance(arms, UnitArm):
            if not isinstance(h, One):
                raise TypeMismatch(f"unit pattern against {s_ty}", "1E")
            self._geq(m, r, "1E")
            br = self.check(gamma, arms.body, c)
            new_arms = UnitArm(br.elaborated)
            used = self._merge(s_used, br.used, "1E")
        elif isinstance(arms, InjArms):
            if not isinstance(h, Plus):
                raise TypeMismatch(f"injection patterns against {s_ty}", "+E")
            labels = [l for l, _, _ in arms.branches]
            for l in labels:
                if h.field(l) is None:
                    raise UnknownLabel(f"label {l} not in {s_ty}", "+E")
            if set(labels) != set(l for l, _ in h.fields) or len(labels) != len(set(labels)):
                raise TypeMismatch(f"branches {labels} do not cover {s_ty}", "+E")
            self._geq(m, r, "+E")
            if not arms.branches:
                new_arms = arms
                used = self._merge(s_used, ctxops.provisional_restrict(self.t, gamma, r), "+E0")
            else:
                branches, joined = [], None
                for l, x, b in arms.branches:
                    ty = h.field(l)
                    x2 = self._bind(gamma, x)
                    br = self.check(gamma.extend(x2, ty), b if x2 == x else _rename(b, x, x2), c)
                    part = self._remove(br.used, x2, ty, "+E")
                    branches.append((l, x2, br.elaborated))
                    joined = part if joined is None else ctxops.join(self.t, joined, part, "+E")
                new_arms = InjArms(tuple(branches))
                used = self._merge(s_used, joined, "+E")
        else:
            if not isinstance(h, Down):
                raise TypeMismatch(f"down pattern against {s_ty}", "vE")
            self._geq(m, r, "vE")
            x = self._bind(gamma, arms.var)
            br = self.check(gamma.extend(x, h.body), arms.body if x == arms.var else _rename(arms.body, arms.var, x), c)
            new_arms = DownArm(x, br.elaborated)
            used = self._merge(s_used, self._remove(br.used, x, h.body, "vE"), "vE")
        return CheckOutcome(Match(s_el, new_arms, m, r, s_ty), used)

    # -- synthesis

    def synth(self, gamma: Context, e: Expr) -> tuple[Type, Context, Expr]:
        if isinstance(e, Var):
            h = gamma.get(e.name)
            if h is None:
                raise UnknownVariable(f"unknown variable {e.name}", "hyp")
            return h.type, Context([Hyp(e.name, h.type)]), e
        if isinstance(e, Annot):
            r = self.check(gamma, e.body, e.type)
            return e.type, r.used, Annot(r.elaborated, e.type)
        if isinstance(e, App):
            f_ty, f_used, f_el = self.synth(gamma, e.fn)
            h = self.sig.unfold(f_ty)
            if not isinstance(h, Lolli):
                raise TypeMismatch(f"applying a term of type {f_ty}", "-oE")
            r = self.check(gamma, e.arg, h.dom)
            return h.cod, self._merge(f_used, r.used, "-oE"), App(f_el, r.elaborated, f_ty)
        if isinstance(e, Proj):
            s_ty, used, el = self.synth(gamma, e.subj)
            h = self.sig.unfold(s_ty)
            if not isinstance(h, With):
                raise TypeMismatch(f"projecting from a term of type {s_ty}", "&E")
            b = h.field(e.label)
            if b is None:
                raise UnknownLabel(f"label {e.label} not in {s_ty}", "&E")
            return b, used, Proj(el, e.label, s_ty)
        if isinstance(e, Force):
            s_ty, used, el = self.synth(gamma, e.subj)
            h = self.sig.unfold(s_ty)
            if not isinstance(h, Up):
                raise TypeMismatch(f"forcing a term of type {s_ty}", "^E")
            return h.body, used, Force(el, h.hi, h.lo, s_ty)
        if isinstance(e, Call):
            d = self.sig.terms.get(e.name)
            if d is None:
                raise UnknownDefinition(f"unknown definition {e.name}", "call")
            used, theta = self._substitution(gamma, e.subst, d.ctx)
            return d.type, used, Call(e.name, theta)
        raise NotSynthesizable(f"{type(e).__name__} cannot synthesize a type; add an annotation", "synth")

    def _substitution(self, gamma: Context, theta, delta: Context):
        dom = [x for x, _ in theta]
        if sorted(dom) != sorted(delta.names()) or len(dom) != len(set(dom)):
            raise ArityMismatch(f"substitution for {dom} against context {delta.names()}", "call")
        used = Context()
        out = []
        for x, s in theta:
            target = delta[x].type
            r = self.check(gamma, s, target)
            for h in r.used:
                if not self.t.geq(h.mode, target.mode):
                    raise IndependenceViolation(h.name, h.mode, target.mode, "call")
            used = self._merge(used, r.used, "call")
            out.append((x, r.elaborated))
        return used, tuple(out)

    def check_substitution(self, gamma: Context, theta, delta: Context) -> Context:
        return self._substitution(gamma, theta, delta)[0]


def _rename(e: Expr, old: str, new: str) -> Expr:
    from ..syntax import rename_var
    return rename_var(e, old, new)


def check_algorithmic(t: ModeTheory, sig: Signature, gamma: Context, e: Expr, a: Type, **opts) -> CheckOutcome:
    return AlgorithmicChecker(t, sig, **opts).check(gamma, e, a)


def synth_algorithmic(t: ModeTheory, sig: Signature, gamma: Context, s: Expr, **opts) -> tuple[Type, Context]:
    ty, used, _ = AlgorithmicChecker(t, sig, **opts).synth(gamma, s)
    return ty, used


def check_substitution(t: ModeTheory, sig: Signature, gamma: Context, theta, delta: Context, **opts) -> Context:
    return AlgorithmicChecker(t, sig, **opts).check_substitution(gamma, theta, delta)


def accepts(t: ModeTheory, sig: Signature, delta: Context, e: Expr, a: Type, **opts) -> CheckOutcome | None:
    """Decide ``delta |- e <= a`` through the algorithm: it must succeed with
    ``delta`` as the available context and every unused hypothesis must be
    weakenable."""
    try:
        r = check_algorithmic(t, sig, delta, e, a, **opts)
    except TypeCheckError:
        return None
    return r if ctxops.covers(t, delta, r.used) else None
