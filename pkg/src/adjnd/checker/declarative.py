"""The declarative bidirectional system as an exhaustive derivation search.

This is the reference the algorithmic checker is tested against, so it is
written to be obviously faithful rather than fast.  Every context split
``Delta = Delta1 ; Delta2`` is searched, with one sound pruning: a
hypothesis free in a subterm must be available to that subterm, since rules
only ever consume variables through ``hyp``.  Hypotheses free on neither side
are tried on each side.  Where a rule sets aside a weakenable part
(``hyp``, ``force``, ``down``, ``()``), the non-weakenable remainder is forced
into the premise and everything else is left with the weakenable part; a
weakenable hypothesis that is not free can always be dropped, so nothing is
lost.

Results are memoized per (context, expression, type) and every search returns
an explicit derivation.
"""

from __future__ import annotations

from typing import Iterator

from ..modes import ModeTheory, ctx_geq
from ..syntax import (Annot, App, Call, Context, Down, DownArm, DownI, Expr,
                      Force, Hyp, Inj, InjArms, Lam, Lolli, Match, One, Pair,
                      PairArm, Plus, Proj, Record, Signature, Susp, Tensor,
                      Type, Unit, UnitArm, Up, Var, With, arm_bodies, free_vars,
                      is_synthesizable, prime, rename_apart, rename_var)
from .ndtree import CHECK, SYNTH, NDNode
from .typeeq import type_equal


class DeclarativeChecker:
    def __init__(self, t: ModeTheory, sig: Signature):
        self.t = t
        self.sig = sig
        self._memo: dict = {}

    # -- helpers

    def _weakenable(self, ctx: Context) -> bool:
        return all(self.t.W(h.mode) for h in ctx)

    def _splits(self, delta: Context, f1: frozenset, f2: frozenset) -> Iterator[tuple[Context, Context]]:
        left: list[Hyp] = []
        right: list[Hyp] = []
        loose: list[Hyp] = []
        for h in delta:
            a, b = h.name in f1, h.name in f2
            if a and b:
                if not self.t.C(h.mode):
                    return
                left.append(h)
                right.append(h)
            elif a:
                left.append(h)
            elif b:
                right.append(h)
            else:
                loose.append(h)
        for mask in range(1 << len(loose)):
            l = left + [h for i, h in enumerate(loose) if mask >> i & 1]
            r = right + [h for i, h in enumerate(loose) if not mask >> i & 1]
            yield Context(l), Context(r)

    def _core(self, delta: Context, fv: frozenset) -> Context:
        """Smallest premise context for rules with a weakenable side part."""
        return Context(h for h in delta if h.name in fv or not self.t.W(h.mode))

    def _fresh(self, delta: Context, x: str, body: Expr) -> tuple[str, Expr]:
        if x not in delta:
            return x, body
        y = prime(x, set(delta.names()) | set(free_vars(body)))
        return y, rename_var(body, x, y)

    # -- checking

    def check(self, delta: Context, e: Expr, a: Type) -> NDNode | None:
        key = (CHECK, delta, e, a)
        if key in self._memo:
            return self._memo[key]
        self._memo[key] = None  # guards against cycles through recursive calls
        out = None
        if ctx_geq(self.t, delta, a.mode):
            out = self._check(delta, e, a)
        self._memo[key] = out
        return out

    def _check(self, delta: Context, e: Expr, a: Type) -> NDNode | None:
        h = self.sig.unfold(a)

        def node(rule, expr, *prems):
            return NDNode(rule, delta, expr, a, CHECK, tuple(prems))

        if is_synthesizable(e):
            d = self.synth(delta, e)
            if d is not None and type_equal(self.sig, d.type, a):
                return node("=>/<=", e, d)
            return None
        if isinstance(e, Lam):
            if not isinstance(h, Lolli):
                return None
            x, body = self._fresh(delta, e.var, e.body)
            d = self.check(delta.extend(x, h.dom), body, h.cod)
            return node("-oI", Lam(x, body), d) if d else None
        if isinstance(e, Record):
            if not isinstance(h, With) or set(l for l, _ in e.fields) != set(l for l, _ in h.fields):
                return None
            prems = []
            for l, b in e.fields:
                d = self.check(delta, b, h.field(l))
                if d is None:
                    return None
                prems.append(d)
            return node("&I", e, *prems)
        if isinstance(e, Susp):
            if not isinstance(h, Up):
                return None
            d = self.check(delta, e.body, h.body)
            return node("^I", e, d) if d else None
        if isinstance(e, Pair):
            if not isinstance(h, Tensor):
                return None
            for d1, d2 in self._splits(delta, free_vars(e.left), free_vars(e.right)):
                p1 = self.check(d1, e.left, h.left)
                if p1 is None:
                    continue
                p2 = self.check(d2, e.right, h.right)
                if p2 is not None:
                    return node("*I", e, p1, p2)
            return None
        if isinstance(e, Unit):
            if isinstance(h, One) and self._weakenable(delta):
                return node("1I", e)
            return None
        if isinstance(e, Inj):
            if not isinstance(h, Plus) or h.field(e.label) is None:
                return None
            d = self.check(delta, e.body, h.field(e.label))
            return node("+I", e, d) if d else None
        if isinstance(e, DownI):
            if not isinstance(h, Down):
                return None
            core = self._core(delta, free_vars(e.body))
            if not ctx_geq(self.t, core, h.hi):
                return None
            d = self.check(core, e.body, h.body)
            return node("vI", e, d) if d else None
        if isinstance(e, Match):
            return self._match(delta, e, a)
        return None

    def _match(self, delta: Context, e: Match, c: Type) -> NDNode | None:
        r = c.mode
        body_fv = frozenset()
        for xs, b in arm_bodies(e.arms):
            body_fv |= free_vars(b) - set(xs)
        for d1, d2 in self._splits(delta, free_vars(e.subj), body_fv):
            ds = self.synth(d1, e.subj)
            if ds is None:
                continue
            m = ds.type.mode
            if not (ctx_geq(self.t, d1, m) and self.t.geq(m, r)):
                continue
            h = self.sig.unfold(ds.type)
            res = self._arms(d2, e, h, c)
            if res is not None:
                rule, arms, prems = res
                return NDNode(rule, delta, Match(e.subj, arms), c, CHECK, (ds,) + prems)
        return None

    def _arms(self, d2: Context, e: Match, h: Type, c: Type):
        arms = e.arms
        if isinstance(arms, PairArm):
            if not isinstance(h, Tensor):
                return None
            x1, b = self._fresh(d2, arms.x1, arms.body)
            x2, b = self._fresh(d2.extend(x1, h.left), arms.x2, b)
            d = self.check(d2.extend(x1, h.left).extend(x2, h.right), b, c)
            return ("*E", PairArm(x1, x2, b), (d,)) if d else None
        if isinstance(arms, UnitArm):
            if not isinstance(h, One):
                return None
            d = self.check(d2, arms.body, c)
            return ("1E", arms, (d,)) if d else None
        if isinstance(arms, InjArms):
            if not isinstance(h, Plus) or set(l for l, _, _ in arms.branches) != set(l for l, _ in h.fields):
                return None
            prems, branches = [], []
            for l, x, b in arms.branches:
                ty = h.field(l)
                x2, b2 = self._fresh(d2, x, b)
                d = self.check(d2.extend(x2, ty), b2, c)
                if d is None:
                    return None
                prems.append(d)
                branches.append((l, x2, b2))
            return "+E", InjArms(tuple(branches)), tuple(prems)
        if not isinstance(h, Down):
            return None
        x, b = self._fresh(d2, arms.var, arms.body)
        d = self.check(d2.extend(x, h.body), b, c)
        return ("vE", DownArm(x, b), (d,)) if d else None

    # -- synthesis

    def synth(self, delta: Context, s: Expr) -> NDNode | None:
        key = (SYNTH, delta, s)
        if key in self._memo:
            return self._memo[key]
        self._memo[key] = None
        out = self._synth(delta, s)
        if out is not None and not ctx_geq(self.t, delta, out.type.mode):
            out = None
        self._memo[key] = out
        return out

    def _synth(self, delta: Context, s: Expr) -> NDNode | None:
        def node(rule, ty, *prems):
            return NDNode(rule, delta, s, ty, SYNTH, tuple(prems))

        if isinstance(s, Var):
            h = delta.get(s.name)
            if h is None or not self._weakenable(delta.without(s.name)):
                return None
            return node("hyp", h.type)
        if isinstance(s, Annot):
            d = self.check(delta, s.body, s.type)
            return node("<=/=>", s.type, d) if d else None
        if isinstance(s, App):
            for d1, d2 in self._splits(delta, free_vars(s.fn), free_vars(s.arg)):
                p1 = self.synth(d1, s.fn)
                if p1 is None:
                    continue
                h = self.sig.unfold(p1.type)
                if not isinstance(h, Lolli):
                    return None
                p2 = self.check(d2, s.arg, h.dom)
                if p2 is not None:
                    return node("-oE", h.cod, p1, p2)
            return None
        if isinstance(s, Proj):
            p = self.synth(delta, s.subj)
            if p is None:
                return None
            h = self.sig.unfold(p.type)
            if not isinstance(h, With) or h.field(s.label) is None:
                return None
            return node("&E", h.field(s.label), p)
        if isinstance(s, Force):
            core = self._core(delta, free_vars(s.subj))
            p = self.synth(core, s.subj)
            if p is None:
                return None
            h = self.sig.unfold(p.type)
            if not isinstance(h, Up) or not ctx_geq(self.t, core, h.hi):
                return None
            return node("^E", h.body, p)
        if isinstance(s, Call):
            d = self.sig.terms.get(s.name)
            if d is None:
                return None
            dom = [x for x, _ in s.subst]
            if sorted(dom) != sorted(d.ctx.names()) or len(dom) != len(set(dom)):
                return None
            prems = self.substitution(delta, s.subst, d.ctx)
            if prems is None:
                return None
            return node("call", d.type, *prems)
        return None

    def substitution(self, delta: Context, theta, target: Context) -> tuple[NDNode, ...] | None:
        """``delta |- theta <= target`` pointwise; returns one derivation per component."""
        if not theta:
            return () if self._weakenable(delta) else None
        *init, (x, e) = theta
        fv_init = frozenset().union(*(free_vars(b) for _, b in init)) if init else frozenset()
        for d1, d2 in self._splits(delta, fv_init, free_vars(e)):
            last = self.check(d2, e, target[x].type)
            if last is None:
                continue
            rest = self.substitution(d1, tuple(init), target)
            if rest is not None:
                return rest + (last,)
        return None


def derive_declarative(t: ModeTheory, sig: Signature, delta: Context, e: Expr, a: Type) -> NDNode | None:
    """A derivation of ``delta |- e <= a`` or None.  Binders are renamed apart
    from the context first, so the derivation's term may differ from ``e`` by
    alpha-conversion."""
    e = rename_apart(e, delta.names())
    return DeclarativeChecker(t, sig).check(delta, e, a)


def check_declarative(t: ModeTheory, sig: Signature, delta: Context, e: Expr, a: Type) -> bool:
    return derive_declarative(t, sig, delta, e, a) is not None


def synth_declarative(t: ModeTheory, sig: Signature, delta: Context, s: Expr) -> NDNode | None:
    s = rename_apart(s, delta.names())
    return DeclarativeChecker(t, sig).synth(delta, s)
