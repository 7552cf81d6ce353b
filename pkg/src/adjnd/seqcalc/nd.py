"""Validation of natural deduction derivations and the verification predicate."""

from __future__ import annotations

from .. import ctxops
from ..checker.ndtree import CHECK, SYNTH, NDNode
from ..checker.typeeq import type_equal
from ..errors import RuleViolation
from ..modes import ModeTheory, ctx_geq
from ..syntax import (Annot, App, Atom, Call, Context, Down, DownArm, DownI,
                      Force, Inj, InjArms, Lam, Lolli, Match, One, Pair,
                      PairArm, Plus, Proj, Record, Signature, Susp, Tensor,
                      TypeName, Unit, UnitArm, Up, Var, With)

__all__ = ["NDNode", "validate_nd", "is_verification"]


def validate_nd(t: ModeTheory, sig: Signature, d: NDNode) -> None:
    """Re-check every node against the natural deduction rules."""
    _check(t, sig, d, "root")


def _check(t: ModeTheory, sig: Signature, d: NDNode, path: str) -> None:
    def bad(msg: str):
        raise RuleViolation(path, f"{d.rule}: {msg}")

    def merged(*cs: Context) -> Context:
        out = ctxops.merge_all(t, cs)
        if out is None:
            bad("context merge undefined")
        return out

    def weak_rest(inner: Context) -> None:
        for h in inner:
            if d.ctx.get(h.name) != h:
                bad(f"premise hypothesis {h.name} missing from the conclusion")
        if not all(t.W(h.mode) for h in d.ctx if h.name not in inner):
            bad("dropped hypotheses are not weakenable")

    if not ctx_geq(t, d.ctx, d.type.mode):
        bad(f"independence fails: context not >= {d.type.mode}")
    e, r, ps = d.expr, d.rule, d.premises
    a = sig.unfold(d.type)

    def prem(i: int, direction: str, expr=None, ty=None) -> NDNode:
        if i >= len(ps):
            bad("missing premise")
        p = ps[i]
        if p.direction != direction:
            bad(f"premise {i} has the wrong direction")
        if expr is not None and p.expr != expr:
            bad(f"premise {i} is about a different expression")
        if ty is not None and not type_equal(sig, p.type, ty):
            bad(f"premise {i} has the wrong type")
        return p

    want_dir = SYNTH if r in ("hyp", "<=/=>", "-oE", "&E", "^E", "call") else CHECK
    if d.direction != want_dir:
        bad("wrong judgment direction")
    if r == "hyp":
        if not isinstance(e, Var) or e.name not in d.ctx:
            bad("not a hypothesis")
        if not type_equal(sig, d.ctx[e.name].type, d.type):
            bad("hypothesis has a different type")
        weak_rest(Context([d.ctx[e.name]]))
    elif r == "=>/<=":
        p = prem(0, SYNTH, e, d.type)
        if p.ctx != d.ctx:
            bad("context changed")
    elif r == "<=/=>":
        if not isinstance(e, Annot) or not type_equal(sig, e.type, d.type):
            bad("not an annotation at this type")
        p = prem(0, CHECK, e.body, e.type)
        if p.ctx != d.ctx:
            bad("context changed")
    elif r == "-oI":
        if not isinstance(e, Lam) or not isinstance(a, Lolli):
            bad("shape")
        p = prem(0, CHECK, e.body, a.cod)
        if e.var in d.ctx or p.ctx != d.ctx.extend(e.var, p.ctx[e.var].type if e.var in p.ctx else a.dom):
            bad("premise context is not the conclusion extended by the binder")
        if not type_equal(sig, p.ctx[e.var].type, a.dom):
            bad("binder has the wrong type")
    elif r == "-oE":
        if not isinstance(e, App):
            bad("shape")
        p1 = prem(0, SYNTH, e.fn)
        f = sig.unfold(p1.type)
        if not isinstance(f, Lolli) or not type_equal(sig, f.cod, d.type):
            bad("function type")
        p2 = prem(1, CHECK, e.arg, f.dom)
        if merged(p1.ctx, p2.ctx) != d.ctx:
            bad("context is not the merge of the premises")
    elif r == "&I":
        if not isinstance(e, Record) or not isinstance(a, With):
            bad("shape")
        if sorted(l for l, _ in e.fields) != sorted(l for l, _ in a.fields) or len(ps) != len(e.fields):
            bad("labels")
        for i, (l, b) in enumerate(e.fields):
            if prem(i, CHECK, b, a.field(l)).ctx != d.ctx:
                bad("context changed")
    elif r == "&E":
        if not isinstance(e, Proj):
            bad("shape")
        p = prem(0, SYNTH, e.subj)
        w = sig.unfold(p.type)
        if not isinstance(w, With) or w.field(e.label) is None or not type_equal(sig, w.field(e.label), d.type):
            bad("record type")
        if p.ctx != d.ctx:
            bad("context changed")
    elif r == "^I":
        if not isinstance(e, Susp) or not isinstance(a, Up):
            bad("shape")
        if prem(0, CHECK, e.body, a.body).ctx != d.ctx:
            bad("context changed")
    elif r == "^E":
        if not isinstance(e, Force):
            bad("shape")
        p = prem(0, SYNTH, e.subj)
        u = sig.unfold(p.type)
        if not isinstance(u, Up) or not type_equal(sig, u.body, d.type):
            bad("suspension type")
        if not ctx_geq(t, p.ctx, u.hi):
            bad(f"premise context not >= {u.hi}")
        weak_rest(p.ctx)
    elif r == "*I":
        if not isinstance(e, Pair) or not isinstance(a, Tensor):
            bad("shape")
        p1 = prem(0, CHECK, e.left, a.left)
        p2 = prem(1, CHECK, e.right, a.right)
        if merged(p1.ctx, p2.ctx) != d.ctx:
            bad("context is not the merge of the premises")
    elif r == "1I":
        if not isinstance(e, Unit) or not isinstance(a, One):
            bad("shape")
        weak_rest(Context())
    elif r == "+I":
        if not isinstance(e, Inj) or not isinstance(a, Plus) or a.field(e.label) is None:
            bad("shape")
        if prem(0, CHECK, e.body, a.field(e.label)).ctx != d.ctx:
            bad("context changed")
    elif r == "vI":
        if not isinstance(e, DownI) or not isinstance(a, Down):
            bad("shape")
        p = prem(0, CHECK, e.body, a.body)
        if not ctx_geq(t, p.ctx, a.hi):
            bad(f"premise context not >= {a.hi}")
        weak_rest(p.ctx)
    elif r in ("*E", "1E", "+E", "vE"):
        _check_match(t, sig, d, bad, prem, merged)
    elif r == "call":
        if not isinstance(e, Call) or e.name not in sig.terms:
            bad("unknown definition")
        td = sig.terms[e.name]
        if sorted(x for x, _ in e.subst) != sorted(td.ctx.names()) or len(ps) != len(e.subst):
            bad("substitution domain")
        if not type_equal(sig, td.type, d.type):
            bad("result type")
        ctxs = [prem(i, CHECK, b, td.ctx[x].type).ctx for i, (x, b) in enumerate(e.subst)]
        weak_rest(merged(*ctxs))
    else:
        bad("unknown rule")
    for i, p in enumerate(ps):
        _check(t, sig, p, f"{path}.{i}")


def _check_match(t, sig, d, bad, prem, merged):
    e = d.expr
    if not isinstance(e, Match):
        bad("shape")
    ds = prem(0, SYNTH, e.subj)
    h = sig.unfold(ds.type)
    m, r = ds.type.mode, d.type.mode
    if not (ctx_geq(t, ds.ctx, m) and t.geq(m, r)):
        bad("side condition Delta >= m >= r fails")
    arms = e.arms
    rests = []
    if d.rule == "*E":
        if not isinstance(arms, PairArm) or not isinstance(h, Tensor):
            bad("shape")
        p = prem(1, CHECK, arms.body, d.type)
        for x, ty in ((arms.x1, h.left), (arms.x2, h.right)):
            if x not in p.ctx or not type_equal(sig, p.ctx[x].type, ty):
                bad(f"arm lacks {x}")
        rests.append(p.ctx.without(arms.x1, arms.x2))
    elif d.rule == "1E":
        if not isinstance(arms, UnitArm) or not isinstance(h, One):
            bad("shape")
        rests.append(prem(1, CHECK, arms.body, d.type).ctx)
    elif d.rule == "+E":
        if not isinstance(arms, InjArms) or not isinstance(h, Plus):
            bad("shape")
        if sorted(l for l, _, _ in arms.branches) != sorted(l for l, _ in h.fields):
            bad("labels")
        for i, (l, x, b) in enumerate(arms.branches):
            p = prem(i + 1, CHECK, b, d.type)
            if x not in p.ctx or not type_equal(sig, p.ctx[x].type, h.field(l)):
                bad(f"branch {l} lacks {x}")
            rests.append(p.ctx.without(x))
        if any(c != rests[0] for c in rests):
            bad("branches use different contexts")
    else:
        if not isinstance(arms, DownArm) or not isinstance(h, Down):
            bad("shape")
        p = prem(1, CHECK, arms.body, d.type)
        if arms.var not in p.ctx or not type_equal(sig, p.ctx[arms.var].type, h.body):
            bad("arm lacks its variable")
        rests.append(p.ctx.without(arms.var))
    if rests:
        if merged(ds.ctx, rests[0]) != d.ctx:
            bad("context is not the merge of the premises")
    else:
        for hyp in ds.ctx:
            if d.ctx.get(hyp.name) != hyp:
                bad("scrutinee context not part of the conclusion")


def is_verification(d: NDNode, sig: Signature | None = None) -> bool:
    """No annotation rule and synthesis-to-checking only at atoms."""
    for n in d.walk():
        if n.rule == "<=/=>":
            return False
        if n.rule == "=>/<=":
            a = n.type
            if sig is not None and isinstance(a, TypeName):
                a = sig.unfold(a)
            if not isinstance(a, Atom):
                return False
    return True
