"""Translations between natural deduction and the sequent calculus.

``nd_to_seq`` follows the simultaneous induction that maps checking
derivations to sequents and synthesis derivations to a transformation of a
continuation sequent: right rules for introductions, left rules for
eliminations turned upside down, identity exactly at ``=>/<=`` and cut exactly
at ``<=/=>``.

``seq_to_nd`` carries a substitution from antecedents to synthesizing terms.
Every left rule extends it with the elimination form applied to the
principal's term; ``id`` reads the term back and ``cut`` becomes an
annotation substituted into the second premise's term.
"""

from __future__ import annotations

from typing import Mapping

from .. import ctxops
from ..checker.declarative import DeclarativeChecker
from ..checker.ndtree import NDNode
from ..errors import InvalidInput, InvariantError, RuleViolation
from ..modes import ModeTheory
from ..syntax import (Annot, App, Context, DownArm, DownI, Expr, Force, Hyp,
                      Inj, InjArms, Lam, Match, Pair, PairArm, Proj, Record,
                      Signature, Susp, Unit, UnitArm, Var, bound_vars,
                      free_vars, substitute)
from .derivation import NameSupply, SeqNode, conclude, rename, weaken
from .nd import validate_nd


# ------------------------------------------------------------ ND -> SC

class NDToSeq:
    def __init__(self, t: ModeTheory, sig: Signature, d: NDNode):
        self.t = t
        self.sig = sig
        self.supply = NameSupply()
        for n in d.walk():
            self.supply.add(n.ctx.names())
            self.supply.add(free_vars(n.expr))
        self.supply.add(bound_vars(d.expr))

    def check(self, d: NDNode) -> SeqNode:
        t, e, r = self.t, d.expr, d.rule
        prems = d.premises
        goal = d.type
        if r == "=>/<=":
            x = self.supply("x")
            ident = SeqNode("id", Context([Hyp(x, prems[0].type)]), goal, x)
            return self.synth(prems[0], x, ident)
        if r == "-oI":
            return conclude(t, "-oR", [self.check(prems[0])], goal, binders=(e.var,))
        if r == "&I":
            by_label = {l: self.check(p) for (l, _), p in zip(e.fields, prems)}
            order = [l for l, _ in self.sig.unfold(goal).fields]
            sub = [by_label[l] for l in order]
            return conclude(t, "&R", sub, goal, ctx=None if sub else d.ctx)
        if r == "^I":
            return conclude(t, "^R", [self.check(prems[0])], goal)
        if r == "*I":
            return conclude(t, "*R", [self.check(prems[0]), self.check(prems[1])], goal)
        if r == "1I":
            return SeqNode("1R", d.ctx, goal)
        if r == "+I":
            return conclude(t, "+R", [self.check(prems[0])], goal, label=e.label)
        if r == "vI":
            return SeqNode("vR", d.ctx, goal, premises=(self.check(prems[0]),))
        if r in ("*E", "1E", "+E", "vE"):
            return self.match(d)
        raise InvalidInput(f"cannot translate rule {r} (inline definitions first)")

    def match(self, d: NDNode) -> SeqNode:
        t, e, goal = self.t, d.expr, d.type
        ds, arms = d.premises[0], d.premises[1:]
        x = self.supply("s")
        px = Hyp(x, ds.type)
        a = e.arms
        if d.rule == "*E":
            left = conclude(t, "*L", [self.check(arms[0])], goal, principal=px, binders=(a.x1, a.x2))
        elif d.rule == "1E":
            left = conclude(t, "1L", [self.check(arms[0])], goal, principal=px)
        elif d.rule == "vE":
            left = conclude(t, "vL", [self.check(arms[0])], goal, principal=px, binders=(a.var,))
        else:
            h = self.sig.unfold(ds.type)
            by_label = {l: (y, self.check(p)) for (l, y, _), p in zip(a.branches, arms)}
            order = [l for l, _ in h.fields]
            sub = [by_label[l][1] for l in order]
            binders = tuple(by_label[l][0] for l in order)
            rest = None
            if not sub:
                # an empty case keeps an arbitrary context beside the scrutinee's
                rest = d.ctx.without(*ds.ctx.names()).add(px)
            left = conclude(t, "+L", sub, goal, principal=px, binders=binders, ctx=rest)
        return self.synth(ds, x, left)

    def synth(self, d: NDNode, x: str, E: SeqNode) -> SeqNode:
        """From ``d : Delta |- s => A`` and ``E : Delta', x:A |- C`` build
        ``Delta ; Delta' |- C``."""
        t, r, prems = self.t, d.rule, d.premises
        supply = self.supply
        if r == "hyp":
            y = d.expr.name
            out = rename(E, x, y, supply)
            return weaken(out, d.ctx.without(y), supply)
        if r == "<=/=>":
            D1 = self.check(prems[0])
            return conclude(t, "cut", [D1, E], E.goal, binders=(x,), cut_type=d.type)
        if r == "-oE":
            f = self.supply("f")
            arg = self.check(prems[1])
            left = conclude(t, "-oL", [arg, E], E.goal, principal=Hyp(f, prems[0].type), binders=(x,))
            return self.synth(prems[0], f, left)
        if r == "&E":
            f = self.supply("p")
            left = conclude(t, "&L", [E], E.goal, principal=Hyp(f, prems[0].type), binders=(x,), label=d.expr.label)
            return self.synth(prems[0], f, left)
        if r == "^E":
            f = self.supply("u")
            left = conclude(t, "^L", [E], E.goal, principal=Hyp(f, prems[0].type), binders=(x,))
            out = self.synth(prems[0], f, left)
            return weaken(out, d.ctx.without(*prems[0].ctx.names()), supply)
        raise InvalidInput(f"cannot translate rule {r} (inline definitions first)")


def nd_to_seq(t: ModeTheory, sig: Signature, nd: NDNode) -> SeqNode:
    """A sequent proof of ``Delta |- C`` from ``Delta |- e <= C``."""
    try:
        validate_nd(t, sig, nd)
    except RuleViolation as exc:
        raise InvalidInput(f"not a valid natural deduction: {exc}") from exc
    if nd.direction != "<=":
        raise InvalidInput("expected a checking derivation")
    tr = NDToSeq(t, sig, nd)
    out = tr.check(nd)
    if out.ctx != nd.ctx:
        missing = [h for h in nd.ctx if h.name not in out.ctx]
        out = weaken(out, missing, tr.supply)
    return out


# ------------------------------------------------------------ SC -> ND

def substitution_split(t: ModeTheory, delta: Context, theta: Mapping[str, Expr],
                       gamma1: Context, gamma2: Context):
    """Split ``delta |- theta => gamma1 ; gamma2`` into two typings.

    Each component ``x |-> s`` needs the hypotheses free in ``s``; shared
    components go to both sides, which is where contraction comes in.
    Hypotheses of ``delta`` not free in any component are weakenable (the
    typing is assumed valid) and stay with the second half."""
    def need(g: Context) -> Context:
        fv = set()
        for h in g:
            fv |= free_vars(theta[h.name])
        return delta.only(fv)
    d1, d2 = need(gamma1), need(gamma2)
    used = set(d1.names()) | set(d2.names())
    d2 = Context(list(d2) + [h for h in delta if h.name not in used])
    th1 = {h.name: theta[h.name] for h in gamma1}
    th2 = {h.name: theta[h.name] for h in gamma2}
    if ctxops.merge(t, d1, d2) != delta:
        raise InvariantError("substitution split does not recompose the context")
    return th1, d1, th2, d2


class SeqToND:
    def __init__(self, t: ModeTheory, sig: Signature, avoid):
        self.t = t
        self.sig = sig
        self.supply = NameSupply(avoid)

    def term(self, d: SeqNode, theta: dict[str, Expr]) -> Expr:
        r = d.rule
        if r == "id":
            return theta[d.principal]
        th = lambda p: {x: theta[x] for x in p.ctx.names() if x in theta}
        if r == "cut":
            (x,) = d.binders
            e1 = self.term(d.premises[0], th(d.premises[0]))
            y = self.supply(x)
            e2 = self.term(d.premises[1], {**th(d.premises[1]), x: Var(y)})
            return substitute(e2, {y: Annot(e1, d.cut_type)})
        if r == "-oR":
            (x,) = d.binders
            y = self.supply(x)
            return Lam(y, self.term(d.premises[0], {**theta, x: Var(y)}))
        if r == "&R":
            labels = [l for l, _ in self.sig.unfold(d.goal).fields]
            return Record(tuple((l, self.term(p, theta)) for l, p in zip(labels, d.premises)))
        if r == "*R":
            return Pair(*(self.term(p, th(p)) for p in d.premises))
        if r == "1R":
            return Unit()
        if r == "+R":
            return Inj(d.label, self.term(d.premises[0], theta))
        if r == "^R":
            return Susp(self.term(d.premises[0], theta))
        if r == "vR":
            return DownI(self.term(d.premises[0], th(d.premises[0])))
        s = theta[d.principal]
        if r == "-oL":
            p1, p2 = d.premises
            arg = self.term(p1, th(p1))
            return self.term(p2, {**th(p2), d.binders[0]: App(s, arg)})
        if r == "&L":
            return self.term(d.premises[0], {**theta, d.binders[0]: Proj(s, d.label)})
        if r == "^L":
            return self.term(d.premises[0], {**theta, d.binders[0]: Force(s)})
        if r == "*L":
            y1, y2 = (self.supply(b) for b in d.binders)
            p = d.premises[0]
            body = self.term(p, {**th(p), d.binders[0]: Var(y1), d.binders[1]: Var(y2)})
            return Match(s, PairArm(y1, y2, body))
        if r == "1L":
            p = d.premises[0]
            return Match(s, UnitArm(self.term(p, th(p))))
        if r == "vL":
            y = self.supply(d.binders[0])
            p = d.premises[0]
            return Match(s, DownArm(y, self.term(p, {**th(p), d.binders[0]: Var(y)})))
        if r == "+L":
            labels = [l for l, _ in self.sig.unfold(d.ctx[d.principal].type).fields]
            branches = []
            for l, b, p in zip(labels, d.binders, d.premises):
                y = self.supply(b)
                branches.append((l, y, self.term(p, {**th(p), b: Var(y)})))
            return Match(s, InjArms(tuple(branches)))
        raise InvalidInput(f"unknown sequent rule {r}")


def seq_to_nd(t: ModeTheory, sig: Signature, d: SeqNode, theta: Mapping[str, Expr] | None = None,
              delta: Context | None = None) -> tuple[Expr, NDNode]:
    """A term ``e`` and a derivation of ``delta |- e <= C`` for a sequent
    proof of ``Gamma |- C`` and ``delta |- theta => Gamma``.  Both default to
    the identity on ``Gamma``.  The term is read off the sequent proof; its
    derivation is then rebuilt by the declarative system, which also
    certifies the result."""
    if theta is None:
        theta = {h.name: Var(h.name) for h in d.ctx}
        delta = d.ctx if delta is None else delta
    if delta is None:
        raise InvalidInput("a substitution needs the context of its free variables")
    missing = [h.name for h in d.ctx if h.name not in theta]
    if missing:
        raise InvalidInput(f"substitution does not cover {missing}")
    avoid = set(delta.names())
    for s in theta.values():
        avoid |= free_vars(s)
    e = SeqToND(t, sig, avoid).term(d, dict(theta))
    nd = DeclarativeChecker(t, sig).check(delta, e, d.goal)
    if nd is None:
        raise InvariantError("translated term does not check at the end sequent")
    return e, nd
