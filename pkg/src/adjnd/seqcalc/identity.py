"""Identity expansion: every id at a compound formula becomes right and left
rules over ids at its components, so only atomic ids remain."""

from __future__ import annotations

from dataclasses import replace

from ..errors import BudgetExceeded
from ..modes import ModeTheory
from ..syntax import (Atom, Context, Hyp, Lolli, One, Plus, Signature,
                      Tensor, Type, TypeName, Up, With)
from .cutelim import DEFAULT_MAX_UNFOLD
from .derivation import NameSupply, SeqNode, conclude, names_in


class IdentityExpander:
    def __init__(self, t: ModeTheory, sig: Signature, max_unfold: int = DEFAULT_MAX_UNFOLD):
        self.t = t
        self.sig = sig
        self.max_unfold = max_unfold
        self.supply = NameSupply()

    def run(self, d: SeqNode) -> SeqNode:
        self.supply.add(names_in(d))
        return self._walk(d)

    def _walk(self, d: SeqNode) -> SeqNode:
        if d.rule == "id":
            h = d.ctx[d.principal]
            return self.eta(h, d.goal, list(d.ctx.without(d.principal)), 0)
        return replace(d, premises=tuple(self._walk(p) for p in d.premises))

    def eta(self, x: Hyp, goal: Type, extra: list[Hyp], depth: int) -> SeqNode:
        """A long proof of ``extra ; x:A |- A``."""
        t, sig = self.t, self.sig
        a = goal
        if isinstance(a, TypeName) or isinstance(x.type, TypeName):
            depth += 1
            if depth > self.max_unfold:
                raise BudgetExceeded(f"identity expansion unfolded more than {self.max_unfold} type names")
        a = sig.unfold(a)
        ctx = Context(extra + [x])
        if isinstance(a, Atom):
            return SeqNode("id", ctx, goal, x.name)
        fresh = self.supply
        if isinstance(a, Lolli):
            y, z = Hyp(fresh("a"), a.dom), Hyp(fresh("b"), a.cod)
            arg = self.eta(y, a.dom, [], depth)
            res = self.eta(z, a.cod, extra, depth)
            left = conclude(t, "-oL", [arg, res], a.cod, principal=x, binders=(z.name,))
            return conclude(t, "-oR", [left], goal, binders=(y.name,))
        if isinstance(a, With):
            prems = []
            for l, b in a.fields:
                z = Hyp(fresh(l), b)
                prems.append(conclude(t, "&L", [self.eta(z, b, extra, depth)], b,
                                      principal=x, binders=(z.name,), label=l))
            return conclude(t, "&R", prems, goal, ctx=None if prems else ctx)
        if isinstance(a, Tensor):
            z1, z2 = Hyp(fresh("l"), a.left), Hyp(fresh("r"), a.right)
            pair = conclude(t, "*R", [self.eta(z1, a.left, extra, depth), self.eta(z2, a.right, [], depth)], goal)
            return conclude(t, "*L", [pair], goal, principal=x, binders=(z1.name, z2.name))
        if isinstance(a, One):
            unit = SeqNode("1R", Context(extra), goal)
            return conclude(t, "1L", [unit], goal, principal=x)
        if isinstance(a, Plus):
            prems, binders = [], []
            for l, b in a.fields:
                z = Hyp(fresh(l), b)
                binders.append(z.name)
                prems.append(conclude(t, "+R", [self.eta(z, b, extra, depth)], goal, label=l))
            return conclude(t, "+L", prems, goal, principal=x, binders=tuple(binders),
                            ctx=None if prems else ctx)
        if isinstance(a, Up):
            z = Hyp(fresh("u"), a.body)
            inner = conclude(t, "^L", [self.eta(z, a.body, extra, depth)], a.body, principal=x, binders=(z.name,))
            return conclude(t, "^R", [inner], goal)
        z = Hyp(fresh("d"), a.body)
        inner = self.eta(z, a.body, [], depth)
        down = SeqNode("vR", Context(extra + [z]), goal, premises=(inner,))
        return conclude(t, "vL", [down], goal, principal=x, binders=(z.name,))


def expand_identities(t: ModeTheory, sig: Signature, d: SeqNode, max_unfold: int = DEFAULT_MAX_UNFOLD) -> SeqNode:
    return IdentityExpander(t, sig, max_unfold).run(d)


def identity(t: ModeTheory, sig: Signature, x: str, a: Type, max_unfold: int = DEFAULT_MAX_UNFOLD) -> SeqNode:
    """The long identity ``x:A |- A`` (general identity made admissible)."""
    ex = IdentityExpander(t, sig, max_unfold)
    ex.supply.add([x])
    return ex.eta(Hyp(x, a), a, [], 0)
