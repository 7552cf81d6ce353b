"""Structural cut elimination.

Cuts are removed topmost first, so every reduction works on cut-free
premises.  ``_cut(D, x, E)`` turns ``D : Gamma |- A`` and
``E : Gamma', x:A |- C`` into a cut-free proof of ``Gamma ; Gamma' |- C``:

* ``x`` not principal in ``E``: push the cut into the premises of ``E`` that
  still mention ``x`` (right commutation);
* ``x`` principal but ``D`` ends in a left rule: push ``E`` into the premises
  of ``D`` that prove ``A`` (left commutation);
* both principal: first cut ``D`` into premises of ``E`` that kept ``x``
  (implicit contraction), then reduce to cuts at the components of ``A``.

Duplicating ``D`` is only ever needed when ``x`` is shared, which means
contraction at the mode of ``A`` and, by monotonicity, at every antecedent
of ``D``.
"""

from __future__ import annotations

from dataclasses import replace

from .. import ctxops
from ..errors import BudgetExceeded, InvariantError
from ..modes import ModeTheory
from ..syntax import Signature, Type, TypeName, type_children
from .derivation import (LEFT_RULES, RIGHT_RULES, NameSupply, SeqNode,
                         _premise_binders, freshen, names_in, rename, weaken)

DEFAULT_BUDGET = 100_000
DEFAULT_MAX_UNFOLD = 16


def unfold_depth(sig: Signature, a: Type, limit: int) -> int:
    """Largest number of type-name unfoldings along any path through ``a``;
    anything above ``limit`` (including every recursive type) reports
    ``limit + 1``."""
    def go(b: Type, depth: int, seen: frozenset) -> int:
        if depth > limit:
            return depth
        if isinstance(b, TypeName):
            if b.name in seen:
                return limit + 1
            return go(sig.types[b.name].body, depth + 1, seen | {b.name})
        return max((go(c, depth, seen) for c in type_children(b)), default=depth)
    return go(a, 0, frozenset())


class CutEliminator:
    def __init__(self, t: ModeTheory, sig: Signature, budget: int = DEFAULT_BUDGET,
                 max_unfold: int = DEFAULT_MAX_UNFOLD):
        self.t = t
        self.sig = sig
        self.budget = budget
        self.max_unfold = max_unfold
        self.steps = 0
        self.supply = NameSupply()

    def run(self, d: SeqNode) -> SeqNode:
        for n in d.walk():
            if n.rule == "cut" and unfold_depth(self.sig, n.cut_type, self.max_unfold) > self.max_unfold:
                raise BudgetExceeded(
                    f"cut formula unfolds more than {self.max_unfold} type names deep; "
                    "cut elimination is only attempted for finitely unfolding cut formulas")
        self.supply.add(names_in(d))
        return self._elim(d)

    def _elim(self, d: SeqNode) -> SeqNode:
        prems = tuple(self._elim(p) for p in d.premises)
        d = replace(d, premises=prems)
        if d.rule == "cut":
            return self._cut(prems[0], d.binders[0], prems[1])
        return d

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(f"cut elimination exceeded {self.budget} reduction steps")

    # -- the reduction

    def _cut(self, D: SeqNode, x: str, E: SeqNode) -> SeqNode:
        self._tick()
        t, supply = self.t, self.supply
        E = freshen(E, set(D.ctx.names()), supply)
        D = freshen(D, set(E.ctx.names()) | {x}, supply)
        target = ctxops.merge(t, D.ctx, E.ctx.without(x))
        if target is None:
            raise InvariantError("cut of premises whose contexts do not merge")
        out = self._reduce(D, x, E, target)
        if out.ctx != target:
            missing = [h for h in target if h.name not in out.ctx]
            if any(out.ctx.get(h.name) != h for h in out.ctx if h.name in target) \
                    or len(out.ctx) + len(missing) != len(target):
                raise InvariantError("cut reduction changed the end sequent")
            out = weaken(out, missing, supply)
        return out

    def _reduce(self, D: SeqNode, x: str, E: SeqNode, target) -> SeqNode:
        supply = self.supply
        if E.rule == "id":
            if E.principal == x:
                return weaken(D, E.ctx.without(x), supply)
            return replace(E, ctx=target)
        if D.rule == "id":
            y = D.principal
            return weaken(rename(E, x, y, supply), D.ctx.without(y), supply)
        if E.rule in RIGHT_RULES or E.principal != x:
            return self._commute_right(D, x, E, target)
        if D.rule in LEFT_RULES:
            return self._commute_left(D, x, E, target)
        return self._principal(D, x, E)

    def _commute_right(self, D: SeqNode, x: str, E: SeqNode, target) -> SeqNode:
        prems = tuple(self._cut(D, x, p) if x in p.ctx else p for p in E.premises)
        return replace(E, ctx=target, premises=prems)

    def _commute_left(self, D: SeqNode, x: str, E: SeqNode, target) -> SeqNode:
        prems = list(D.premises)
        for i, p in enumerate(prems):
            if D.rule == "-oL" and i == 0:
                continue  # proves the argument, not the cut formula
            prems[i] = self._cut(p, x, E)
        return replace(D, ctx=target, goal=E.goal, premises=tuple(prems))

    def _principal(self, D: SeqNode, x: str, E: SeqNode) -> SeqNode:
        # antecedent kept by the left rule (contraction): cut it away first
        pbs = _premise_binders(E)
        prems = tuple(self._cut(D, x, p) if x in p.ctx else p for p in E.premises)
        r = E.rule
        cut = self._cut
        if r == "-oL":
            (D1,), (y,) = D.premises, D.binders
            (z,) = E.binders
            inner = cut(prems[0], y, D1)
            return cut(inner, z, prems[1])
        if r == "&L":
            g = self.sig.unfold(D.goal)
            idx = [l for l, _ in g.fields].index(E.label)
            return cut(D.premises[idx], E.binders[0], prems[0])
        if r == "*L":
            z1, z2 = E.binders
            return cut(D.premises[1], z2, cut(D.premises[0], z1, prems[0]))
        if r == "1L":
            return weaken(prems[0], D.ctx, self.supply)
        if r == "+L":
            g = self.sig.unfold(E.ctx[x].type)
            idx = [l for l, _ in g.fields].index(D.label)
            return cut(D.premises[0], pbs[idx][0], prems[idx])
        if r == "^L":
            return cut(D.premises[0], E.binders[0], prems[0])
        if r == "vL":
            return weaken(cut(D.premises[0], E.binders[0], prems[0]), D.ctx, self.supply)
        raise InvariantError(f"no principal reduction for {D.rule} against {r}")


def eliminate_cuts(t: ModeTheory, sig: Signature, d: SeqNode, budget: int = DEFAULT_BUDGET,
                   max_unfold: int = DEFAULT_MAX_UNFOLD) -> SeqNode:
    """A cut-free derivation of the same sequent."""
    return CutEliminator(t, sig, budget, max_unfold).run(d)


def eliminate_cuts_counted(t: ModeTheory, sig: Signature, d: SeqNode, budget: int = DEFAULT_BUDGET,
                           max_unfold: int = DEFAULT_MAX_UNFOLD) -> tuple[SeqNode, int]:
    ce = CutEliminator(t, sig, budget, max_unfold)
    out = ce.run(d)
    return out, ce.steps
