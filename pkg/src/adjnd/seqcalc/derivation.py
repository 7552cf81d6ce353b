"""Explicit sequent derivations, their validator and admissible structural rules.

A node records the sequent it concludes, the antecedent it acts on (for
``id`` and the left rules), the fresh antecedents its premises add and the
premises themselves.  Premise order is fixed per rule:

* ``cut``: (Gamma |- A, Gamma', x:A |- C), binder x, ``cut_type`` A
* ``-oL``: (Gamma |- A, Gamma', y:B |- C), binder y
* ``&R``/``+L``: one premise per label, in the order of the unfolded type
* every other rule: its premises left to right as in the sequent rules

Binders never occur in the node's own context, so renaming and weakening
only have to avoid capture at the premises.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from .. import ctxops
from ..errors import RuleViolation
from ..modes import ModeTheory, ctx_geq
from ..syntax import (Atom, Context, Down, Hyp, Lolli, One, Plus, Signature,
                      Tensor, Type, TypeName, Up, With, type_children)
from ..checker.typeeq import type_equal

RIGHT_RULES = {"-oR", "&R", "*R", "1R", "+R", "^R", "vR"}
LEFT_RULES = {"-oL", "&L", "*L", "1L", "+L", "^L", "vL"}
RULES = RIGHT_RULES | LEFT_RULES | {"id", "cut"}


@dataclass(frozen=True, eq=False)
class SeqNode:
    rule: str
    ctx: Context
    goal: Type
    principal: str | None = None
    binders: tuple[str, ...] = ()
    label: str | None = None
    cut_type: Type | None = None
    premises: tuple["SeqNode", ...] = ()

    def walk(self) -> Iterator["SeqNode"]:
        yield self
        for p in self.premises:
            yield from p.walk()

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)


# ------------------------------------------------------------ names

def names_in(d: SeqNode) -> set[str]:
    out: set[str] = set()
    for n in d.walk():
        out.update(n.ctx.names())
        out.update(n.binders)
    return out


class NameSupply:
    """Fresh antecedent names, avoiding everything registered so far."""

    def __init__(self, avoid: Iterable[str] = ()):
        self.taken = set(avoid)
        self.n = 0

    def add(self, names: Iterable[str]) -> None:
        self.taken.update(names)

    def __call__(self, base: str = "x") -> str:
        base = base.rstrip("'").split("_")[0] or "x"
        if base not in self.taken:
            self.taken.add(base)
            return base
        while True:
            self.n += 1
            cand = f"{base}_{self.n}"
            if cand not in self.taken:
                self.taken.add(cand)
                return cand


# -------------------------------------------------- binder -> type map

def premise_binder_types(sig: Signature, d: SeqNode) -> list[dict[str, Type]]:
    """For each premise, the types of the antecedents the rule adds to it."""
    r = d.rule
    if r == "cut":
        return [{}, {d.binders[0]: d.cut_type}]
    if r == "-oR":
        g = sig.unfold(d.goal)
        return [{d.binders[0]: g.dom}]
    if r in LEFT_RULES:
        p = sig.unfold(d.ctx[d.principal].type)
        if r == "-oL":
            return [{}, {d.binders[0]: p.cod}]
        if r == "&L":
            return [{d.binders[0]: p.field(d.label)}]
        if r == "*L":
            return [{d.binders[0]: p.left, d.binders[1]: p.right}]
        if r == "1L":
            return [{}]
        if r == "+L":
            return [{y: a} for y, (_, a) in zip(d.binders, p.fields)]
        return [{d.binders[0]: p.body}]
    return [{} for _ in d.premises]


def premise_goals(sig: Signature, d: SeqNode) -> list[Type]:
    r = d.rule
    g = sig.unfold(d.goal) if r in RIGHT_RULES else d.goal
    if r == "cut":
        return [d.cut_type, d.goal]
    if r == "-oR":
        return [g.cod]
    if r == "&R":
        return [a for _, a in g.fields]
    if r == "*R":
        return [g.left, g.right]
    if r == "+R":
        return [g.field(d.label)]
    if r in ("^R", "vR"):
        return [g.body]
    if r == "-oL":
        return [sig.unfold(d.ctx[d.principal].type).dom, d.goal]
    return [d.goal for _ in d.premises]


# --------------------------------------------------------- validation

def validate_seq(t: ModeTheory, sig: Signature, d: SeqNode) -> None:
    """Re-check every node against the sequent rules; raises RuleViolation."""
    _validate(t, sig, d, "root")


def _merge(t: ModeTheory, path: str, *cs: Context) -> Context:
    out = ctxops.merge_all(t, cs)
    if out is None:
        raise RuleViolation(path, "context merge undefined (shared antecedent without contraction)")
    return out


def _weakenable(t: ModeTheory, ctx: Iterable[Hyp]) -> bool:
    return all(t.W(h.mode) for h in ctx)


def _validate(t: ModeTheory, sig: Signature, d: SeqNode, path: str) -> None:
    def bad(msg: str):
        raise RuleViolation(path, f"{d.rule}: {msg}")

    if d.rule not in RULES:
        bad("unknown rule")
    if not ctx_geq(t, d.ctx, d.goal.mode):
        bad(f"independence fails: context not >= {d.goal.mode}")
    for b in d.binders:
        if b in d.ctx:
            bad(f"binder {b} already in the conclusion")
    if len(set(d.binders)) != len(d.binders):
        bad("repeated binder")
    r = d.rule
    fx = None
    if r in LEFT_RULES or r == "id":
        if d.principal not in d.ctx:
            bad(f"principal {d.principal} not in context")
        fx = d.ctx[d.principal]
    try:
        goal = sig.unfold(d.goal)
        ptype = sig.unfold(fx.type) if fx is not None else None
    except Exception as exc:  # unknown or non-contractive names
        bad(str(exc))
    if r == "id":
        if d.premises:
            bad("id has no premises")
        if not type_equal(sig, fx.type, d.goal):
            bad("antecedent and succedent differ")
        if not _weakenable(t, d.ctx.without(d.principal)):
            bad("remaining antecedents are not weakenable")
        return
    shape = {"cut": Type, "-oR": Lolli, "&R": With, "*R": Tensor, "1R": One, "+R": Plus,
             "^R": Up, "vR": Down, "-oL": Lolli, "&L": With, "*L": Tensor, "1L": One,
             "+L": Plus, "^L": Up, "vL": Down}[r]
    if r in RIGHT_RULES and not isinstance(goal, shape):
        bad("succedent has the wrong shape")
    if r in LEFT_RULES and not isinstance(ptype, shape):
        bad("principal formula has the wrong shape")
    nbinders = {"cut": 1, "-oR": 1, "-oL": 1, "&L": 1, "*L": 2, "^L": 1, "vL": 1}
    if r == "+L":
        nbinders["+L"] = len(ptype.fields)
    if len(d.binders) != nbinders.get(r, 0):
        bad("wrong number of binders")
    expected_n = {"cut": 2, "-oR": 1, "-oL": 2, "*R": 2, "1R": 0, "+R": 1, "^R": 1, "vR": 1,
                  "&L": 1, "*L": 1, "1L": 1, "^L": 1, "vL": 1}
    if r == "&R":
        expected_n["&R"] = len(goal.fields)
    if r == "+L":
        expected_n["+L"] = len(ptype.fields)
    if len(d.premises) != expected_n[r]:
        bad("wrong number of premises")
    if r == "cut" and d.cut_type is None:
        bad("cut without a cut formula")
    if r == "&L" and ptype.field(d.label) is None:
        bad(f"label {d.label} not in the principal formula")
    if r == "+R" and goal.field(d.label) is None:
        bad(f"label {d.label} not in the succedent")
    goals = premise_goals(sig, d)
    btypes = premise_binder_types(sig, d)
    rests = []
    for i, (p, g, bt) in enumerate(zip(d.premises, goals, btypes)):
        if not type_equal(sig, p.goal, g):
            bad(f"premise {i} proves the wrong succedent")
        for y, a in bt.items():
            h = p.ctx.get(y)
            if h is None or not type_equal(sig, h.type, a):
                bad(f"premise {i} lacks antecedent {y} of the expected type")
        rests.append(p.ctx.without(*bt))
    principal = Context([fx]) if fx is not None else Context()
    if r == "cut":
        if not (ctx_geq(t, rests[0], d.cut_type.mode) and t.geq(d.cut_type.mode, d.goal.mode)):
            bad("cut side condition Gamma >= m >= r fails")
        want = _merge(t, path, rests[0], rests[1])
    elif r in ("-oR", "+R", "^R"):
        want = rests[0]
    elif r == "&R":
        if rests and any(c != rests[0] for c in rests):
            bad("additive premises have different contexts")
        want = rests[0] if rests else d.ctx
    elif r == "*R":
        want = _merge(t, path, rests[0], rests[1])
    elif r == "1R":
        if not _weakenable(t, d.ctx):
            bad("antecedents are not weakenable")
        want = d.ctx
    elif r == "vR":
        inner = rests[0]
        if not ctx_geq(t, inner, goal.hi):
            bad(f"premise context not >= {goal.hi}")
        for h in inner:
            if d.ctx.get(h.name) != h:
                bad(f"premise antecedent {h.name} missing from the conclusion")
        if not _weakenable(t, (h for h in d.ctx if h.name not in inner)):
            bad("dropped antecedents are not weakenable")
        want = d.ctx
    elif r == "-oL":
        if not ctx_geq(t, rests[0], ptype.mode):
            bad(f"first premise context not >= {ptype.mode}")
        want = _merge(t, path, rests[0], rests[1], principal)
    elif r == "+L":
        if rests and any(c != rests[0] for c in rests):
            bad("branches have different contexts")
        want = _merge(t, path, rests[0], principal) if rests else d.ctx
    else:
        if r == "^L" and not t.geq(ptype.lo, d.goal.mode):
            bad(f"side condition {ptype.lo} >= {d.goal.mode} fails")
        want = _merge(t, path, rests[0], principal)
    if want != d.ctx:
        bad("conclusion context does not match the premises")
    for i, p in enumerate(d.premises):
        _validate(t, sig, p, f"{path}.{i}")


# ------------------------------------------------- structural rules

def rename(d: SeqNode, old: str, new: str, supply: NameSupply) -> SeqNode:
    """Rename antecedent ``old`` to ``new`` throughout ``d``.  If ``new`` is
    already present the two occurrences are identified, which is an instance
    of admissible contraction and needs contraction at their mode."""
    if old == new or old not in d.ctx:
        return d
    if new in d.ctx:
        ctx = d.ctx.without(old)
    else:
        ctx = d.ctx.rename(old, new)
    prems = []
    for p, bs in zip(d.premises, _premise_binders(d)):
        if new in bs:
            fresh = supply(new)
            p = rename(p, new, fresh, supply)
            d = _rebind(d, new, fresh)
        prems.append(rename(p, old, new, supply))
    principal = new if d.principal == old else d.principal
    return replace(d, ctx=ctx, principal=principal, premises=tuple(prems))


def _premise_binders(d: SeqNode) -> list[tuple[str, ...]]:
    r = d.rule
    if r in ("cut", "-oL"):
        return [(), d.binders]
    if r == "+L":
        return [(y,) for y in d.binders]
    return [d.binders for _ in d.premises]


def _rebind(d: SeqNode, old: str, new: str) -> SeqNode:
    return replace(d, binders=tuple(new if b == old else b for b in d.binders))


def _weaken_targets(d: SeqNode) -> list[int]:
    r = d.rule
    if r in ("id", "1R", "vR"):
        return []
    if r in ("cut", "-oL"):
        return [1]
    if r == "*R":
        return [0]
    return list(range(len(d.premises)))


def weaken(d: SeqNode, extra: Iterable[Hyp], supply: NameSupply) -> SeqNode:
    """Add weakenable antecedents to ``d``'s context (admissible weakening).

    The caller guarantees that ``extra`` is weakenable and at least the mode
    of the succedent."""
    extra = [h for h in extra if h.name not in d.ctx]
    if not extra:
        return d
    names = {h.name for h in extra}
    ctx = Context(list(d.ctx) + extra)
    targets = _weaken_targets(d)
    if not targets:
        return replace(d, ctx=ctx)
    prems = list(d.premises)
    pbs = _premise_binders(d)
    for i in targets:
        p = prems[i]
        for b in pbs[i]:
            if b in names:
                fresh = supply(b)
                p = rename(p, b, fresh, supply)
                d = _rebind(d, b, fresh)
                pbs = _premise_binders(d)
        prems[i] = weaken(p, extra, supply)
    return replace(d, ctx=ctx, premises=tuple(prems))


def freshen(d: SeqNode, avoid: set[str], supply: NameSupply) -> SeqNode:
    """Rename every binder in ``d`` that occurs in ``avoid``."""
    if not any(b in avoid for n in d.walk() for b in n.binders):
        return d
    prems = list(d.premises)
    pbs = _premise_binders(d)
    for i, bs in enumerate(pbs):
        for b in bs:
            if b in avoid:
                fresh = supply(b)
                prems[i] = rename(prems[i], b, fresh, supply)
                d = _rebind(d, b, fresh)
    prems = [freshen(p, avoid, supply) for p in prems]
    return replace(d, premises=tuple(prems))


# ------------------------------------------------------ constructors

def conclude(t: ModeTheory, rule: str, premises: Iterable[SeqNode], goal: Type, *,
             principal: Hyp | None = None, binders: tuple[str, ...] = (),
             label: str | None = None, cut_type: Type | None = None,
             ctx: Context | None = None) -> SeqNode:
    """Build a node whose conclusion context is computed from its premises.

    ``ctx`` must be given for the rules whose conclusion keeps a part that
    the premises do not determine (1R, vR, empty &R and +L)."""
    prems = tuple(premises)
    tmp = SeqNode(rule, Context(), goal, principal.name if principal else None, binders, label, cut_type, prems)
    pbs = _premise_binders(tmp)
    rests = [p.ctx.without(*bs) for p, bs in zip(prems, pbs)]
    pc = Context([principal]) if principal is not None else Context()
    if ctx is None:
        if rule in ("cut", "*R"):
            ctx = ctxops.merge(t, rests[0], rests[1])
        elif rule == "-oL":
            ctx = ctxops.merge_all(t, [rests[0], rests[1], pc])
        elif rule in ("-oR", "+R", "^R", "&R"):
            ctx = rests[0]
        else:
            ctx = ctxops.merge(t, rests[0], pc)
        if ctx is None:
            raise RuleViolation(rule, "context merge undefined while building a derivation")
    return SeqNode(rule, ctx, goal, principal.name if principal else None, binders, label, cut_type, prems)


# ----------------------------------------------------------- audits

def is_cut_free(d: SeqNode) -> bool:
    return not any(n.rule == "cut" for n in d.walk())


def count_rules(d: SeqNode) -> dict[str, int]:
    out: dict[str, int] = {}
    for n in d.walk():
        out[n.rule] = out.get(n.rule, 0) + 1
    return out


def has_atomic_ids(sig: Signature, d: SeqNode) -> bool:
    return all(isinstance(sig.unfold(n.goal), Atom) for n in d.walk() if n.rule == "id")


def subformulas(sig: Signature, types: Iterable[Type]) -> set[Type]:
    """Closure under immediate components and unfolding of type names."""
    out: set[Type] = set()
    stack = list(types)
    while stack:
        a = stack.pop()
        if a in out:
            continue
        out.add(a)
        if isinstance(a, TypeName):
            stack.append(sig.types[a.name].body)
        else:
            stack.extend(type_children(a))
    return out


def subformula_violations(sig: Signature, d: SeqNode) -> list[tuple[Type, SeqNode]]:
    """Formulas in ``d`` that are not subformulas of its end sequent."""
    allowed = subformulas(sig, [h.type for h in d.ctx] + [d.goal])
    bad = []
    for n in d.walk():
        for a in [h.type for h in n.ctx] + [n.goal]:
            if a not in allowed:
                bad.append((a, n))
    return bad


# --------------------------------------------------------- printing

def format_seq(d: SeqNode, indent: int = 0) -> str:
    from ..frontend import print_context, print_type
    pad = "  " * indent
    tag = d.rule
    extras = []
    if d.principal:
        extras.append(d.principal)
    if d.label:
        extras.append(d.label)
    if d.binders:
        extras.append("binds " + ",".join(d.binders))
    if extras:
        tag += "[" + "; ".join(extras) + "]"
    line = f"{pad}{tag}: {print_context(d.ctx)} |- {print_type(d.goal)}"
    return "\n".join([line] + [format_seq(p, indent + 1) for p in d.premises])
