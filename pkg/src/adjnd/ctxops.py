"""The context algebra used by the used-hypothesis checker and by state typing.

Contexts are name-keyed, so exchange is implicit.  Operations that are
partial in the resource sense return ``None`` (merge) or raise the matching
``TypeCheckError`` subclass; mismatched types for the same name are a hard
``MismatchedTypes`` failure since they can only come from a bug upstream.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable

from .errors import (IndependenceViolation, JoinConflict, MismatchedTypes,
                     UnusedLinearVariable)
from .modes import ModeTheory, ctx_geq  # noqa: F401  (re-exported)
from .syntax import Context, Hyp, Type


def _same(h1: Hyp, h2: Hyp) -> None:
    if h1.type != h2.type:
        raise MismatchedTypes(f"variable {h1.name} has types {h1.type} and {h2.type}")


def merge(t: ModeTheory, c1: Context, c2: Context, provisional_contraction: bool = True) -> Context | None:
    """``c1 ; c2``.  Returns None when a shared variable lacks contraction.

    With ``provisional_contraction`` off, sharing a variable is allowed without
    contraction as long as at most one side holds it plainly.  That is the
    reading the used-hypothesis checker needs: a provisional entry there means
    "maybe used", and a maybe-use next to at most one definite use never
    duplicates anything.
    """
    out: list[Hyp] = []
    for h1 in c1:
        h2 = c2.get(h1.name)
        if h2 is None:
            out.append(h1)
            continue
        _same(h1, h2)
        both_plain = not h1.provisional and not h2.provisional
        if not t.C(h1.mode) and (both_plain or provisional_contraction):
            return None
        out.append(replace(h1, provisional=h1.provisional and h2.provisional))
    out.extend(h for h in c2 if h.name not in c1)
    return Context(out)


def merge_all(t: ModeTheory, ctxs: Iterable[Context], provisional_contraction: bool = True) -> Context | None:
    acc: Context | None = Context()
    for c in ctxs:
        acc = merge(t, acc, c, provisional_contraction)
        if acc is None:
            return None
    return acc


def remove(t: ModeTheory, xi: Context, x: str, a: Type, literal: bool = False, rule: str | None = None) -> Context:
    """``xi \\ x:a``.

    The defining equations, read literally, turn every provisional entry that
    is passed over while searching for ``x`` into a plain one.  ``literal``
    reproduces that reading; by default provisional entries are kept as they
    are, which is the reading under which removal has the three-case
    characterization and the checker stays complete.
    """
    h = xi.get(x)
    if h is not None:
        _same(h, Hyp(x, a))
    if not literal:
        if h is None and not t.W(a.mode):
            raise UnusedLinearVariable(x, rule)
        return xi.without(x)
    entries = list(xi)
    out: list[Hyp] = []
    found = False
    # equations peel entries from the right end of the context
    for e in reversed(entries):
        if found:
            out.append(e)
        elif e.name == x:
            found = True
        else:
            out.append(replace(e, provisional=False))
    if not found and not t.W(a.mode):
        raise UnusedLinearVariable(x, rule)
    return Context(reversed(out))


def restrict(t: ModeTheory, xi: Context, m: str, rule: str | None = None) -> Context:
    """``xi || m``: drop provisional entries below ``m``; plain ones are an error."""
    out = []
    for h in xi:
        if t.geq(h.mode, m):
            out.append(h)
        elif not h.provisional:
            raise IndependenceViolation(h.name, h.mode, m, rule)
    return Context(out)


def provisional_restrict(t: ModeTheory, gamma: Context, m: str) -> Context:
    """``[gamma | m]``: everything at or above ``m`` becomes maybe-used."""
    return Context(replace(h, provisional=True) for h in gamma if t.geq(h.mode, m))


def join(t: ModeTheory, xi1: Context, xi2: Context, rule: str | None = None) -> Context:
    out: list[Hyp] = []
    for h1 in xi1:
        h2 = xi2.get(h1.name)
        if h2 is not None:
            _same(h1, h2)
            out.append(replace(h1, provisional=h1.provisional and h2.provisional))
        elif not h1.provisional:
            if not t.W(h1.mode):
                raise JoinConflict(h1.name, rule)
            out.append(h1)
    for h2 in xi2:
        if h2.name in xi1:
            continue
        if not h2.provisional:
            if not t.W(h2.mode):
                raise JoinConflict(h2.name, rule)
            out.append(h2)
    return Context(out)


def refines(xi: Context, delta: Context) -> bool:
    """``xi ⊒ delta``: delta keeps every plain entry and any provisional ones."""
    for h in delta:
        g = xi.get(h.name)
        if g is None or g.type != h.type:
            return False
    return all(h.provisional or h.name in delta for h in xi)


def covers(t: ModeTheory, delta: Context, xi: Context) -> bool:
    """``delta >= xi``: xi mentions only delta's variables and drops only weakenable ones."""
    for h in xi:
        d = delta.get(h.name)
        if d is None or d.type != h.type:
            return False
    return all(h.name in xi or t.W(h.mode) for h in delta)


def refinements(xi: Context) -> list[Context]:
    """Every plain delta with ``xi ⊒ delta``."""
    plain = [replace(h, provisional=False) for h in xi if not h.provisional]
    prov = [replace(h, provisional=False) for h in xi if h.provisional]
    out = []
    for mask in range(1 << len(prov)):
        out.append(Context(plain + [h for i, h in enumerate(prov) if mask >> i & 1]))
    return out


def weakenable(t: ModeTheory, ctx: Iterable[Hyp]) -> bool:
    """Every entry may be dropped: its mode admits weakening or it is provisional."""
    return all(h.provisional or t.W(h.mode) for h in ctx)
