"""Equirecursive type equality by bisimulation with an assumption cache."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..syntax import (Atom, Down, Lolli, One, Plus, Signature, Tensor, Type,
                      TypeName, Up, With)


@dataclass
class TypeEqState:
    assumed: set[tuple[Type, Type]] = field(default_factory=set)


def type_equal(sig: Signature, a: Type, b: Type, st: TypeEqState | None = None) -> bool:
    if a == b:
        return True
    if st is None:
        st = TypeEqState()
    return _eq(sig, a, b, st)


def _eq(sig: Signature, a: Type, b: Type, st: TypeEqState) -> bool:
    if a == b:
        return True
    if a.mode != b.mode:
        return False
    if isinstance(a, TypeName) or isinstance(b, TypeName):
        if (a, b) in st.assumed:
            return True
        st.assumed.add((a, b))
        return _eq(sig, sig.unfold(a), sig.unfold(b), st)
    if type(a) is not type(b):
        return False
    if isinstance(a, Atom):
        return a.name == b.name
    if isinstance(a, One):
        return True
    if isinstance(a, Lolli):
        return _eq(sig, a.dom, b.dom, st) and _eq(sig, a.cod, b.cod, st)
    if isinstance(a, Tensor):
        return _eq(sig, a.left, b.left, st) and _eq(sig, a.right, b.right, st)
    if isinstance(a, (With, Plus)):
        da, db = dict(a.fields), dict(b.fields)
        return set(da) == set(db) and all(_eq(sig, da[l], db[l], st) for l in da)
    if isinstance(a, (Up, Down)):
        return a.hi == b.hi and a.lo == b.lo and _eq(sig, a.body, b.body, st)
    return False
