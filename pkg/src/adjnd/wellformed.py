"""Well-formedness of types and signatures."""

from __future__ import annotations

from . import ctxops
from .errors import (IllTypedDefinition, IndependenceViolation, ModeMismatch,
                     NonContractive, ShiftOrderViolation, TypeCheckError,
                     UnknownAtom, UnknownTypeName, UnusedLinearVariable)
from .modes import ModeTheory
from .syntax import (Atom, Down, Plus, Signature, TermDef, Type, TypeName, Up,
                     With, type_children)


def wf_type(t: ModeTheory, sig: Signature, a: Type) -> None:
    if isinstance(a, (Up, Down)):
        t.check(a.hi)
        t.check(a.lo)
        if not t.geq(a.hi, a.lo):
            arrow = "^" if isinstance(a, Up) else "v"
            raise ShiftOrderViolation(f"{arrow}[{a.hi}>{a.lo}] requires {a.hi} >= {a.lo}")
        inner = a.body.mode
        want = a.lo if isinstance(a, Up) else a.hi
        if inner != want:
            raise ModeMismatch(f"shift body has mode {inner}, expected {want}")
        wf_type(t, sig, a.body)
        return
    t.check(a.mode)
    if isinstance(a, TypeName):
        d = sig.types.get(a.name)
        if d is None:
            raise UnknownTypeName(f"unknown type name {a.name}")
        if d.mode != a.mode:
            raise ModeMismatch(f"type {a.name} is defined at mode {d.mode}, used at {a.mode}")
        return
    if isinstance(a, Atom):
        modes = sig.atoms.get(a.name)
        if modes is not None and a.mode not in modes:
            raise UnknownAtom(f"atom {a.name} is not declared at mode {a.mode}")
        return
    if isinstance(a, (With, Plus)):
        labels = [l for l, _ in a.fields]
        if len(labels) != len(set(labels)):
            raise ModeMismatch(f"duplicate label in {labels}")
    for c in type_children(a):
        if c.mode != a.mode:
            raise ModeMismatch(f"component of mode {c.mode} inside a connective at mode {a.mode}")
        wf_type(t, sig, c)


def check_definition(t: ModeTheory, sig: Signature, d: TermDef, **opts):
    """Check one contextual definition; returns the checker outcome."""
    from .checker.algorithmic import check_algorithmic
    try:
        for h in d.ctx:
            wf_type(t, sig, h.type)
            if not t.geq(h.mode, d.mode):
                raise IndependenceViolation(h.name, h.mode, d.mode, "def")
        wf_type(t, sig, d.type)
        out = check_algorithmic(t, sig, d.ctx, d.body, d.type, **opts)
        if not ctxops.covers(t, d.ctx, out.used):
            missing = next(h.name for h in d.ctx if h.name not in out.used and not t.W(h.mode))
            raise UnusedLinearVariable(missing, "def")
        return out
    except (TypeCheckError, ShiftOrderViolation, ModeMismatch, UnknownTypeName, UnknownAtom) as exc:
        raise IllTypedDefinition(d.name, exc) from exc


def wf_signature(t: ModeTheory, sig: Signature, **opts) -> Signature:
    """Validate every definition against the whole signature.

    Returns a copy of the signature whose term definitions carry elaborated
    bodies (mode and type stamps filled in).
    """
    for name, td in sig.types.items():
        t.check(td.mode)
        if isinstance(td.body, TypeName):
            raise NonContractive(name)
        if td.body.mode != td.mode:
            raise ModeMismatch(f"type {name} is declared at mode {td.mode} but its body has mode {td.body.mode}")
        wf_type(t, sig, td.body)
    # also rejects loops of names that the per-definition test cannot see
    for name, td in sig.types.items():
        sig.unfold(TypeName(name, td.mode))
    elaborated = []
    for d in sig.terms.values():
        out = check_definition(t, sig, d, **opts)
        elaborated.append(TermDef(d.name, d.ctx, d.type, out.elaborated))
    return sig.with_terms(elaborated)
