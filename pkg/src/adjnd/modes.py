"""Mode theories: a finite set of modes, each with a set of structural
properties, ordered by a preorder that must be monotone in those properties.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import DuplicateMode, MonotonicityViolation, UnknownMode


@dataclass(frozen=True)
class StructuralProps:
    weakening: bool = False
    contraction: bool = False

    def __le__(self, other: "StructuralProps") -> bool:
        return (not self.weakening or other.weakening) and (not self.contraction or other.contraction)

    def __str__(self) -> str:
        return "{" + ",".join(p for p, on in (("W", self.weakening), ("C", self.contraction)) if on) + "}"


@dataclass(frozen=True)
class ModeDecl:
    name: str
    weakening: bool = False
    contraction: bool = False


@dataclass(frozen=True)
class OrderEdge:
    hi: str
    lo: str


@dataclass(frozen=True)
class ModeTheory:
    modes: tuple[str, ...]
    sigma: Mapping[str, StructuralProps]
    order: frozenset[tuple[str, str]] = field(default_factory=frozenset)
    name: str = ""

    def __hash__(self) -> int:
        return hash((self.modes, self.order))

    def check(self, m: str) -> None:
        if m not in self.sigma:
            raise UnknownMode(m)

    def geq(self, m: str, k: str) -> bool:
        if (m, k) in self.order:
            return True
        self.check(m)
        self.check(k)
        return False

    def W(self, m: str) -> bool:
        return self.sigma[m].weakening

    def C(self, m: str) -> bool:
        return self.sigma[m].contraction

    def is_linear(self, m: str) -> bool:
        return not self.W(m) and not self.C(m)

    def is_strict(self, m: str) -> bool:
        return not self.W(m)

    def decls(self) -> list[ModeDecl | OrderEdge]:
        out: list[ModeDecl | OrderEdge] = [ModeDecl(m, self.W(m), self.C(m)) for m in self.modes]
        out += [OrderEdge(a, b) for a, b in sorted(self.order) if a != b]
        return out


def build_mode_theory(decls: Iterable[ModeDecl | OrderEdge], name: str = "") -> ModeTheory:
    modes: list[str] = []
    sigma: dict[str, StructuralProps] = {}
    edges: list[OrderEdge] = []
    for d in decls:
        if isinstance(d, ModeDecl):
            if d.name in sigma:
                raise DuplicateMode(d.name)
            modes.append(d.name)
            sigma[d.name] = StructuralProps(d.weakening, d.contraction)
        else:
            edges.append(d)
    order = {(m, m) for m in modes}
    for e in edges:
        for m in (e.hi, e.lo):
            if m not in sigma:
                raise UnknownMode(m)
        order.add((e.hi, e.lo))
    # transitive closure; mode sets are tiny so the cubic loop is fine
    changed = True
    while changed:
        changed = False
        for a, b in list(order):
            for c, d in list(order):
                if b == c and (a, d) not in order:
                    order.add((a, d))
                    changed = True
    for a, b in sorted(order):
        if not sigma[b] <= sigma[a]:
            raise MonotonicityViolation(a, b)
    return ModeTheory(tuple(sorted(modes)), dict(sigma), frozenset(order), name)


def mode_geq(t: ModeTheory, m: str, k: str) -> bool:
    return t.geq(m, k)


def _preset(name: str, *items: ModeDecl | OrderEdge) -> ModeTheory:
    return build_mode_theory(items, name)


PRESETS: dict[str, ModeTheory] = {
    "linear": _preset("linear", ModeDecl("L")),
    "affine": _preset("affine", ModeDecl("A", weakening=True)),
    "strict": _preset("strict", ModeDecl("S", contraction=True)),
    "unrestricted": _preset("unrestricted", ModeDecl("U", True, True)),
    "lnl": _preset("lnl", ModeDecl("U", True, True), ModeDecl("L"), OrderEdge("U", "L")),
    "s4": _preset("s4", ModeDecl("V", True, True), ModeDecl("U", True, True), OrderEdge("V", "U")),
    "lax": _preset("lax", ModeDecl("U", True, True), ModeDecl("X", True, True), OrderEdge("U", "X")),
}


def preset(name: str) -> ModeTheory:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise UnknownMode(f"preset {name}") from None


def ctx_geq(t: ModeTheory, ctx, m: str) -> bool:
    """Every hypothesis in ``ctx``, plain or provisional, has mode >= ``m``."""
    return all(t.geq(h.mode, m) for h in ctx)
