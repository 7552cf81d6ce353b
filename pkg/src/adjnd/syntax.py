"""Abstract syntax: mode-indexed types, bidirectional expressions, contexts of
plain and provisional hypotheses, substitutions and signatures.

Every type node carries the mode it lives at.  Connectives other than the two
shifts keep the mode of their children; ``Up(hi, lo, A)`` lives at ``hi`` with
``A`` at ``lo`` and ``Down(hi, lo, A)`` lives at ``lo`` with ``A`` at ``hi``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Union

from .errors import NonContractive, UnknownTypeName


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class Atom:
    name: str
    mode: str


@dataclass(frozen=True)
class Lolli:
    dom: "Type"
    cod: "Type"
    mode: str


@dataclass(frozen=True, eq=False)
class With:
    fields: tuple[tuple[str, "Type"], ...]
    mode: str

    def __eq__(self, other: object) -> bool:
        return isinstance(other, With) and self.mode == other.mode and dict(self.fields) == dict(other.fields)

    def __hash__(self) -> int:
        return hash(("&", self.mode, frozenset(self.fields)))

    def field(self, label: str) -> "Type | None":
        return dict(self.fields).get(label)


@dataclass(frozen=True)
class Up:
    hi: str
    lo: str
    body: "Type"

    @property
    def mode(self) -> str:
        return self.hi


@dataclass(frozen=True)
class Tensor:
    left: "Type"
    right: "Type"
    mode: str


@dataclass(frozen=True)
class One:
    mode: str


@dataclass(frozen=True, eq=False)
class Plus:
    fields: tuple[tuple[str, "Type"], ...]
    mode: str

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Plus) and self.mode == other.mode and dict(self.fields) == dict(other.fields)

    def __hash__(self) -> int:
        return hash(("+", self.mode, frozenset(self.fields)))

    def field(self, label: str) -> "Type | None":
        return dict(self.fields).get(label)


@dataclass(frozen=True)
class Down:
    hi: str
    lo: str
    body: "Type"

    @property
    def mode(self) -> str:
        return self.lo


@dataclass(frozen=True)
class TypeName:
    name: str
    mode: str


Type = Union[Atom, Lolli, With, Up, Tensor, One, Plus, Down, TypeName]


def type_children(a: Type) -> list[Type]:
    if isinstance(a, (Lolli,)):
        return [a.dom, a.cod]
    if isinstance(a, Tensor):
        return [a.left, a.right]
    if isinstance(a, (With, Plus)):
        return [t for _, t in a.fields]
    if isinstance(a, (Up, Down)):
        return [a.body]
    return []


def type_size(a: Type) -> int:
    return 1 + sum(type_size(c) for c in type_children(a))


def is_purely_positive(a: Type, sig: "Signature | None" = None, _seen: frozenset = frozenset()) -> bool:
    if isinstance(a, TypeName):
        if sig is None or a.name in _seen:
            return sig is not None
        return is_purely_positive(sig.unfold(a), sig, _seen | {a.name})
    if isinstance(a, One):
        return True
    if isinstance(a, Tensor):
        return is_purely_positive(a.left, sig, _seen) and is_purely_positive(a.right, sig, _seen)
    if isinstance(a, Plus):
        return all(is_purely_positive(t, sig, _seen) for _, t in a.fields)
    if isinstance(a, Down):
        return is_purely_positive(a.body, sig, _seen)
    return False


# ---------------------------------------------------------- expressions

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    var: str
    body: "Expr"


@dataclass(frozen=True)
class App:
    fn: "Expr"
    arg: "Expr"
    # elaboration: type of the function head
    ty: Type | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Record:
    fields: tuple[tuple[str, "Expr"], ...]


@dataclass(frozen=True)
class Proj:
    subj: "Expr"
    label: str
    ty: Type | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Susp:
    body: "Expr"
    hi: str | None = field(default=None, compare=False)
    lo: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Force:
    subj: "Expr"
    hi: str | None = field(default=None, compare=False)
    lo: str | None = field(default=None, compare=False)
    ty: Type | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Pair:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Inj:
    label: str
    body: "Expr"


@dataclass(frozen=True)
class DownI:
    body: "Expr"
    hi: str | None = field(default=None, compare=False)
    lo: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class PairArm:
    x1: str
    x2: str
    body: "Expr"


@dataclass(frozen=True)
class UnitArm:
    body: "Expr"


@dataclass(frozen=True)
class InjArms:
    branches: tuple[tuple[str, str, "Expr"], ...]


@dataclass(frozen=True)
class DownArm:
    var: str
    body: "Expr"


Arms = Union[PairArm, UnitArm, InjArms, DownArm]


@dataclass(frozen=True)
class Match:
    subj: "Expr"
    arms: Arms
    mode: str | None = field(default=None, compare=False)
    result: str | None = field(default=None, compare=False)
    ty: Type | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Annot:
    body: "Expr"
    type: Type


@dataclass(frozen=True)
class Call:
    name: str
    subst: tuple[tuple[str, "Expr"], ...]


@dataclass(frozen=True)
class Omega:
    """Placeholder of every type with no transition; used by erasure."""


Expr = Union[Var, Lam, App, Record, Proj, Susp, Force, Pair, Unit, Inj, DownI, Match, Annot, Call, Omega]

SYNTHESIZABLE = (Var, App, Proj, Force, Annot, Call)


def is_synthesizable(e: Expr) -> bool:
    return isinstance(e, SYNTHESIZABLE)


def arm_bodies(arms: Arms) -> list[tuple[tuple[str, ...], Expr]]:
    if isinstance(arms, PairArm):
        return [((arms.x1, arms.x2), arms.body)]
    if isinstance(arms, UnitArm):
        return [((), arms.body)]
    if isinstance(arms, InjArms):
        return [((x,), b) for _, x, b in arms.branches]
    return [((arms.var,), arms.body)]


def children(e: Expr) -> list[Expr]:
    if isinstance(e, Lam):
        return [e.body]
    if isinstance(e, App):
        return [e.fn, e.arg]
    if isinstance(e, Record):
        return [b for _, b in e.fields]
    if isinstance(e, (Proj, Force)):
        return [e.subj]
    if isinstance(e, (Susp, DownI, Inj, Annot)):
        return [e.body]
    if isinstance(e, Pair):
        return [e.left, e.right]
    if isinstance(e, Match):
        return [e.subj] + [b for _, b in arm_bodies(e.arms)]
    if isinstance(e, Call):
        return [b for _, b in e.subst]
    return []


def expr_size(e: Expr) -> int:
    return 1 + sum(expr_size(c) for c in children(e))


def subterms(e: Expr) -> Iterator[Expr]:
    yield e
    for c in children(e):
        yield from subterms(c)


def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset([e.name])
    if isinstance(e, Lam):
        return free_vars(e.body) - {e.var}
    if isinstance(e, Match):
        out = set(free_vars(e.subj))
        for xs, b in arm_bodies(e.arms):
            out |= free_vars(b) - set(xs)
        return frozenset(out)
    out: set[str] = set()
    for c in children(e):
        out |= free_vars(c)
    return frozenset(out)


def bound_vars(e: Expr) -> set[str]:
    out: set[str] = set()
    for t in subterms(e):
        if isinstance(t, Lam):
            out.add(t.var)
        elif isinstance(t, Match):
            for xs, _ in arm_bodies(t.arms):
                out.update(xs)
    return out


def rebuild_arms(arms: Arms, fn) -> Arms:
    """Apply ``fn(binders, body) -> (binders, body)`` to every arm."""
    if isinstance(arms, PairArm):
        (x1, x2), b = fn((arms.x1, arms.x2), arms.body)
        return PairArm(x1, x2, b)
    if isinstance(arms, UnitArm):
        _, b = fn((), arms.body)
        return UnitArm(b)
    if isinstance(arms, InjArms):
        out = []
        for lab, x, b in arms.branches:
            (x2,), b2 = fn((x,), b)
            out.append((lab, x2, b2))
        return InjArms(tuple(out))
    (x,), b = fn((arms.var,), arms.body)
    return DownArm(x, b)


def map_children(e: Expr, f) -> Expr:
    """Rebuild ``e`` with ``f`` applied to immediate subterms, keeping binders."""
    if isinstance(e, Lam):
        return Lam(e.var, f(e.body))
    if isinstance(e, App):
        return replace(e, fn=f(e.fn), arg=f(e.arg))
    if isinstance(e, Record):
        return Record(tuple((l, f(b)) for l, b in e.fields))
    if isinstance(e, Proj):
        return replace(e, subj=f(e.subj))
    if isinstance(e, Force):
        return replace(e, subj=f(e.subj))
    if isinstance(e, (Susp, DownI, Annot)):
        return replace(e, body=f(e.body))
    if isinstance(e, Inj):
        return Inj(e.label, f(e.body))
    if isinstance(e, Pair):
        return Pair(f(e.left), f(e.right))
    if isinstance(e, Match):
        return replace(e, subj=f(e.subj), arms=rebuild_arms(e.arms, lambda xs, b: (xs, f(b))))
    if isinstance(e, Call):
        return Call(e.name, tuple((x, f(b)) for x, b in e.subst))
    return e


def prime(name: str, taken: set[str] | frozenset[str]) -> str:
    cand = name + "'"
    while cand in taken:
        cand += "'"
    return cand


class FreshNames:
    """Supply of names that never collide with anything seen so far."""

    def __init__(self, sep: str = "_"):
        self.sep = sep
        self.counter = itertools.count(1)

    def __call__(self, base: str = "v") -> str:
        base = base.split(self.sep)[0] or "v"
        return f"{base}{self.sep}{next(self.counter)}"


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Capture-avoiding simultaneous substitution of expressions for variables."""
    if not mapping:
        return e
    range_fv: set[str] = set()
    for s in mapping.values():
        range_fv |= free_vars(s)
    return _subst(e, dict(mapping), range_fv)


def _subst(e: Expr, m: dict[str, Expr], avoid: set[str]) -> Expr:
    if isinstance(e, Var):
        return m.get(e.name, e)
    if isinstance(e, Lam):
        (x,), b = _subst_binders((e.var,), e.body, m, avoid)
        return Lam(x, b)
    if isinstance(e, Match):
        subj = _subst(e.subj, m, avoid)
        arms = rebuild_arms(e.arms, lambda xs, b: _subst_binders(xs, b, m, avoid))
        return replace(e, subj=subj, arms=arms)
    return map_children(e, lambda c: _subst(c, m, avoid))


def _subst_binders(xs: tuple[str, ...], body: Expr, m: dict[str, Expr], avoid: set[str]):
    inner = {k: v for k, v in m.items() if k not in xs}
    if not inner:
        return xs, body
    new_xs = []
    for x in xs:
        if x in avoid:
            taken = avoid | free_vars(body) | set(inner) | set(new_xs)
            y = prime(x, taken)
            inner[x] = Var(y)
            new_xs.append(y)
        else:
            new_xs.append(x)
    return tuple(new_xs), _subst(body, inner, avoid | set(new_xs))


def subst_expr(s: Expr, x: str, target: Expr) -> Expr:
    return substitute(target, {x: s})


def rename_var(e: Expr, old: str, new: str) -> Expr:
    return substitute(e, {old: Var(new)})


def rename_apart(e: Expr, avoid: Iterable[str] = ()) -> Expr:
    """Rename binders so that every binder is distinct from every other binder
    and from every free variable."""
    taken = set(avoid) | set(free_vars(e))
    return _apart(e, {}, taken)


def _apart(e: Expr, env: dict[str, str], taken: set[str]) -> Expr:
    if isinstance(e, Var):
        return Var(env.get(e.name, e.name))

    def bind(xs: tuple[str, ...], body: Expr):
        inner = dict(env)
        out = []
        for x in xs:
            y = x if x not in taken else prime(x, taken)
            taken.add(y)
            inner[x] = y
            out.append(y)
        return tuple(out), _apart(body, inner, taken)

    if isinstance(e, Lam):
        (x,), b = bind((e.var,), e.body)
        return Lam(x, b)
    if isinstance(e, Match):
        subj = _apart(e.subj, env, taken)
        return replace(e, subj=subj, arms=rebuild_arms(e.arms, bind))
    return map_children(e, lambda c: _apart(c, env, taken))


def alpha_eq(a: Expr, b: Expr) -> bool:
    return _aeq(a, b, {}, {}, itertools.count())


def _aeq(a: Expr, b: Expr, ea: dict, eb: dict, ctr) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        return ea.get(a.name, ("free", a.name)) == eb.get(b.name, ("free", b.name))

    def binders(xs, ys, ba, bb):
        if len(xs) != len(ys):
            return False
        ea2, eb2 = dict(ea), dict(eb)
        for x, y in zip(xs, ys):
            n = next(ctr)
            ea2[x] = n
            eb2[y] = n
        return _aeq(ba, bb, ea2, eb2, ctr)

    if isinstance(a, Lam):
        return binders((a.var,), (b.var,), a.body, b.body)
    if isinstance(a, Match):
        if not _aeq(a.subj, b.subj, ea, eb, ctr) or type(a.arms) is not type(b.arms):
            return False
        if isinstance(a.arms, InjArms):
            da = {l: (x, e) for l, x, e in a.arms.branches}
            db = {l: (x, e) for l, x, e in b.arms.branches}
            if set(da) != set(db):
                return False
            return all(binders((da[l][0],), (db[l][0],), da[l][1], db[l][1]) for l in da)
        (xa, ba), = arm_bodies(a.arms)
        (xb, bb), = arm_bodies(b.arms)
        return binders(xa, xb, ba, bb)
    if isinstance(a, Record):
        da, db = dict(a.fields), dict(b.fields)
        return set(da) == set(db) and all(_aeq(da[l], db[l], ea, eb, ctr) for l in da)
    if isinstance(a, (Proj, Inj)) and a.label != b.label:
        return False
    if isinstance(a, Annot) and a.type != b.type:
        return False
    if isinstance(a, Call):
        if a.name != b.name or [x for x, _ in a.subst] != [x for x, _ in b.subst]:
            return False
    ca, cb = children(a), children(b)
    return len(ca) == len(cb) and all(_aeq(x, y, ea, eb, ctr) for x, y in zip(ca, cb))


def strip_annotations(e: Expr) -> Expr:
    """Clear elaboration metadata (mode and type stamps)."""
    e = map_children(e, strip_annotations)
    if isinstance(e, (App, Proj)):
        return replace(e, ty=None)
    if isinstance(e, (Susp, DownI)):
        return replace(e, hi=None, lo=None)
    if isinstance(e, Force):
        return replace(e, hi=None, lo=None, ty=None)
    if isinstance(e, Match):
        return replace(e, mode=None, result=None, ty=None)
    return e


# ------------------------------------------------------------- contexts

@dataclass(frozen=True)
class Hyp:
    name: str
    type: Type
    provisional: bool = False

    @property
    def mode(self) -> str:
        return self.type.mode


class Context:
    """Name-keyed, insertion-ordered set of hypotheses.  Equality ignores order."""

    __slots__ = ("_d",)

    def __init__(self, entries: Iterable[Hyp] = ()):
        d: dict[str, Hyp] = {}
        for h in entries:
            if h.name in d:
                raise ValueError(f"duplicate variable {h.name} in context")
            d[h.name] = h
        self._d = d

    @staticmethod
    def of(*pairs: tuple[str, Type], provisional: bool = False) -> "Context":
        return Context(Hyp(x, a, provisional) for x, a in pairs)

    def __iter__(self) -> Iterator[Hyp]:
        return iter(self._d.values())

    def __len__(self) -> int:
        return len(self._d)

    def __contains__(self, x: str) -> bool:
        return x in self._d

    def __getitem__(self, x: str) -> Hyp:
        return self._d[x]

    def get(self, x: str) -> Hyp | None:
        return self._d.get(x)

    def names(self) -> list[str]:
        return list(self._d)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Context) and self._d == other._d

    def __hash__(self) -> int:
        return hash(frozenset(self._d.values()))

    def __repr__(self) -> str:
        return "Context(" + ", ".join(
            (f"[{h.name}:{h.type}]" if h.provisional else f"{h.name}:{h.type}") for h in self) + ")"

    def add(self, h: Hyp) -> "Context":
        return Context(list(self) + [h])

    def extend(self, x: str, a: Type, provisional: bool = False) -> "Context":
        return self.add(Hyp(x, a, provisional))

    def without(self, *xs: str) -> "Context":
        return Context(h for h in self if h.name not in xs)

    def only(self, xs: Iterable[str]) -> "Context":
        keep = set(xs)
        return Context(h for h in self if h.name in keep)

    def plain(self) -> "Context":
        return Context(h for h in self if not h.provisional)

    def is_plain(self) -> bool:
        return not any(h.provisional for h in self)

    def as_plain(self) -> "Context":
        return Context(replace(h, provisional=False) for h in self)

    def rename(self, old: str, new: str) -> "Context":
        return Context(replace(h, name=new) if h.name == old else h for h in self)


EMPTY = Context()


# ----------------------------------------------------------- signatures

@dataclass(frozen=True)
class TypeDef:
    name: str
    mode: str
    body: Type


@dataclass(frozen=True)
class TermDef:
    name: str
    ctx: Context
    type: Type
    body: Expr

    @property
    def mode(self) -> str:
        return self.type.mode


@dataclass
class Signature:
    types: dict[str, TypeDef] = field(default_factory=dict)
    terms: dict[str, TermDef] = field(default_factory=dict)
    atoms: dict[str, frozenset[str]] = field(default_factory=dict)

    def unfold(self, a: Type) -> Type:
        """Unfold type names at the head until a constructor appears."""
        seen: set[str] = set()
        while isinstance(a, TypeName):
            if a.name in seen:
                raise NonContractive(a.name)
            seen.add(a.name)
            d = self.types.get(a.name)
            if d is None:
                raise UnknownTypeName(f"unknown type name {a.name}")
            a = d.body
        return a

    def with_terms(self, defs: Iterable[TermDef]) -> "Signature":
        terms = dict(self.terms)
        for d in defs:
            terms[d.name] = d
        return Signature(dict(self.types), terms, dict(self.atoms))


EMPTY_SIG = Signature()
