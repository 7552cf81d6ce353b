"""Concrete syntax: lexer, parser, mode resolution and printers.

Parsing runs in two phases.  The first builds declarations with raw types
whose modes are still unknown; the second resolves every type once all mode,
atom and type declarations of the file are known, so declarations may appear
in any order.  A type's mode is read off its outermost shift, type name or
uniquely declared atom and then pushed inward; shifts carry the modes of
their bodies.  When the outermost structure does not determine a mode (for
instance ``1`` in a theory with several modes) the hypothesis, annotation or
definition can say ``@ M``.

Two spacing rules keep the grammar small: ``l(e)`` with no space is an
injection, while application needs whitespace (``f (e)``); likewise ``f[...]``
directly after a name is a call and ``v[n>m]`` directly after ``v`` is a
down-shift.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .errors import (ModeMismatch, SyntaxErrorAt, UnknownAtom, UnknownMode,
                     UserError)
from .modes import ModeDecl, ModeTheory, OrderEdge, build_mode_theory, preset
from .syntax import (Annot, App, Atom, Call, Context, Down, DownArm, DownI, Expr,
                     Force, Hyp, Inj, InjArms, Lam, Lolli, Match, One, Omega,
                     Pair, PairArm, Plus, Proj, Record, Signature, Susp,
                     Tensor, TermDef, Type, TypeDef, TypeName, Unit, UnitArm,
                     Up, Var, With, map_children, rename_apart)

KEYWORDS = {"mode", "order", "prop", "type", "def", "main", "match", "susp", "force", "down"}
DECL_KEYWORDS = {"mode", "order", "prop", "type", "def", "main"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<num>[0-9]+)
  | (?P<sym>-o|>=|=>|[\\.(){}\[\]^&+*:,=@>])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, num, sym, eof
    text: str
    line: int
    col: int
    adjacent: bool  # no whitespace before this token


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, col = 0, 1, 1
    adjacent = False
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SyntaxErrorAt(line, col, f"a token, found {text[pos]!r}")
        s = m.group()
        if m.lastgroup == "ws":
            adjacent = False
        else:
            out.append(Token(m.lastgroup, s, line, col, adjacent))
            adjacent = True
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    out.append(Token("eof", "", line, col, False))
    return out


# ------------------------------------------------------------- raw types

@dataclass(frozen=True)
class RType:
    kind: str  # name one with plus lolli tensor up down
    args: tuple
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class RAnnot:
    """Placeholder for an annotation type awaiting mode resolution."""
    rtype: RType
    mode: str | None


@dataclass
class RawDef:
    name: str
    hyps: list[tuple[str, RType, str | None]]
    rtype: RType
    mode: str | None
    body: Expr
    line: int


@dataclass
class SourceFile:
    theory: ModeTheory
    signature: Signature
    main: str | None = None
    mode_decls: list = field(default_factory=list)
    props: list[tuple[str, str]] = field(default_factory=list)
    declared_modes: bool = True

    @property
    def defs(self) -> list[TermDef]:
        return list(self.signature.terms.values())


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "ident", "num") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def fail(self, expected: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise SyntaxErrorAt(t.line, t.col, f"{expected}, found {found}")

    def ident(self, what: str = "an identifier") -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail(what)
        self.i += 1
        return t.text

    def mode_name(self) -> str:
        return self.ident("a mode name")

    # -- declarations

    def parse_file(self):
        modes: list = []
        props: list[tuple[str, str]] = []
        types: list[tuple[str, str | None, RType, int]] = []
        defs: list[RawDef] = []
        main = None
        while self.tok.kind != "eof":
            t = self.tok
            if self.at("mode"):
                self.advance()
                name = self.mode_name()
                w = c = False
                if self.at("with"):
                    self.advance()
                    while self.tok.kind == "ident" and self.tok.text in ("W", "C"):
                        if self.advance().text == "W":
                            w = True
                        else:
                            c = True
                modes.append(ModeDecl(name, w, c))
            elif self.at("order"):
                self.advance()
                hi = self.mode_name()
                self.expect(">=")
                modes.append(OrderEdge(hi, self.mode_name()))
            elif self.at("prop"):
                self.advance()
                name = self.ident("a proposition name")
                self.expect("@")
                props.append((name, self.mode_name()))
            elif self.at("type"):
                self.advance()
                name = self.ident("a type name")
                mode = None
                if self.at("@"):
                    self.advance()
                    mode = self.mode_name()
                self.expect("=")
                types.append((name, mode, self.type_(), t.line))
            elif self.at("def"):
                self.advance()
                defs.append(self.definition(t.line))
            elif self.at("main"):
                self.advance()
                main = self.ident("a definition name")
            else:
                self.fail("a declaration (mode, order, prop, type, def or main)")
        return modes, props, types, defs, main

    def definition(self, line: int) -> RawDef:
        name = self.ident("a definition name")
        self.expect("[")
        hyps = []
        if not self.at("]"):
            while True:
                x = self.ident("a variable")
                self.expect(":")
                a = self.type_()
                hyps.append((x, a, self.mode_suffix()))
                if not self.at(","):
                    break
                self.advance()
        self.expect("]")
        self.expect(":")
        a = self.type_()
        mode = self.mode_suffix()
        self.expect("=")
        return RawDef(name, hyps, a, mode, self.expr(), line)

    def mode_suffix(self) -> str | None:
        if self.at("@"):
            self.advance()
            return self.mode_name()
        return None

    # -- types

    def type_(self) -> RType:
        t = self.tok
        left = self.tensor()
        if self.at("-o"):
            self.advance()
            return RType("lolli", (left, self.type_()), t.line, t.col)
        return left

    def tensor(self) -> RType:
        t = self.tok
        left = self.prefix_type()
        while self.at("*"):
            self.advance()
            left = RType("tensor", (left, self.prefix_type()), t.line, t.col)
        return left

    def prefix_type(self) -> RType:
        t = self.tok
        if self.at("^") or (self.at("v") and self.peek().text == "[" and self.peek().adjacent):
            kind = "up" if self.advance().text == "^" else "down"
            self.expect("[")
            hi = self.mode_name()
            self.expect(">")
            lo = self.mode_name()
            self.expect("]")
            return RType(kind, (hi, lo, self.prefix_type()), t.line, t.col)
        return self.atomic_type()

    def atomic_type(self) -> RType:
        t = self.tok
        if t.kind == "num":
            if t.text != "1":
                self.fail("a type")
            self.advance()
            return RType("one", (), t.line, t.col)
        if self.at("&") or self.at("+"):
            kind = "with" if self.advance().text == "&" else "plus"
            self.expect("{")
            fields = []
            if not self.at("}"):
                while True:
                    l = self.ident("a label")
                    self.expect(":")
                    fields.append((l, self.type_()))
                    if not self.at(","):
                        break
                    self.advance()
            self.expect("}")
            return RType(kind, tuple(fields), t.line, t.col)
        if self.at("("):
            self.advance()
            a = self.type_()
            self.expect(")")
            return a
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.advance()
            return RType("name", (t.text,), t.line, t.col)
        self.fail("a type")

    # -- expressions

    def starts_low(self) -> bool:
        return self.at("\\") or self.at("susp") or self.at("down") or self.at("match")

    def starts_arg(self) -> bool:
        t = self.tok
        if t.kind == "ident":
            return t.text not in KEYWORDS or t.text == "force"
        return self.at("(") or self.at("{")

    def expr(self) -> Expr:
        if self.at("\\"):
            self.advance()
            x = self.ident("a variable")
            self.expect(".")
            return Lam(x, self.expr())
        if self.at("susp"):
            self.advance()
            return Susp(self.expr())
        if self.at("down"):
            self.advance()
            return DownI(self.expr())
        if self.at("match"):
            self.advance()
            subj = self.app(allow_brace=False)
            return Match(subj, self.arms())
        return self.app()

    def app(self, allow_brace: bool = True) -> Expr:
        e = self.force_expr()
        while True:
            if self.starts_low() and allow_brace:
                return App(e, self.expr())
            if self.starts_arg() and (allow_brace or not self.at("{")):
                e = App(e, self.force_expr())
                continue
            return e

    def force_expr(self) -> Expr:
        if self.at("force"):
            self.advance()
            return Force(self.force_expr())
        return self.postfix()

    def postfix(self) -> Expr:
        e = self.primary()
        while self.at("."):
            self.advance()
            e = Proj(e, self.ident("a label"))
        return e

    def primary(self) -> Expr:
        t = self.tok
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.advance()
            nxt = self.tok
            if nxt.text == "(" and nxt.adjacent:
                self.advance()
                body = self.expr()
                self.expect(")")
                return Inj(t.text, body)
            if nxt.text == "[" and nxt.adjacent:
                self.advance()
                subst = []
                if not self.at("]"):
                    while True:
                        x = self.ident("a variable")
                        self.expect("=>")
                        subst.append((x, self.expr()))
                        if not self.at(","):
                            break
                        self.advance()
                self.expect("]")
                return Call(t.text, tuple(subst))
            return Var(t.text)
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                return Unit()
            e = self.expr()
            if self.at(","):
                self.advance()
                e2 = self.expr()
                self.expect(")")
                return Pair(e, e2)
            if self.at(":"):
                self.advance()
                a = self.type_()
                mode = self.mode_suffix()
                self.expect(")")
                return Annot(e, RAnnot(a, mode))
            self.expect(")")
            return e
        if self.at("{"):
            self.advance()
            fields = []
            if not self.at("}"):
                while True:
                    l = self.ident("a label")
                    self.expect("=>")
                    fields.append((l, self.expr()))
                    if not self.at(","):
                        break
                    self.advance()
            self.expect("}")
            return Record(tuple(fields))
        self.fail("an expression")

    def arms(self):
        self.expect("{")
        if self.at("}"):
            self.advance()
            return InjArms(())
        if self.at("down"):
            self.advance()
            x = self.ident("a variable")
            self.expect("=>")
            body = self.expr()
            self.expect("}")
            return DownArm(x, body)
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                self.expect("=>")
                body = self.expr()
                self.expect("}")
                return UnitArm(body)
            x1 = self.ident("a variable")
            self.expect(",")
            x2 = self.ident("a variable")
            self.expect(")")
            self.expect("=>")
            body = self.expr()
            self.expect("}")
            return PairArm(x1, x2, body)
        branches = []
        while True:
            l = self.ident("a label")
            self.expect("(")
            x = self.ident("a variable")
            self.expect(")")
            self.expect("=>")
            branches.append((l, x, self.expr()))
            if not self.at(","):
                break
            self.advance()
        self.expect("}")
        return InjArms(tuple(branches))


# ------------------------------------------------------------ resolution

class Resolver:
    def __init__(self, theory: ModeTheory, atoms: dict[str, frozenset[str]], type_modes: dict[str, str]):
        self.t = theory
        self.atoms = atoms
        self.type_modes = type_modes

    def _err(self, r: RType, exc_type, msg: str):
        return exc_type(f"{r.line}:{r.col}: {msg}") if r.line else exc_type(msg)

    def infer(self, r: RType) -> str | None:
        k = r.kind
        if k == "name":
            n = r.args[0]
            if n in self.type_modes:
                return self.type_modes[n]
            modes = self.atoms.get(n, frozenset())
            return next(iter(modes)) if len(modes) == 1 else None
        if k == "up":
            return r.args[0]
        if k == "down":
            return r.args[1]
        if k in ("with", "plus"):
            kids = [a for _, a in r.args]
        elif k in ("lolli", "tensor"):
            kids = list(r.args)
        else:
            kids = []
        for c in kids:
            m = self.infer(c)
            if m is not None:
                return m
        return None

    def top_mode(self, r: RType, given: str | None, what: str) -> str:
        if given is not None:
            self.t.check(given)
            return given
        m = self.infer(r)
        if m is None and len(self.t.modes) == 1:
            m = self.t.modes[0]
        if m is None:
            raise self._err(r, ModeMismatch, f"cannot determine the mode of {what}; add @ <mode>")
        return m

    def resolve(self, r: RType, mode: str) -> Type:
        k = r.kind
        self.t.check(mode)
        if k == "name":
            n = r.args[0]
            if n in self.type_modes:
                if self.type_modes[n] != mode:
                    raise self._err(r, ModeMismatch, f"type {n} has mode {self.type_modes[n]}, expected {mode}")
                return TypeName(n, mode)
            modes = self.atoms.get(n)
            if modes is None:
                raise self._err(r, UnknownAtom, f"{n} is neither a type nor a declared proposition")
            if mode not in modes:
                raise self._err(r, UnknownAtom, f"proposition {n} is not declared at mode {mode}")
            return Atom(n, mode)
        if k == "one":
            return One(mode)
        if k in ("with", "plus"):
            fields = tuple((l, self.resolve(a, mode)) for l, a in r.args)
            return With(fields, mode) if k == "with" else Plus(fields, mode)
        if k == "lolli":
            return Lolli(self.resolve(r.args[0], mode), self.resolve(r.args[1], mode), mode)
        if k == "tensor":
            return Tensor(self.resolve(r.args[0], mode), self.resolve(r.args[1], mode), mode)
        hi, lo, body = r.args
        for m in (hi, lo):
            if m not in self.t.sigma:
                raise self._err(r, UnknownMode, m)
        if k == "up":
            if hi != mode:
                raise self._err(r, ModeMismatch, f"^[{hi}>{lo}] has mode {hi}, expected {mode}")
            return Up(hi, lo, self.resolve(body, lo))
        if lo != mode:
            raise self._err(r, ModeMismatch, f"v[{hi}>{lo}] has mode {lo}, expected {mode}")
        return Down(hi, lo, self.resolve(body, hi))

    def resolve_top(self, r: RType, given: str | None, what: str) -> Type:
        return self.resolve(r, self.top_mode(r, given, what))

    def expr(self, e: Expr) -> Expr:
        if isinstance(e, Annot) and isinstance(e.type, RAnnot):
            a = self.resolve_top(e.type.rtype, e.type.mode, "an annotation")
            return Annot(self.expr(e.body), a)
        return map_children(e, self.expr)


def _theory_from(decls, preset_name: str | None) -> tuple[ModeTheory, bool]:
    if any(isinstance(d, ModeDecl) for d in decls):
        return build_mode_theory(decls, "file"), True
    if decls:
        raise UnknownMode(decls[0].hi)
    if preset_name is None:
        raise UserError("the file declares no modes; pass a preset theory")
    return preset(preset_name), False


def parse(text: str, preset_name: str | None = None) -> SourceFile:
    """Parse and resolve a whole ``.adj`` file.  In-file mode declarations win
    over ``preset_name``, which is only consulted when the file has none."""
    modes, props, types, defs, main = Parser(text).parse_file()
    theory, declared = _theory_from(modes, preset_name)
    atoms: dict[str, set[str]] = {}
    for name, m in props:
        theory.check(m)
        atoms.setdefault(name, set()).add(m)
    fatoms = {k: frozenset(v) for k, v in atoms.items()}
    # type definition modes: declared ones, then inferred to a fixpoint
    type_modes: dict[str, str] = {}
    for name, m, _, _ in types:
        if m is not None:
            theory.check(m)
            type_modes[name] = m
    pending = [(n, r) for n, m, r, _ in types if m is None]
    names = {n for n, _, _, _ in types}
    while pending:
        res = Resolver(theory, fatoms, {n: m for n, m in type_modes.items()})
        # names without a mode yet must not be mistaken for atoms
        progress = False
        rest = []
        for n, r in pending:
            m = _infer_skipping(res, r, names - set(type_modes))
            if m is None:
                rest.append((n, r))
            else:
                type_modes[n] = m
                progress = True
        pending = rest
        if not progress:
            if len(theory.modes) == 1:
                for n, _ in pending:
                    type_modes[n] = theory.modes[0]
                break
            n, r = pending[0]
            raise ModeMismatch(f"{r.line}:{r.col}: cannot determine the mode of type {n}; write type {n} @ <mode>")
    res = Resolver(theory, fatoms, type_modes)
    sig = Signature(atoms=fatoms)
    for n, _, r, _ in types:
        sig.types[n] = TypeDef(n, type_modes[n], res.resolve(r, type_modes[n]))
    for d in defs:
        ctx = Context(Hyp(x, res.resolve_top(r, m, f"hypothesis {x}")) for x, r, m in d.hyps)
        a = res.resolve_top(d.rtype, d.mode, f"the result of {d.name}")
        body = rename_apart(res.expr(d.body), ctx.names())
        sig.terms[d.name] = TermDef(d.name, ctx, a, body)
    return SourceFile(theory, sig, main, modes, props, declared)


def _infer_skipping(res: Resolver, r: RType, unknown: set[str]) -> str | None:
    if r.kind == "name" and r.args[0] in unknown:
        return None
    if r.kind in ("with", "plus"):
        kids = [a for _, a in r.args]
    elif r.kind in ("lolli", "tensor"):
        kids = list(r.args)
    else:
        return res.infer(r)
    for c in kids:
        m = _infer_skipping(res, c, unknown)
        if m is not None:
            return m
    return None


def parse_type(text: str, theory: ModeTheory, sig: Signature | None = None, mode: str | None = None) -> Type:
    p = Parser(text)
    r = p.type_()
    given = p.mode_suffix()
    if p.tok.kind != "eof":
        p.fail("end of type")
    sig = sig or Signature()
    res = Resolver(theory, sig.atoms or _all_atoms(r, theory),
                   {n: d.mode for n, d in sig.types.items()})
    return res.resolve_top(r, mode or given, "the type")


def parse_expr(text: str, theory: ModeTheory, sig: Signature | None = None) -> Expr:
    p = Parser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail("end of expression")
    sig = sig or Signature()
    atoms = sig.atoms or _atoms_in_expr(e, theory)
    return Resolver(theory, atoms, {n: d.mode for n, d in sig.types.items()}).expr(e)


def _all_atoms(r: RType, theory: ModeTheory) -> dict[str, frozenset[str]]:
    """Without declarations every bare name is a proposition at every mode."""
    out: dict[str, frozenset[str]] = {}
    stack = [r]
    while stack:
        x = stack.pop()
        if x.kind == "name":
            out[x.args[0]] = frozenset(theory.modes)
        elif x.kind in ("with", "plus"):
            stack.extend(a for _, a in x.args)
        elif x.kind in ("lolli", "tensor"):
            stack.extend(x.args)
        elif x.kind in ("up", "down"):
            stack.append(x.args[2])
    return out


def _atoms_in_expr(e: Expr, theory: ModeTheory) -> dict[str, frozenset[str]]:
    from .syntax import subterms
    out: dict[str, frozenset[str]] = {}
    for s in subterms(e):
        if isinstance(s, Annot) and isinstance(s.type, RAnnot):
            out.update(_all_atoms(s.type.rtype, theory))
    return out


# -------------------------------------------------------------- printing

def print_type(a: Type, prec: int = 0) -> str:
    if isinstance(a, Lolli):
        s = f"{print_type(a.dom, 1)} -o {print_type(a.cod, 0)}"
        return s if prec <= 0 else f"({s})"
    if isinstance(a, Tensor):
        s = f"{print_type(a.left, 1)} * {print_type(a.right, 2)}"
        return s if prec <= 1 else f"({s})"
    if isinstance(a, Up):
        s = f"^[{a.hi}>{a.lo}] {print_type(a.body, 2)}"
        return s if prec <= 2 else f"({s})"
    if isinstance(a, Down):
        s = f"v[{a.hi}>{a.lo}] {print_type(a.body, 2)}"
        return s if prec <= 2 else f"({s})"
    if isinstance(a, One):
        return "1"
    if isinstance(a, With):
        return "&{" + ", ".join(f"{l}:{print_type(b)}" for l, b in a.fields) + "}"
    if isinstance(a, Plus):
        return "+{" + ", ".join(f"{l}:{print_type(b)}" for l, b in a.fields) + "}"
    return a.name


def _needs_mode(a: Type, theory: ModeTheory | None) -> bool:
    if theory is not None and len(theory.modes) == 1:
        return False
    return not isinstance(a, (Up, Down))


def print_annotated_type(a: Type, theory: ModeTheory | None = None) -> str:
    s = print_type(a)
    return f"{s} @ {a.mode}" if _needs_mode(a, theory) else s


def print_expr(e: Expr, prec: int = 0, theory: ModeTheory | None = None) -> str:
    """Levels: 0 binders and prefix forms, 1 application, 2 force, 3 projection, 4 atoms."""
    p = lambda x, q=0: print_expr(x, q, theory)

    def wrap(s: str, level: int) -> str:
        return s if prec <= level else f"({s})"

    if isinstance(e, Var):
        return e.name
    if isinstance(e, Lam):
        return wrap(f"\\{e.var}. {p(e.body)}", 0)
    if isinstance(e, Susp):
        return wrap(f"susp {p(e.body)}", 0)
    if isinstance(e, DownI):
        return wrap(f"down {p(e.body)}", 0)
    if isinstance(e, Match):
        subj = p(e.subj, 1)
        if isinstance(e.subj, App):
            subj = f"({subj})"
        return wrap(f"match {subj} {_print_arms(e.arms, p)}", 0)
    if isinstance(e, App):
        return wrap(f"{p(e.fn, 1)} {p(e.arg, 2)}", 1)
    if isinstance(e, Force):
        return wrap(f"force {p(e.subj, 2)}", 2)
    if isinstance(e, Proj):
        return wrap(f"{p(e.subj, 3)}.{e.label}", 3)
    if isinstance(e, Unit):
        return "()"
    if isinstance(e, Pair):
        return f"({p(e.left)}, {p(e.right)})"
    if isinstance(e, Annot):
        return f"({p(e.body)} : {print_annotated_type(e.type, theory)})"
    if isinstance(e, Record):
        return "{" + ", ".join(f"{l} => {p(b)}" for l, b in e.fields) + "}"
    if isinstance(e, Inj):
        return f"{e.label}({p(e.body)})"
    if isinstance(e, Call):
        return e.name + "[" + ", ".join(f"{x} => {p(b)}" for x, b in e.subst) + "]"
    if isinstance(e, Omega):
        return "<omega>"
    raise TypeError(f"not an expression: {e!r}")


def _print_arms(arms, p) -> str:
    if isinstance(arms, PairArm):
        return f"{{ ({arms.x1}, {arms.x2}) => {p(arms.body)} }}"
    if isinstance(arms, UnitArm):
        return f"{{ () => {p(arms.body)} }}"
    if isinstance(arms, DownArm):
        return f"{{ down {arms.var} => {p(arms.body)} }}"
    if not arms.branches:
        return "{}"
    return "{ " + ", ".join(f"{l}({x}) => {p(b)}" for l, x, b in arms.branches) + " }"


def print_context(ctx: Iterable[Hyp]) -> str:
    parts = []
    for h in ctx:
        s = f"{h.name}:{print_type(h.type)}"
        parts.append(f"[{s}]" if h.provisional else s)
    return ", ".join(parts) if parts else "."


def print_source(sf: SourceFile) -> str:
    t = sf.theory
    lines = []
    if sf.declared_modes:
        for d in t.decls():
            if isinstance(d, ModeDecl):
                props = " ".join(p for p, on in (("W", d.weakening), ("C", d.contraction)) if on)
                lines.append(f"mode {d.name}" + (f" with {props}" if props else ""))
            else:
                lines.append(f"order {d.hi} >= {d.lo}")
    for name, modes in sorted(sf.signature.atoms.items()):
        for m in sorted(modes):
            lines.append(f"prop {name} @ {m}")
    for td in sf.signature.types.values():
        lines.append(f"type {td.name} @ {td.mode} = {print_type(td.body)}")
    for d in sf.signature.terms.values():
        hyps = ", ".join(f"{h.name}:{print_annotated_type(h.type, t)}" for h in d.ctx)
        lines.append(f"def {d.name} [{hyps}] : {print_annotated_type(d.type, t)} =\n  {print_expr(d.body, theory=t)}")
    if sf.main:
        lines.append(f"main {sf.main}")
    return "\n".join(lines) + "\n"
