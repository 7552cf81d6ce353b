"""Machine states and the computation rules.

A state is an ordered global environment, a continuation stack and a focus
that is either evaluated or returned at a subject mode.  Every frame records
the type it takes and the type it passes on, and the focus carries its type;
the state typing and the canonical forms check use them, and the positive
introduction rules read their shapes off them.

Bound variables are renamed to globally fresh names when they enter the
environment, so no closures are built and nothing is substituted for
variables: dereferencing looks the name up and then applies the structural
rule of its mode.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Callable, Union

from ..errors import (BlackHole, BudgetExceeded, DeadCodeReached, InvalidInput,
                      InvariantError, StuckState, UnboundVariable)
from ..modes import ModeTheory
from ..syntax import (Annot, App, Arms, Call, DownArm, DownI, Expr, Force,
                      Inj, InjArms, Lam, Match, Omega, Pair, PairArm, Proj,
                      Record, Signature, Susp, Type, Unit, UnitArm, Var,
                      substitute)
from .values import (DownV, InjV, LamV, PairV, RecordV, SuspV, UnitV, Value,
                     format_value)

CBV = "cbv"
CBNEED = "cbneed"
STRATEGIES = (CBV, CBNEED)
DEFAULT_BUDGET = 1_000_000

# binding kinds
PLAIN = "plain"
PROV = "prov"
THUNK = "thunk"
PROV_THUNK = "provthunk"


@dataclass(frozen=True)
class Binding:
    """``x |-> v``, ``[x |-> v]``, ``x |-> e`` or ``[x |-> e]``."""
    name: str
    type: Type
    kind: str
    payload: Union[Value, Expr]

    @property
    def mode(self) -> str:
        return self.type.mode

    @property
    def provisional(self) -> bool:
        return self.kind in (PROV, PROV_THUNK)

    @property
    def is_thunk(self) -> bool:
        return self.kind in (THUNK, PROV_THUNK)

    def __str__(self) -> str:
        if self.is_thunk:
            from ..frontend import print_expr
            body = print_expr(self.payload)
        else:
            body = format_value(self.payload)
        s = f"{self.name} |-> {body}"
        return f"[{s}]" if self.provisional else s


# ------------------------------------------------------------------ frames
# ``inp`` is the type of the value a frame receives, ``out`` the type it
# passes further up.

@dataclass(frozen=True)
class AppArg:
    arg: Expr
    inp: Type
    out: Type


@dataclass(frozen=True)
class AppFun:
    fn: LamV
    inp: Type
    out: Type


@dataclass(frozen=True)
class ProjF:
    label: str
    inp: Type
    out: Type


@dataclass(frozen=True)
class ForceF:
    hi: str
    lo: str
    inp: Type
    out: Type


@dataclass(frozen=True)
class PairLeft:
    right: Expr
    inp: Type
    out: Type


@dataclass(frozen=True)
class PairRight:
    left: Value
    inp: Type
    out: Type


@dataclass(frozen=True)
class InjF:
    label: str
    inp: Type
    out: Type


@dataclass(frozen=True)
class DownF:
    hi: str
    lo: str
    inp: Type
    out: Type


@dataclass(frozen=True)
class MatchF:
    mode: str
    arms: Arms
    result: str
    inp: Type
    out: Type


@dataclass(frozen=True)
class NeedBind:
    var: str
    inp: Type
    out: Type


@dataclass(frozen=True)
class CallArg:
    """Call-by-value evaluation of a call's substitution, left to right."""
    name: str
    done: tuple[tuple[str, Value], ...]
    current: str
    rest: tuple[tuple[str, Expr], ...]
    inp: Type
    out: Type


Frame = Union[AppArg, AppFun, ProjF, ForceF, PairLeft, PairRight, InjF, DownF, MatchF, NeedBind, CallArg]


# ------------------------------------------------------------------ states

@dataclass(frozen=True)
class Eval:
    expr: Expr


@dataclass(frozen=True)
class Ret:
    value: Value


@dataclass(frozen=True)
class MachineState:
    env: tuple[Binding, ...]
    stack: tuple[Frame, ...]
    focus: Union[Eval, Ret]
    mode: str
    type: Type
    fresh: int = 0

    @property
    def evaluating(self) -> bool:
        return isinstance(self.focus, Eval)

    def is_final(self) -> bool:
        return isinstance(self.focus, Ret) and not self.stack

    def lookup(self, x: str) -> int | None:
        for i in range(len(self.env) - 1, -1, -1):
            if self.env[i].name == x:
                return i
        return None

    def summary(self, width: int = 60) -> str:
        from ..frontend import print_expr
        if isinstance(self.focus, Eval):
            s = print_expr(self.focus.expr)
        else:
            s = format_value(self.focus.value)
        s = " ".join(s.split())
        return s if len(s) <= width else s[: width - 3] + "..."

    def trace_line(self, n: int) -> str:
        arrow = "▷" if self.evaluating else "◀"
        return f"{n} {arrow} {self.mode} {len(self.stack)} {self.summary()}"


@dataclass(frozen=True)
class Final:
    value: Value
    env: tuple[Binding, ...]
    mode: str
    type: Type


def initial_state(e: Expr, a: Type) -> MachineState:
    """``. ; eps |>_r e``"""
    return MachineState((), (), Eval(_strip(e)), a.mode, a)


def _strip(e: Expr) -> Expr:
    # annotations have no computational content
    while isinstance(e, Annot):
        e = e.body
    return e


def _base(x: str) -> str:
    return x.split("#")[0] or "x"


# ------------------------------------------------------------------ stepping

class Machine:
    def __init__(self, t: ModeTheory, sig: Signature, strategy: str = CBV, blackhole: bool = False):
        if strategy not in STRATEGIES:
            raise InvalidInput(f"unknown strategy {strategy}; expected one of {', '.join(STRATEGIES)}")
        self.t = t
        self.sig = sig
        self.strategy = strategy
        self.blackhole = blackhole

    def step(self, s: MachineState) -> Union[MachineState, Final]:
        if isinstance(s.focus, Eval):
            return self._eval(s, s.focus.expr)
        if not s.stack:
            return Final(s.focus.value, s.env, s.mode, s.type)
        return self._ret(s, s.focus.value, s.stack[-1])

    # -- helpers

    def _go(self, s: MachineState, e: Expr, ty: Type, *, env=None, stack=None, fresh=None) -> MachineState:
        return MachineState(s.env if env is None else env, s.stack if stack is None else stack,
                            Eval(_strip(e)), ty.mode, ty, s.fresh if fresh is None else fresh)

    def _give(self, s: MachineState, v: Value, ty: Type, *, env=None, stack=None) -> MachineState:
        return MachineState(s.env if env is None else env, s.stack if stack is None else stack,
                            Ret(v), ty.mode, ty, s.fresh)

    def _push(self, s: MachineState, f: Frame) -> tuple[Frame, ...]:
        return s.stack + (f,)

    def _bind(self, s: MachineState, binds, body: Expr, ty: Type, stack, kind: str = PLAIN) -> MachineState:
        """Extend the environment with fresh names for ``binds`` (name, type,
        payload) and evaluate ``body`` with the old names renamed."""
        env = list(s.env)
        n = s.fresh
        ren = {}
        for x, a, payload in binds:
            n += 1
            y = f"{_base(x)}#{n}"
            ren[x] = Var(y)
            env.append(Binding(y, a, kind, payload))
        return self._go(s, substitute(body, ren), ty, env=tuple(env), stack=stack, fresh=n)

    def _unfold(self, a: Type) -> Type:
        return self.sig.unfold(a)

    def _need(self, e, attr: str):
        v = getattr(e, attr)
        if v is None:
            raise InvalidInput(f"{type(e).__name__} is missing its elaboration stamp; check the term first")
        return v

    # -- evaluation

    def _eval(self, s: MachineState, e: Expr):
        a = s.type
        m = s.mode
        if isinstance(e, Var):
            return self._deref(s, e.name)
        if isinstance(e, Lam):
            return self._give(s, LamV(e.var, e.body), a)
        if isinstance(e, Record):
            return self._give(s, RecordV(e.fields), a)
        if isinstance(e, Susp):
            h = self._unfold(a)
            return self._give(s, SuspV(h.hi, h.lo, e.body), a)
        if isinstance(e, Unit):
            return self._give(s, UnitV(), a)
        if isinstance(e, App):
            fty = self._need(e, "ty")
            return self._go(s, e.fn, fty, stack=self._push(s, AppArg(e.arg, fty, a)))
        if isinstance(e, Proj):
            sty = self._need(e, "ty")
            return self._go(s, e.subj, sty, stack=self._push(s, ProjF(e.label, sty, a)))
        if isinstance(e, Force):
            sty = self._need(e, "ty")
            h = self._unfold(sty)
            return self._go(s, e.subj, sty, stack=self._push(s, ForceF(h.hi, h.lo, sty, a)))
        if isinstance(e, Pair):
            h = self._unfold(a)
            return self._go(s, e.left, h.left, stack=self._push(s, PairLeft(e.right, h.left, a)))
        if isinstance(e, Inj):
            h = self._unfold(a)
            b = h.field(e.label)
            if b is None:
                raise StuckState(f"label {e.label} is not part of {a}")
            return self._go(s, e.body, b, stack=self._push(s, InjF(e.label, b, a)))
        if isinstance(e, DownI):
            h = self._unfold(a)
            return self._go(s, e.body, h.body, stack=self._push(s, DownF(h.hi, h.lo, h.body, a)))
        if isinstance(e, Match):
            sty = self._need(e, "ty")
            f = MatchF(sty.mode, e.arms, m, sty, a)
            return self._go(s, e.subj, sty, stack=self._push(s, f))
        if isinstance(e, Call):
            return self._call(s, e)
        if isinstance(e, Omega):
            raise DeadCodeReached(f"evaluated the erasure placeholder at mode {m}")
        raise StuckState(f"no rule evaluates {type(e).__name__}")

    def _deref(self, s: MachineState, x: str):
        i = s.lookup(x)
        if i is None:
            raise UnboundVariable(f"variable {x} has no binding")
        b = s.env[i]
        m = b.mode
        env_l, env_r = s.env[:i], s.env[i + 1:]
        if b.kind == PLAIN:
            if self.t.C(m):
                env = env_l + (replace(b, kind=PROV),) + env_r
            else:
                env = env_l + env_r
            return self._give(s, b.payload, b.type, env=env)
        if b.kind == PROV:
            return self._give(s, b.payload, b.type)
        # a thunk
        if b.kind == PROV_THUNK and isinstance(b.payload, Omega):
            raise BlackHole(f"thunk {x} demanded while it is being evaluated")
        e = b.payload
        if not self.t.C(m):
            return self._go(s, e, b.type, env=env_l + env_r)
        held = Omega() if self.blackhole else e
        env = env_l + (replace(b, kind=PROV_THUNK, payload=held),) + env_r
        return self._go(s, e, b.type, env=env, stack=self._push(s, NeedBind(x, b.type, b.type)))

    def _call(self, s: MachineState, e: Call):
        d = self.sig.terms.get(e.name)
        if d is None:
            raise StuckState(f"unknown definition {e.name}")
        if self.strategy == CBNEED or not e.subst:
            binds = [(x, d.ctx[x].type, b) for x, b in e.subst]
            return self._bind(s, binds, d.body, d.type, s.stack, kind=THUNK)
        (x0, e0), rest = e.subst[0], e.subst[1:]
        a0 = d.ctx[x0].type
        f = CallArg(e.name, (), x0, tuple(rest), a0, s.type)
        return self._go(s, e0, a0, stack=self._push(s, f))

    # -- returning

    def _ret(self, s: MachineState, v: Value, f: Frame):
        below = s.stack[:-1]
        if isinstance(f, AppArg):
            if not isinstance(v, LamV):
                raise StuckState("applying a value that is not a function")
            dom = self._unfold(f.inp).dom
            return self._go(s, f.arg, dom, stack=below + (AppFun(v, dom, f.out),))
        if isinstance(f, AppFun):
            return self._bind(s, [(f.fn.var, f.inp, v)], f.fn.body, f.out, below)
        if isinstance(f, ProjF):
            if not isinstance(v, RecordV) or v.field(f.label) is None:
                raise StuckState(f"projecting .{f.label} from a value that is not such a record")
            return self._go(s, v.field(f.label), f.out, stack=below)
        if isinstance(f, ForceF):
            if not isinstance(v, SuspV):
                raise StuckState("forcing a value that is not a suspension")
            return self._go(s, v.body, f.out, stack=below)
        if isinstance(f, PairLeft):
            right = self._unfold(f.out).right
            return self._go(s, f.right, right, stack=below + (PairRight(v, right, f.out),))
        if isinstance(f, PairRight):
            return self._give(s, PairV(f.left, v), f.out, stack=below)
        if isinstance(f, InjF):
            return self._give(s, InjV(f.label, v), f.out, stack=below)
        if isinstance(f, DownF):
            return self._give(s, DownV(f.hi, f.lo, v), f.out, stack=below)
        if isinstance(f, MatchF):
            return self._dispatch(s, v, f, below)
        if isinstance(f, NeedBind):
            i = s.lookup(f.var)
            if i is None or s.env[i].kind != PROV_THUNK:
                raise InvariantError(f"thunk {f.var} vanished while it was being evaluated")
            env = s.env[:i] + (replace(s.env[i], kind=PROV, payload=v),) + s.env[i + 1:]
            return self._give(s, v, f.out, env=env, stack=below)
        if isinstance(f, CallArg):
            done = f.done + ((f.current, v),)
            d = self.sig.terms[f.name]
            if f.rest:
                (x, e), rest = f.rest[0], f.rest[1:]
                a = d.ctx[x].type
                return self._go(s, e, a, stack=below + (CallArg(f.name, done, x, rest, a, f.out),))
            binds = [(x, d.ctx[x].type, w) for x, w in done]
            return self._bind(s, binds, d.body, f.out, below)
        raise StuckState(f"unknown frame {type(f).__name__}")

    def _dispatch(self, s: MachineState, v: Value, f: MatchF, below):
        """``eta ; v |>_m M = eta' ; e'``"""
        arms, h = f.arms, self._unfold(f.inp)
        if isinstance(arms, UnitArm) and isinstance(v, UnitV):
            return self._go(s, arms.body, f.out, stack=below)
        if isinstance(arms, PairArm) and isinstance(v, PairV):
            binds = [(arms.x1, h.left, v.left), (arms.x2, h.right, v.right)]
            return self._bind(s, binds, arms.body, f.out, below)
        if isinstance(arms, InjArms) and isinstance(v, InjV):
            for l, x, body in arms.branches:
                if l == v.label:
                    return self._bind(s, [(x, h.field(l), v.body)], body, f.out, below)
            raise StuckState(f"no branch for label {v.label}")
        if isinstance(arms, DownArm) and isinstance(v, DownV):
            return self._bind(s, [(arms.var, h.body, v.body)], arms.body, f.out, below)
        raise StuckState(f"value {format_value(v)} does not match the pattern")


# ------------------------------------------------------------------ running

@dataclass
class RunResult:
    value: Value
    env: tuple[Binding, ...]
    type: Type
    mode: str
    steps: int
    strategy: str
    modes: list[str] = field(default_factory=list)
    trace: list[str] | None = None
    preevaluated_calls: int = 0


def default_budget() -> int:
    raw = os.environ.get("ADJND_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        n = int(raw)
    except ValueError as exc:
        raise InvalidInput(f"ADJND_BUDGET must be an integer, got {raw!r}") from exc
    if n < 0:
        raise InvalidInput("ADJND_BUDGET must not be negative")
    return n


def step(t: ModeTheory, sig: Signature, s: MachineState, strategy: str = CBV,
         blackhole: bool = False) -> Union[MachineState, Final]:
    return Machine(t, sig, strategy, blackhole).step(s)


def run_state(machine: Machine, s: MachineState, budget: int | None = None, *, debug: bool = False,
              trace: bool = False, on_state: Callable[[int, MachineState], None] | None = None) -> RunResult:
    """Iterate ``step`` from ``s`` until a final state or the budget runs out.

    ``debug`` re-types every state against the answer type and checks the
    canonical form of every returned value."""
    from .statetyping import check_canonical, typecheck_state
    budget = default_budget() if budget is None else budget
    answer = s.stack[0].out if s.stack else s.type
    lines: list[str] | None = [] if trace else None
    modes: list[str] = []
    preevaluated = 0
    n = 0
    while True:
        modes.append(s.mode)
        if lines is not None:
            lines.append(s.trace_line(n))
        if on_state is not None:
            on_state(n, s)
        if debug:
            typecheck_state(machine.t, machine.sig, s, answer)
            if isinstance(s.focus, Ret):
                check_canonical(machine.sig, s.focus.value, s.type)
        if s.is_final():
            return RunResult(s.focus.value, s.env, s.type, s.mode, n, machine.strategy,
                             modes, lines, preevaluated)
        if n >= budget:
            raise BudgetExceeded(f"step budget {budget} exhausted")
        if (machine.strategy == CBV and isinstance(s.focus, Eval)
                and isinstance(s.focus.expr, Call) and s.focus.expr.subst):
            preevaluated += 1
        s = machine.step(s)
        n += 1


def run(t: ModeTheory, sig: Signature, e: Expr, a: Type, strategy: str = CBV, budget: int | None = None, *,
        blackhole: bool = False, debug: bool = False, trace: bool = False, check: bool = True,
        on_state: Callable[[int, MachineState], None] | None = None) -> RunResult:
    """Run a closed term from ``. ; eps |>_r e`` to ``eta ; eps <|_r v``.

    With ``check`` on, the signature and the term are checked and elaborated
    first; pass ``check=False`` only for terms that already carry their
    elaboration stamps (as, for instance, erased copies do)."""
    if check:
        from ..checker.algorithmic import check_algorithmic
        from ..ctxops import covers
        from ..syntax import Context
        from ..wellformed import wf_signature, wf_type
        sig = wf_signature(t, sig)
        wf_type(t, sig, a)
        out = check_algorithmic(t, sig, Context(), e, a)
        if not covers(t, Context(), out.used):
            raise InvalidInput("the term is not closed")
        e = out.elaborated
    m = Machine(t, sig, strategy, blackhole)
    return run_state(m, initial_state(e, a), budget, debug=debug, trace=trace, on_state=on_state)
