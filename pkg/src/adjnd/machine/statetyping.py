"""Typing of machine states, used as a run-time check of preservation.

A state ``eta ; K |>_m e : C_r`` splits the hypotheses the environment
provides between the bindings' own values, the frames and the focus.  We call
each of those a consumer.  The used-hypothesis checker tells, for every
consumer, which variables it definitely uses (plain in its used context) and
which it may use (provisional there).  The split is then decided variable by
variable:

* a provisional binding ``[y |-> v]`` offers ``[y:A]``; every consumer that
  uses ``y`` takes it provisionally, and more than one such consumer needs
  contraction;
* a plain binding offers ``y:A``; some consumer has to take it plainly, the
  empty continuation may absorb it when its mode admits weakening, and again
  a second taker needs contraction;
* a provisional binding may only take, plainly, variables whose mode admits
  weakening (its context must be weakenable), and every taker must sit at a
  mode no higher than the variable's.

The environment is typed as a dependency graph rather than strictly left to
right.  Call-by-need memoizes a thunk in place, and the memoized value may
mention bindings created while it was being computed, which sit to its right;
the graph only has to be acyclic.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..checker.algorithmic import AlgorithmicChecker
from ..checker.typeeq import type_equal
from ..errors import AdjError, IllTypedState
from ..modes import ModeTheory
from ..syntax import (Annot, App, Call, Context, Down, Expr, Hyp, Lolli, Match,
                      Omega, One, Pair, Plus, Signature, Tensor, Type, Up, Var,
                      With)
from .state import (PROV_THUNK, AppArg, AppFun, Binding, CallArg, Eval,
                    MachineState, MatchF, NeedBind, PairLeft, PairRight)
from .values import (DownV, InjV, LamV, PairV, RecordV, SuspV, UnitV, Value,
                     value_to_expr)

HOLE = "_#hole"


@dataclass
class _Consumer:
    where: str
    mode: str
    provisional: bool         # a provisional binding: its context must be weakenable
    node: str | None          # binding name, for the dependency graph
    definite: set[str]
    maybe: set[str]


def check_canonical(sig: Signature, v: Value, a: Type) -> None:
    """Clauses (i) to (vii): the shape of a value follows its type."""
    h = sig.unfold(a)
    ok = {
        Lolli: lambda: isinstance(v, LamV),
        With: lambda: isinstance(v, RecordV) and sorted(l for l, _ in v.fields) == sorted(l for l, _ in h.fields),
        Up: lambda: isinstance(v, SuspV) and (v.hi, v.lo) == (h.hi, h.lo),
        Tensor: lambda: isinstance(v, PairV),
        One: lambda: isinstance(v, UnitV),
        Plus: lambda: isinstance(v, InjV) and h.field(v.label) is not None,
        Down: lambda: isinstance(v, DownV) and (v.hi, v.lo) == (h.hi, h.lo),
    }.get(type(h), lambda: False)()
    if not ok:
        raise IllTypedState(f"value {type(v).__name__} is not a canonical form of {a}")
    if isinstance(v, PairV):
        check_canonical(sig, v.left, h.left)
        check_canonical(sig, v.right, h.right)
    elif isinstance(v, InjV):
        check_canonical(sig, v.body, h.field(v.label))
    elif isinstance(v, DownV):
        check_canonical(sig, v.body, h.body)


def _frame_consumer(f) -> tuple[Expr, Type] | None:
    """The frame with its hole filled by a variable, and the type it has."""
    z = Var(HOLE)
    if isinstance(f, AppArg):
        return App(z, f.arg, f.inp), f.out
    if isinstance(f, AppFun):
        fn = Lolli(f.inp, f.out, f.out.mode)
        return App(Annot(value_to_expr(f.fn), fn), z, fn), f.out
    if isinstance(f, PairLeft):
        return Pair(z, f.right), f.out
    if isinstance(f, PairRight):
        return Pair(value_to_expr(f.left), z), f.out
    if isinstance(f, MatchF):
        return Match(z, f.arms, f.mode, f.result, f.inp), f.out
    if isinstance(f, CallArg):
        subst = tuple((x, value_to_expr(v)) for x, v in f.done) + ((f.current, z),) + f.rest
        return Call(f.name, subst), f.out
    return None          # frames without subterms type in any weakenable context


def typecheck_state(t: ModeTheory, sig: Signature, s: MachineState, answer: Type) -> None:
    """Raise IllTypedState unless ``s : answer``."""
    _check_chain(sig, s, answer)
    env = s.env
    names = {b.name for b in env}
    if len(names) != len(env):
        raise IllTypedState("environment binds a name twice")
    held = {f.var for f in s.stack if isinstance(f, NeedBind)}
    for b in env:
        if b.kind == PROV_THUNK and b.name not in held:
            raise IllTypedState(f"binding {b.name}: a thunk is marked as being evaluated but nothing waits for it")
    for x in held:
        if not any(b.name == x and b.kind == PROV_THUNK for b in env):
            raise IllTypedState(f"frame {x} |-> _ waits for a thunk that is not being evaluated")

    checker = AlgorithmicChecker(t, sig)
    everything = Context(Hyp(b.name, b.type) for b in env)
    consumers: list[_Consumer] = []

    def consume(where, e, a, mode, provisional=False, node=None, hole=None):
        gamma = everything if node is None else everything.without(node)
        if hole is not None:
            gamma = gamma.extend(HOLE, hole)
        try:
            out = checker.check(gamma, e, a)
        except AdjError as exc:
            raise IllTypedState(f"{where}: {exc}") from exc
        used = out.used.without(HOLE)
        consumers.append(_Consumer(where, mode, provisional, node,
                                   {h.name for h in used if not h.provisional},
                                   {h.name for h in used if h.provisional}))

    for b in env:
        if b.kind == PROV_THUNK:
            continue         # its expression is accounted for by the computation in progress
        e = b.payload if b.is_thunk else value_to_expr(b.payload)
        if isinstance(e, Omega):
            raise IllTypedState(f"binding {b.name} holds the erasure placeholder")
        consume(f"binding {b.name}", e, b.type, b.mode, provisional=b.provisional, node=b.name)
    for i, f in enumerate(s.stack):
        c = _frame_consumer(f)
        if c is not None:
            consume(f"frame {i} ({type(f).__name__})", c[0], c[1], c[1].mode, hole=f.inp)
    if isinstance(s.focus, Eval):
        if isinstance(s.focus.expr, Omega):
            raise IllTypedState("focus is the erasure placeholder")
        consume("focus", s.focus.expr, s.type, s.mode)
    else:
        consume("focus", value_to_expr(s.focus.value), s.type, s.mode)

    edges: dict[str, set[str]] = {b.name: set() for b in env}
    for c in consumers:
        if c.node is not None:
            edges[c.node] |= c.definite
    for b in env:
        _assign(t, b, consumers, edges)
    _acyclic(edges)


def _assign(t: ModeTheory, b: Binding, consumers: list[_Consumer], edges: dict[str, set[str]]) -> None:
    y, m = b.name, b.mode
    definite = [c for c in consumers if y in c.definite]
    maybe = [c for c in consumers if y in c.maybe]
    for c in definite:
        if not t.geq(m, c.mode):
            raise IllTypedState(f"{c.where} uses {y} at mode {m}, which is not >= {c.mode}")
    maybe = [c for c in maybe if t.geq(m, c.mode)]

    def plain_ok(c: _Consumer) -> bool:
        return not c.provisional or t.W(m)

    def extra_taker() -> bool:
        """Give ``y`` plainly to some consumer that may use it."""
        for c in maybe:
            if plain_ok(c) and (c.node is None or not _reaches(edges, y, c.node)):
                if c.node is not None:
                    edges[c.node].add(y)
                return True
        return False

    if b.provisional:
        n = len(definite)
    elif any(plain_ok(c) for c in definite):
        n = len(definite)
    elif definite:
        if not extra_taker():
            raise IllTypedState(
                f"binding {y}: only weakenable contexts mention it, but its mode {m} does not admit weakening")
        n = len(definite) + 1
    else:
        if not t.W(m) and not extra_taker():
            raise IllTypedState(f"binding {y}: unused, and its mode {m} does not admit weakening")
        n = 1
    if n > 1 and not t.C(m):
        raise IllTypedState(f"binding {y}: shared by {n} consumers, and its mode {m} does not admit contraction")


def _reaches(edges: dict[str, set[str]], src: str, dst: str) -> bool:
    seen, todo = set(), [src]
    while todo:
        x = todo.pop()
        if x == dst:
            return True
        if x in seen:
            continue
        seen.add(x)
        todo.extend(edges.get(x, ()))
    return False


def _acyclic(edges: dict[str, set[str]]) -> None:
    state: dict[str, int] = {}
    for root in edges:
        if root in state:
            continue
        stack = [(root, iter(edges[root]))]
        state[root] = 1
        while stack:
            x, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[x] = 2
                stack.pop()
                continue
            if nxt not in edges:
                continue
            if state.get(nxt) == 1:
                raise IllTypedState(f"bindings depend on each other in a cycle through {nxt}")
            if nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(edges[nxt])))


def _check_chain(sig: Signature, s: MachineState, answer: Type) -> None:
    if s.type.mode != s.mode:
        raise IllTypedState(f"focus type {s.type} is not at the subject mode {s.mode}")
    cur = s.type
    for i in range(len(s.stack) - 1, -1, -1):
        f = s.stack[i]
        if not type_equal(sig, f.inp, cur):
            raise IllTypedState(f"frame {i} ({type(f).__name__}) expects {f.inp} but receives {cur}")
        cur = f.out
    if not type_equal(sig, cur, answer):
        raise IllTypedState(f"the continuation produces {cur}, not the answer type {answer}")
