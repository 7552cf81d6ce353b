import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adjnd.checker import check_algorithmic, check_declarative
from adjnd.errors import BudgetExceeded, DeadCodeReached, IllTypedState
from adjnd.frontend import parse, parse_expr, parse_type
from adjnd.machine import (CBNEED, CBV, PLAIN, PROV, THUNK, Binding, ForceF,
                           LamV, MachineState, Ret, SuspV, UnitV, Eval, Final,
                           erasure_harness, format_value, monitor_deadcode,
                           monitor_garbage, monitor_strictness, run, run_state,
                           step, typecheck_state, Machine, initial_state)
from adjnd.modes import PRESETS
from adjnd.syntax import (App, Atom, Call, Context, Lam, Lolli, Omega, One,
                          Signature, Unit, Var, is_purely_positive)

from adjgen import ENUM_PRESETS, ProgramGenerator

SIG = Signature()
linear, lnl, strict, unr = PRESETS["linear"], PRESETS["lnl"], PRESETS["strict"], PRESETS["unrestricted"]


def state(env, focus, mode, ty, stack=()):
    return MachineState(tuple(env), tuple(stack), focus, mode, ty)


def program(src, preset=None):
    sf = parse(src, preset)
    d = sf.signature.terms[sf.main]
    return sf.theory, sf.signature, Call(d.name, ()), d.type


# ------------------------------------------------------------------- step

def test_unit_returns():
    s = state([], Eval(Unit()), "L", One("L"))
    out = step(linear, SIG, s)
    assert out.focus == Ret(UnitV()) and out.env == ()


def test_dereference_removes_a_linear_binding():
    s = state([Binding("x", One("L"), PLAIN, UnitV())], Eval(Var("x")), "L", One("L"))
    out = step(linear, SIG, s)
    assert out.focus == Ret(UnitV()) and out.env == ()


def test_dereference_keeps_a_contractible_binding_provisionally():
    s = state([Binding("x", One("U"), PLAIN, UnitV())], Eval(Var("x")), "U", One("U"))
    out = step(unr, SIG, s)
    assert out.focus == Ret(UnitV())
    assert out.env == (Binding("x", One("U"), PROV, UnitV()),)


def test_force_of_a_suspension_runs_the_body_below():
    up = parse_type("^[U>L] 1", lnl)
    s = state([], Ret(SuspV("U", "L", Unit())), "U", up, stack=[ForceF("U", "L", up, One("L"))])
    out = step(lnl, SIG, s)
    assert out.focus == Eval(Unit()) and out.mode == "L"


def test_omega_is_dead_code():
    s = state([], Eval(Omega()), "L", One("L"))
    with pytest.raises(DeadCodeReached):
        step(linear, SIG, s)


# -------------------------------------------------------------------- run

def test_run_identity_application():
    e = parse_expr(r"(\x. x : 1 -o 1) ()", linear)
    res = run(linear, SIG, e, One("L"))
    assert res.value == UnitV() and res.env == ()


def test_run_diverging_definition_hits_the_budget():
    t, sig, e, a = program("mode L\ndef loop [] : 1 = loop[]\nmain loop\n")
    with pytest.raises(BudgetExceeded):
        run(t, sig, e, a, budget=1000)


@pytest.mark.parametrize("strategy", [CBV, CBNEED])
def test_down_match_at_lower_mode(strategy):
    e = parse_expr("match (down () : v[U>L] 1) { down x => x }", lnl)
    with pytest.raises(Exception):
        # x is at U and the answer at L: it has no type
        check_algorithmic(lnl, SIG, Context(), e, One("L"))
    e = parse_expr("match (down () : v[L>L] 1) { down x => x }", lnl)
    res = run(lnl, SIG, e, One("L"), strategy, debug=True)
    assert res.value == UnitV() and not [b for b in res.env if b.mode == "L"]


def test_trace_has_one_line_per_state():
    e = parse_expr(r"(\x. x : 1 -o 1) ()", linear)
    res = run(linear, SIG, e, One("L"), trace=True)
    assert len(res.trace) == res.steps + 1
    n, arrow, mode, depth, *_ = res.trace[0].split()
    assert (n, arrow, mode, depth) == ("0", "▷", "L", "0")


def test_cbneed_memoizes():
    t, sig, e, a = program(
        "mode U with W C\n"
        "def two [x : 1] : 1 * 1 = (x, x)\n"
        "def go [] : 1 * 1 = two[x => ()]\n"
        "main go\n")
    res = run(t, sig, e, a, CBNEED, debug=True)
    assert format_value(res.value) == "((), ())"
    assert [b.kind for b in res.env if b.name.startswith("x")] == [PROV]


# ---------------------------------------------------------- state typing

def _eta0(mode_name, prov):
    one = One(mode_name)
    a = One(mode_name)
    f_ty = Lolli(one, a, mode_name)
    y_ty = Lolli(f_ty, a, mode_name)
    x = Binding("x", one, PLAIN, UnitV())
    y = Binding("y", y_ty, PROV if prov else PLAIN, LamV("f", App(Var("f"), Var("x"))))
    return [x, y], y_ty, f_ty


def test_environment_typing_worked_example():
    env, y_ty, f_ty = _eta0("L", prov=False)
    focus = Eval(App(Var("y"), Lam("u", Var("u")), ty=y_ty))
    typecheck_state(linear, SIG, state(env, focus, "L", One("L")), One("L"))


def test_provisional_binding_may_not_hide_a_strict_use():
    t = strict
    m = t.modes[0]
    env, _, _ = _eta0(m, prov=True)
    with pytest.raises(IllTypedState):
        typecheck_state(t, SIG, state(env, Eval(Unit()), m, One(m)), One(m))


def test_final_unit_state_types():
    typecheck_state(linear, SIG, state([], Ret(UnitV()), "L", One("L")), One("L"))


# --------------------------------------------------------------- monitors

def test_garbage_monitor():
    e = parse_expr(r"(\x. x : 1 -o 1) ()", linear)
    assert monitor_garbage(run(linear, SIG, e, One("L")).env, linear).passed
    e = parse_expr(r"(\x. () : 1 -o 1) ()", unr)
    res = run(unr, SIG, e, One("U"))
    assert res.env and monitor_garbage(res.env, unr).passed
    bad = [Binding("x", One("L"), PLAIN, UnitV())]
    assert not monitor_garbage(bad, linear).passed


@pytest.mark.parametrize("strategy", [CBV, CBNEED])
def test_strictness_monitor(strategy):
    t = strict
    m = t.modes[0]
    e = parse_expr(r"(\x. (x, x) : 1 -o 1 * 1) ()", t)
    res = run(t, SIG, e, parse_type("1 * 1", t, mode=m), strategy)
    assert monitor_strictness(res.env, t).passed
    assert not [b for b in res.env if b.is_thunk]
    assert not monitor_strictness([Binding("x", One(m), PLAIN, UnitV())], t).passed
    assert not monitor_strictness([Binding("x", One(m), THUNK, Unit())], t).passed


def test_deadcode_monitor():
    t, sig, e, a = program(open_corpus("33_lnl_force.adj"))
    res = run(t, sig, e, a)
    assert monitor_deadcode(res.modes, "L", t).passed
    assert monitor_deadcode(["L", "L"], "L", linear).passed
    assert not monitor_deadcode(["U", "L", "U"], "U", lnl).passed
    two = parse("mode A\nmode B\n").theory
    assert not two.geq("B", "A") and not monitor_deadcode(["A", "B"], "A", two).passed


def open_corpus(name):
    from adjgen import CORPUS
    return (CORPUS / name).read_text(encoding="utf-8")


# ---------------------------------------------------------------- erasure

def test_erasure_single_mode_is_identity():
    t, sig, e, a = program(open_corpus("02_lin_swap.adj"))
    rep = erasure_harness(t, sig, e, a)
    assert rep.agree and rep.erased_subterms == 0


def test_erasure_drops_an_unused_high_payload():
    t, sig, e, a = program(open_corpus("38_lnl_erasable_payload.adj"))
    rep = erasure_harness(t, sig, e, a)
    assert rep.agree and rep.erased_subterms > 0 and rep.error is None


def test_positive_answers_are_closed():
    from adjnd.machine import value_to_expr
    from adjnd.syntax import free_vars
    t, sig, e, a = program(open_corpus("41_lnl_down_pair.adj"))
    assert is_purely_positive(a, sig)
    assert not free_vars(value_to_expr(run(t, sig, e, a).value))


# ------------------------------------------------------ random programs

@settings(max_examples=40)
@given(st.sampled_from(ENUM_PRESETS), st.integers(0, 10 ** 6))
def test_preservation_progress_and_strategy_agreement(name, seed):
    t = PRESETS[name]
    gen = ProgramGenerator(t, random.Random(seed), max_depth=3)
    e, a = gen.program(random.Random(seed).choice(t.modes))
    if not check_declarative(t, SIG, Context(), e, a):
        return
    v = run(t, SIG, e, a, CBV, debug=True)
    n = run(t, SIG, e, a, CBNEED, debug=True)
    assert v.value == n.value
    assert monitor_garbage(v.env, t).passed and monitor_garbage(n.env, t).passed
    assert monitor_deadcode(v.modes, a.mode, t).passed
