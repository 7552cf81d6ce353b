import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adjnd.errors import DuplicateMode, MonotonicityViolation, UnknownMode
from adjnd.modes import (PRESETS, ModeDecl, OrderEdge, build_mode_theory,
                         ctx_geq, mode_geq, preset)
from adjnd.syntax import Atom, Context, One

LNL = [ModeDecl("U", True, True), ModeDecl("L"), OrderEdge("U", "L")]


def test_lnl_order_is_the_closure_of_one_edge():
    t = build_mode_theory(LNL)
    assert t.order == {("U", "U"), ("L", "L"), ("U", "L")}


def test_single_mode_is_reflexive_only():
    t = build_mode_theory([ModeDecl("U", True, True)])
    assert t.order == {("U", "U")}


def test_weaker_mode_above_stronger_one_is_rejected():
    with pytest.raises(MonotonicityViolation):
        build_mode_theory([ModeDecl("U"), ModeDecl("L", weakening=True), OrderEdge("U", "L")])


def test_duplicate_and_unknown_modes():
    with pytest.raises(DuplicateMode):
        build_mode_theory([ModeDecl("L"), ModeDecl("L")])
    with pytest.raises(UnknownMode):
        build_mode_theory([ModeDecl("L"), OrderEdge("U", "L")])


def test_geq_examples():
    t = PRESETS["lnl"]
    assert mode_geq(t, "U", "L")
    assert not mode_geq(t, "L", "U")
    for m in t.modes:
        assert mode_geq(t, m, m)
    with pytest.raises(UnknownMode):
        mode_geq(t, "U", "Q")


def test_ctx_geq_examples():
    t = PRESETS["lnl"]
    assert ctx_geq(t, Context.of(("x", Atom("A", "U"))), "L")
    assert ctx_geq(t, Context(), "U")
    assert not ctx_geq(t, Context.of(("x", Atom("A", "L"))), "U")
    # provisional entries count too
    assert not ctx_geq(t, Context.of(("x", One("L")), provisional=True), "U")


def test_presets_have_the_documented_structure():
    sigma = {name: {m: (t.W(m), t.C(m)) for m in t.modes} for name, t in PRESETS.items()}
    assert sigma["linear"] == {"L": (False, False)}
    assert sigma["affine"] == {"A": (True, False)}
    assert sigma["strict"] == {"S": (False, True)}
    assert sigma["unrestricted"] == {"U": (True, True)}
    assert sigma["lnl"] == {"U": (True, True), "L": (False, False)}
    assert PRESETS["s4"].geq("V", "U") and PRESETS["lax"].geq("U", "X")
    assert preset("LNL") is PRESETS["lnl"]
    with pytest.raises(UnknownMode):
        preset("nope")


@st.composite
def theories(draw):
    """Random monotone theories: modes get properties, edges only go from a
    mode to one with fewer properties."""
    n = draw(st.integers(1, 4))
    props = [draw(st.sampled_from([(False, False), (True, False), (False, True), (True, True)]))
             for _ in range(n)]
    names = [f"M{i}" for i in range(n)]
    decls = [ModeDecl(m, w, c) for m, (w, c) in zip(names, props)]
    edges = []
    for i, j in itertools.permutations(range(n), 2):
        pi, pj = props[i], props[j]
        if pi[0] >= pj[0] and pi[1] >= pj[1] and draw(st.booleans()):
            edges.append(OrderEdge(names[i], names[j]))
    return decls, edges


@given(theories(), st.randoms())
def test_order_is_a_monotone_preorder(th, rnd):
    decls, edges = th
    t = build_mode_theory(decls + edges)
    ms = t.modes
    for m in ms:
        assert t.geq(m, m)
    for a, b, c in itertools.product(ms, repeat=3):
        if t.geq(a, b) and t.geq(b, c):
            assert t.geq(a, c)
    for a, b in itertools.product(ms, repeat=2):
        if t.geq(a, b):
            assert t.sigma[b] <= t.sigma[a]
    items = decls + edges
    rnd.shuffle(items)
    assert build_mode_theory(items).order == t.order
