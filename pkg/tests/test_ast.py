import pytest

from adjnd.errors import (IllTypedDefinition, ModeMismatch, NonContractive,
                          ShiftOrderViolation, UnknownTypeName)
from adjnd.frontend import parse, parse_expr
from adjnd.modes import PRESETS
from adjnd.syntax import (App, Atom, Down, Force, Lam, One, Pair, Signature,
                          Tensor, TypeName, Up, Var, alpha_eq, bound_vars,
                          free_vars, rename_apart, subst_expr, substitute)
from adjnd.wellformed import wf_signature, wf_type

linear, lnl, s4 = PRESETS["linear"], PRESETS["lnl"], PRESETS["s4"]


def test_wf_type_examples():
    wf_type(s4, Signature(), Up("V", "U", Atom("A", "U")))
    for t in PRESETS.values():
        for m in t.modes:
            wf_type(t, Signature(), One(m))
    with pytest.raises(ShiftOrderViolation):
        wf_type(lnl, Signature(), Down("L", "U", One("L")))
    with pytest.raises(ModeMismatch):
        wf_type(lnl, Signature(), Tensor(One("U"), One("L"), "U"))
    with pytest.raises(UnknownTypeName):
        wf_type(linear, Signature(), TypeName("nat", "L"))


def test_signature_examples():
    sf = parse("mode U with W C\ntype nat = +{zero:1, succ:nat}\n")
    wf_signature(sf.theory, sf.signature)
    sf = parse("mode U with W C\ntype t @ U = t\n")
    with pytest.raises(NonContractive):
        wf_signature(sf.theory, sf.signature)
    sf = parse("mode L\nprop A @ L\ndef id [x : A] : A = x\n")
    assert wf_signature(sf.theory, sf.signature).terms["id"].name == "id"
    sf = parse("mode L\nprop A @ L\ndef drop [x : A] : 1 = ()\n")
    with pytest.raises(IllTypedDefinition):
        wf_signature(sf.theory, sf.signature)


def test_unfolding_keeps_types_well_formed():
    sf = parse("mode L\ntype list = +{nil:1, cons: 1 * list}\n")
    sig = sf.signature
    a = TypeName("list", "L")
    wf_type(sf.theory, sig, a)
    wf_type(sf.theory, sig, sig.unfold(a))


def e(src, t=linear):
    return parse_expr(src, t)


def test_rename_apart_removes_shadowing():
    x = e(r"\x. \x. x")
    y = rename_apart(x)
    assert alpha_eq(x, y)
    assert isinstance(y, Lam) and isinstance(y.body, Lam) and y.var != y.body.var
    assert y.body.body == Var(y.body.var)


def test_rename_apart_fixpoint_and_siblings():
    k = e(r"\a. \b. a")
    assert alpha_eq(rename_apart(k), k)
    two = rename_apart(App(Lam("x", Var("x")), Lam("x", Var("x"))))
    binders = [two.fn.var, two.arg.var]
    assert len(set(binders)) == 2
    assert len(bound_vars(two)) == 2


def test_rename_apart_is_idempotent():
    x = rename_apart(e(r"\x. \y. match x { () => (\x. x) y }"))
    assert rename_apart(x) == x


def test_subst_examples():
    assert subst_expr(Var("y"), "x", Var("x")) == Var("y")
    assert alpha_eq(subst_expr(Var("y"), "x", Lam("z", Var("x"))), Lam("z", Var("y")))
    fw = Force(Var("w"))
    assert subst_expr(fw, "x", Pair(Var("x"), Var("x"))) == Pair(fw, fw)


def test_substitution_avoids_capture():
    out = substitute(Lam("y", Pair(Var("x"), Var("y"))), {"x": Var("y")})
    assert isinstance(out, Lam) and out.var != "y"
    assert free_vars(out) == {"y"}
