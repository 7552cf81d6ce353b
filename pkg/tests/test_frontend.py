import pytest
from hypothesis import given
from hypothesis import strategies as st

from adjnd.errors import SyntaxErrorAt, UnknownMode
from adjnd.frontend import (parse, parse_expr, parse_type, print_annotated_type,
                            print_expr, print_source, print_type, tokenize)
from adjnd.modes import PRESETS
from adjnd.syntax import (Annot, App, Atom, Call, Down, DownArm, DownI, Force,
                          Inj, InjArms, Lam, Lolli, Match, One, Pair, PairArm,
                          Plus, Proj, Record, Susp, Tensor, TypeName, Unit,
                          UnitArm, Up, Var, With, alpha_eq)

from adjgen import corpus_files

lnl = PRESETS["lnl"]


def test_parse_a_small_file():
    sf = parse("mode L\nprop A @ L\ndef id [x:A] : A = x\n")
    assert [d.name for d in sf.defs] == ["id"]
    assert sf.signature.atoms == {"A": frozenset({"L"})}


def test_nullary_definition():
    sf = parse("mode L\ndef f [] : 1 @ L = ()\n")
    (d,) = sf.defs
    assert len(d.ctx) == 0 and d.type == One("L") and d.body == Unit()


def test_noncontractive_type_still_parses():
    sf = parse("mode L\ntype t @ L = t\n")
    assert sf.signature.types["t"].body == TypeName("t", "L")


def test_syntax_errors_carry_positions():
    with pytest.raises(SyntaxErrorAt) as exc:
        parse("mode L\ndef f [] : 1 = (\n")
    assert exc.value.line == 3 or exc.value.line == 2
    with pytest.raises(SyntaxErrorAt):
        parse_expr(r"\x x", PRESETS["linear"])


def test_comments_and_mode_declarations():
    sf = parse("-- a comment\nmode U with W C -- trailing\nmode L\norder U >= L\n")
    assert sf.theory.geq("U", "L") and sf.theory.W("U") and not sf.theory.W("L")
    with pytest.raises(UnknownMode):
        parse("mode L\norder U >= L\n")


def test_preset_only_applies_without_declarations():
    assert parse("def f [] : 1 = ()\n", "strict").theory.modes == ("S",)
    assert parse("mode L\ndef f [] : 1 = ()\n", "strict").theory.modes == ("L",)


def test_fixed_notation():
    assert print_expr(Lam("x", Var("x"))) == r"\x. x"
    assert print_type(Up("U", "L", One("L"))) == "^[U>L] 1"
    assert print_type(Down("U", "L", One("U"))) == "v[U>L] 1"
    assert print_type(Lolli(One("L"), Lolli(One("L"), One("L"), "L"), "L")) == "1 -o 1 -o 1"
    assert print_type(Lolli(Tensor(One("L"), One("L"), "L"), One("L"), "L")) == "1 * 1 -o 1"
    assert print_type(With((), "L")) == "&{}" and print_type(Plus((), "L")) == "+{}"


def test_tokens_are_bit_exact():
    kinds = [tok.text for tok in tokenize(r"\x. -o => ^[U>L] v[U>L] &{} +{}") if tok.kind != "eof"]
    assert "-o" in kinds and "=>" in kinds


@pytest.mark.parametrize("path", corpus_files() + corpus_files(rec=True), ids=lambda p: p.name)
def test_corpus_round_trips_through_the_printer(path):
    sf = parse(path.read_text())
    again = parse(print_source(sf))
    assert again.theory.order == sf.theory.order
    assert set(again.signature.terms) == set(sf.signature.terms)
    for name, d in sf.signature.terms.items():
        d2 = again.signature.terms[name]
        assert d2.ctx == d.ctx and d2.type == d.type
        assert alpha_eq(d2.body, d.body)


# ------------------------------------------------------- random round trips

LABELS = st.sampled_from(["a", "b", "c"])


@st.composite
def types(draw, m=None, depth=3):
    """Well-formed LNL types at mode ``m``."""
    m = m or draw(st.sampled_from(["U", "L"]))
    k = draw(st.integers(0, 6 if depth > 0 else 0))
    if k == 0:
        return draw(st.sampled_from([One(m), Atom("P", m), Atom("Q", m)]))
    sub = types(m, depth - 1)
    if k in (1, 2):
        return (Lolli if k == 1 else Tensor)(draw(sub), draw(sub), m)
    if k in (3, 4):
        fs = draw(st.lists(st.tuples(LABELS, sub), max_size=3, unique_by=lambda f: f[0]))
        return (With if k == 3 else Plus)(tuple(fs), m)
    if m == "U":
        return draw(st.sampled_from([Up("U", "L", draw(types("L", depth - 1))),
                                     Lolli(draw(sub), draw(sub), m)]))
    return Down("U", "L", draw(types("U", depth - 1)))


any_type = types()
NAMES = st.sampled_from(["x", "y", "z", "w"])


def exprs():
    leaves = st.one_of(NAMES.map(Var), st.just(Unit()), st.just(Record(())))

    def extend(inner):
        synth = st.one_of(NAMES.map(Var), st.builds(Annot, inner, st.deferred(lambda: any_type)))
        arms = st.one_of(
            st.builds(PairArm, NAMES, NAMES, inner),
            st.builds(UnitArm, inner),
            st.builds(DownArm, NAMES, inner),
            st.lists(st.tuples(LABELS, NAMES, inner), max_size=2, unique_by=lambda b: b[0])
              .map(lambda bs: InjArms(tuple(bs))))
        return st.one_of(
            st.builds(Lam, NAMES, inner),
            st.builds(App, synth, inner),
            st.builds(lambda fs: Record(tuple(fs)),
                      st.lists(st.tuples(LABELS, inner), min_size=1, max_size=2, unique_by=lambda f: f[0])),
            st.builds(Proj, synth, LABELS),
            st.builds(Susp, inner),
            st.builds(Force, synth),
            st.builds(Pair, inner, inner),
            st.builds(Inj, LABELS, inner),
            st.builds(DownI, inner),
            st.builds(Match, synth, arms),
            st.builds(lambda xs: Call("f", tuple(xs)),
                      st.lists(st.tuples(NAMES, inner), max_size=2, unique_by=lambda p: p[0])),
        )
    return st.recursive(leaves, extend, max_leaves=8)


@given(any_type)
def test_types_round_trip(a):
    assert parse_type(print_annotated_type(a, lnl), lnl) == a


@pytest.mark.filterwarnings("ignore:Generating overly large repr")
@given(exprs())
def test_expressions_round_trip(e):
    assert alpha_eq(parse_expr(print_expr(e, theory=lnl), lnl), e)
