import pathlib

import pytest
from hypothesis import given, strategies as st

from tripos.core import ImplicativeTripos, PowerTripos
from tripos.implicative import all_implicative_algebras, from_heyting
from tripos.lattice import all_lattices, boolean, chain, diamond
from tripos.textformat import ParseError, check_workbench, parse_algebra, parse_workbench, serialize_algebra

SAMPLES = pathlib.Path(__file__).resolve().parent.parent / "samples"


def _same_algebra(a, b):
    return (a.lattice.leq == b.lattice.leq and a.structure.imp == b.structure.imp
            and a.separator.members == b.separator.members)


def test_boolean_two_is_valid():
    alg = parse_algebra((SAMPLES / "bool2.alg").read_text())
    assert _same_algebra(alg, from_heyting(boolean(1)))


def test_omitted_imp_is_heyting():
    alg = parse_algebra((SAMPLES / "chain3.alg").read_text())
    assert alg.structure.imp == from_heyting(chain(3)).structure.imp
    assert alg.separator.members == frozenset({2})


def test_separator_generators_are_closed():
    alg = parse_algebra((SAMPLES / "chain3_wide.alg").read_text())
    assert alg.separator.members == frozenset({1, 2})


def test_bool4_sample_matches_diamond():
    assert _same_algebra(parse_algebra((SAMPLES / "bool4.alg").read_text()), from_heyting(diamond()))


def _all_small_algebras():
    out = []
    for n in (1, 2, 3):
        for L in all_lattices(n):
            out.extend(all_implicative_algebras(L))
    return out


ALGS = _all_small_algebras()


@given(st.sampled_from(ALGS))
def test_roundtrip(alg):
    text = serialize_algebra(alg)
    back = parse_algebra(text)
    assert _same_algebra(back, alg)
    assert serialize_algebra(back) == text


def test_roundtrip_exhaustive_count():
    assert len(ALGS) == 238
    for alg in ALGS:
        assert _same_algebra(parse_algebra(serialize_algebra(alg)), alg)


@pytest.mark.parametrize("text, line, match", [
    ("elements [bot, top]\nleq [(bot top)]\nseparator [top]", 2, "malformed leq pair"),
    ("elements [a, b]\nleq [(a, c)]", 2, "unknown element 'c'"),
    ("elements [a, a]", 1, "duplicate"),
    ("elements [a, b]\nleq []", 2, "not a lattice"),
    ("elements [a, b]\nleq [(a, b)]\nfoo bar", 3, "unrecognised"),
    ("elements [a, b]\nleq [(a, b)]\nimp\n  a: b b\n  b: a", 5, "1 entries"),
    ("elements [a, b]\nleq [(a, b)]\nimp\n  a: b b", 3, "missing row 'b'"),
    ("elements [a, b]\nleq [(a, b)]\nseparator [z]", 3, "unknown element 'z'"),
    ("elements a, b", 1, "bracketed"),
    # an implication that is not monotone in its second argument
    ("elements [a, b]\nleq [(a, b)]\nimp\n  a: b a\n  b: b a", 3, "not an implicative structure"),
])
def test_parse_errors_carry_lines(text, line, match):
    with pytest.raises(ParseError, match=match) as ei:
        parse_algebra(text)
    assert ei.value.line == line
    assert str(ei.value).startswith(f"line {line}:")


def test_missing_elements():
    with pytest.raises(ParseError, match="missing 'elements'"):
        parse_algebra("# nothing here\n")


def test_comments_and_blank_lines():
    alg = parse_algebra("\n# c\nelements [x]   # one point\n\nleq []\n")
    assert alg.size == 1


# --- workbench ------------------------------------------------------------------------

def test_identity_workbench_sample():
    wb = parse_workbench((SAMPLES / "pers_identity.wb").read_text())
    assert isinstance(wb.tripos, PowerTripos) and wb.tripos.n == 1
    res = {(kind, name): ok for kind, name, _, ok, _ in check_workbench(wb)}
    assert res[("per", "D")] and res[("per", "Full")] and res[("funrel", "collapse")]
    assert not res[("funrel", "empty")]
    assert [ok for kind, _, _, ok, _ in check_workbench(wb) if kind == "formula"] == [True, False]


def test_implicative_workbench_sample():
    wb = parse_workbench((SAMPLES / "chain3.wb").read_text())
    assert isinstance(wb.tripos, ImplicativeTripos)
    assert wb.sig.preds["P"][0].payload == (1, 2)
    lines = [(kind, line, ok) for kind, _, line, ok, _ in check_workbench(wb)]
    assert lines == [("per", 8, True), ("formula", 9, True), ("formula", 10, False)]


def test_power_workbench():
    wb = parse_workbench("tripos power 2\nsort X 2\npred P X = 0 3\nformula (exists (x X) (P x))\n")
    assert wb.tripos.n == 2
    assert wb.sig.preds["P"][0].payload == 0b1001
    assert check_workbench(wb)[0][3] is True


@pytest.mark.parametrize("text, line, match", [
    ("sort X 2", 1, "tripos"),
    ("tripos wobbly", 1, "unknown tripos header"),
    ("tripos identity\nsort X two", 2, "SIZE"),
    ("tripos identity\nsort X 2\nsort X 3", 3, "duplicate sort"),
    ("tripos identity\nsort X 2\npred P Z = 0", 3, "unknown sort"),
    ("tripos identity\nsort X 2\npred P X = 7", 3, "code 7 outside"),
    ("tripos identity\nsort X 2\npred P X 0", 3, "expected 'pred"),
    ("tripos identity\nsort X 2\nper E X = x", 3, "integer codes"),
    ("tripos identity\nsort X 2\nfunrel f A B = 0", 3, "funrel NAME PER PER"),
    ("tripos identity\nsort X 2\nformula (forall (x X) (Q x))", 3, "unknown predicate"),
    ("tripos implicative\nelements [a]\nleq []\nsort X 1\npred P X = b", 5, "unknown element 'b'"),
    ("tripos implicative\nelements [a]\nleq []\nsort X 2\npred P X = a", 5, "expected 2"),
    ("tripos implicative\nelements [a]\nsort X 1\nleq []", 4, "precede"),
    ("tripos identity\nwhat", 2, "unrecognised"),
])
def test_workbench_errors(text, line, match):
    with pytest.raises(ParseError, match=match) as ei:
        parse_workbench(text)
    assert ei.value.line == line
