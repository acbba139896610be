import itertools

import pytest
from hypothesis import given, strategies as st

from tripos.config import CapExceeded, Caps
from tripos.core import ImplicativeTripos, PowerTripos
from tripos.finset import FinSetObj, product_obj
from tripos.implicative import from_heyting
from tripos.lattice import chain
from tripos.logic import (
    And,
    Atom,
    Bot,
    Eq,
    Exists,
    Forall,
    FormulaError,
    Iff,
    Imp,
    Not,
    Or,
    Signature,
    Top,
    atom,
    eval_formula,
    exists,
    forall,
    free_vars,
    holds,
    parse_formula,
    to_sexpr,
)

T1 = PowerTripos(1)
X, Y = FinSetObj(2), FinSetObj(3)
R = T1.pred(product_obj(X, Y), {0, 4, 5})  # (0,0), (1,1), (1,2)
P = T1.pred(X, {1})
SIG = Signature({"X": X, "Y": Y}, {"R": (R, ("X", "Y")), "P": (P, ("X",))})


def _sem(F, env):
    """Classical two-valued semantics over subsets, as an oracle for the identity flavor."""
    if isinstance(F, Top):
        return True
    if isinstance(F, Bot):
        return False
    if isinstance(F, Atom):
        sizes = [s.size for s in F.sorts]
        k = 0
        for v, s in zip(F.args, sizes):
            k = k * s + env[v]
        return bool(F.pred.payload >> k & 1)
    if isinstance(F, Eq):
        return env[F.left] == env[F.right]
    if isinstance(F, And):
        return all(_sem(p, env) for p in F.parts)
    if isinstance(F, Or):
        return any(_sem(p, env) for p in F.parts)
    if isinstance(F, Imp):
        return (not _sem(F.left, env)) or _sem(F.right, env)
    if isinstance(F, Iff):
        return _sem(F.left, env) == _sem(F.right, env)
    if isinstance(F, Not):
        return not _sem(F.body, env)
    q = all if isinstance(F, Forall) else any
    return q(_sem(F.body, {**env, F.var: v}) for v in range(F.sort.size))


@st.composite
def formulas(draw, scope=(), depth=3):
    xs = [v for v, s in scope if s is X]
    ys = [v for v, s in scope if s is Y]
    leaves = [st.just(Top()), st.just(Bot())]
    if xs and ys:
        leaves.append(st.builds(lambda a, b: Atom(R, (a, b), (X, Y)), st.sampled_from(xs), st.sampled_from(ys)))
    if xs:
        leaves.append(st.builds(lambda a: Atom(P, (a,), (X,)), st.sampled_from(xs)))
        leaves.append(st.builds(Eq, st.sampled_from(xs), st.sampled_from(xs)))
    if depth == 0:
        return draw(st.one_of(leaves))
    kind = draw(st.sampled_from(["leaf", "and", "or", "imp", "iff", "not", "forall", "exists"]))
    sub = lambda sc=scope: formulas(sc, depth - 1)
    if kind == "leaf":
        return draw(st.one_of(leaves))
    if kind in ("and", "or"):
        parts = tuple(draw(st.lists(sub(), min_size=0, max_size=3)))
        return And(parts) if kind == "and" else Or(parts)
    if kind in ("imp", "iff"):
        return (Imp if kind == "imp" else Iff)(draw(sub()), draw(sub()))
    if kind == "not":
        return Not(draw(sub()))
    var = f"v{len(scope)}"
    sort = draw(st.sampled_from([X, Y]))
    body = draw(sub(scope + ((var, sort),)))
    return (Forall if kind == "forall" else Exists)(var, sort, body)


@given(formulas())
def test_closed_formulas_match_classical_semantics(F):
    assert holds(T1, F) == _sem(F, {})


@given(formulas(scope=(("a", X), ("b", Y))))
def test_open_formulas_pointwise(F):
    val = eval_formula(T1, F, (("a", X), ("b", Y)))
    for a, b in itertools.product(range(2), range(3)):
        assert bool(val.payload >> (a * 3 + b) & 1) == _sem(F, {"a": a, "b": b})


NAMES = {"X": X, "Y": Y, "R": R, "P": P}


@given(formulas())
def test_sexpr_roundtrip(F):
    text = to_sexpr(F, NAMES)
    G = parse_formula(text, SIG)
    assert to_sexpr(G, NAMES) == text
    assert holds(T1, G) == holds(T1, F)


def test_parse_examples():
    F = parse_formula("(forall (x X) (exists (y Y) (R x y)))", SIG)
    assert holds(T1, F)
    assert holds(T1, parse_formula("(exists (x X) (and (P x) (exists (y Y) (R x y))))", SIG))
    assert not holds(T1, parse_formula("(forall (x X) (P x))", SIG))
    assert holds(T1, parse_formula("(forall (x X) (-> (P x) (exists (y Y) (and (R x y) (not (= x x))))))", SIG)) is False


@pytest.mark.parametrize("text, where", [
    ("(forall (x Z) true)", "unknown sort"),
    ("(Q x)", "unknown predicate"),
    ("(and true", "unclosed"),
    (")", "unexpected"),
    ("(R x)", "takes 2"),
    ("(implies true)", "takes 2"),
    ("true false", "trailing"),
])
def test_parse_errors(text, where):
    with pytest.raises(FormulaError, match=where):
        parse_formula(text, SIG)


def test_sort_mismatch_and_unbound():
    with pytest.raises(FormulaError, match="unbound"):
        eval_formula(T1, Atom(P, ("z",)))
    with pytest.raises(FormulaError):
        eval_formula(T1, Forall("y", Y, Atom(P, ("y",), (X,))))


def test_builders_and_free_vars():
    F = forall([("x", X), ("y", Y)], atom(R, "x", "y"))
    assert isinstance(F, Forall) and isinstance(F.body, Forall)
    assert free_vars(F) == set() and free_vars(F.body) == {"x"}
    assert free_vars(exists([("y", Y)], And((atom(R, "x", "y"), Eq("x", "z"))))) == {"x", "z"}


def test_shadowing_uses_innermost_binder():
    F = Forall("x", X, Exists("x", Y, Atom(T1.pred(Y, {2}), ("x",))))
    assert holds(T1, F)


def test_context_cap():
    T = PowerTripos(2, Caps(max_context=16))
    with pytest.raises(CapExceeded):
        eval_formula(T, forall([("x", Y), ("y", Y)], Top()))


def test_implicative_eval_agrees_with_fiber_ops():
    T = ImplicativeTripos(from_heyting(chain(3)))
    Q = T.pred(X, (1, 2))
    val = eval_formula(T, Exists("x", X, Atom(Q, ("x",))))
    assert T.holds(val)
    assert not holds(T, Forall("x", X, Atom(Q, ("x",))))
    # (h /\ top) vs h: fiberwise meet under the encoding is equivalent to the lattice meet
    assert T.equiv(eval_formula(T, And((Atom(Q, ("x",)), Top())), (("x", X),)), Q)
