import itertools

import pytest
from hypothesis import given, strategies as st

from tripos.config import CapExceeded, Caps
from tripos.core import (
    ImplicativeTripos,
    PowerTripos,
    Predicate,
    beck_chevalley_check,
    fiber_ops,
    power_table,
    prestack_check,
    reflects_order,
)
from tripos.finset import FinMap, FinSetObj, all_maps, bang, pullback
from tripos.implicative import from_heyting
from tripos.lattice import chain, diamond

from conftest import cospans, maps


def _as_set(T, phi):
    return set(T.elements(phi))


def _tuples(I, n):
    return list(itertools.product(range(I.size), repeat=n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fiber_enumeration_order_and_size(n):
    T = PowerTripos(n)
    F = T.fiber(FinSetObj(2))
    assert len(F) == 2 ** (2 ** n)
    assert len({p.payload for p in F}) == len(F)
    if n == 1:
        # lexicographic on characteristic tuples, element 0 most significant
        assert [sorted(_as_set(T, p)) for p in F] == [[], [(1,)], [(0,)], [(0,), (1,)]]


@pytest.mark.parametrize("n", [1, 2])
@given(data=st.data())
def test_power_reindex_and_quantifiers_against_set_oracle(n, data):
    T = PowerTripos(n)
    u = data.draw(maps(max_size=3))
    cod = _tuples(u.cod, n)
    dom = _tuples(u.dom, n)
    phi = T.pred(u.cod, set(data.draw(st.sets(st.sampled_from(range(len(cod))))) if cod else set()))
    psi = T.pred(u.dom, set(data.draw(st.sets(st.sampled_from(range(len(dom))))) if dom else set()))
    un = lambda xs: tuple(u(x) for x in xs)
    assert _as_set(T, T.reindex(phi, u)) == {xs for xs in dom if un(xs) in _as_set(T, phi)}
    assert _as_set(T, T.exists(u, psi)) == {un(xs) for xs in _as_set(T, psi)}
    assert _as_set(T, T.forall(u, psi)) == {ys for ys in cod if all(xs in _as_set(T, psi) for xs in dom if un(xs) == ys)}


def test_power_table_matches_coordinatewise_map():
    u = FinMap(FinSetObj(3), FinSetObj(2), (1, 0, 1))
    tab = power_table(u.table, 3, 2, 2)
    for k, (a, b) in enumerate(itertools.product(range(3), repeat=2)):
        assert tab[k] == u(a) * 2 + u(b)


def test_power_equality_is_diagonal_of_pairs():
    T = PowerTripos(2)
    I = FinSetObj(2)
    eq = T.equality(I)
    # members are pairs ((i, i2), (i, i2)) of I x I written as 2-tuples of codes i * 2 + i
    assert _as_set(T, eq) == {(a * 2 + a, b * 2 + b) for a in range(2) for b in range(2)}


def _exists_oracle(A, u, phi):
    L, imp = A.lattice, A.imp
    out = []
    for j in range(u.cod.size):
        vals = []
        for c in range(A.size):
            inner = L.big_meet(imp[phi[i]][c] for i in range(u.dom.size) if u(i) == j)
            vals.append(imp[inner][c])
        out.append(L.big_meet(vals))
    return tuple(out)


@pytest.mark.parametrize("alg", [from_heyting(chain(3)), from_heyting(chain(3), [1, 2]), from_heyting(diamond())],
                         ids=["chain3", "chain3-h", "bool4"])
@given(data=st.data())
def test_implicative_operations_against_formulas(alg, data):
    T = ImplicativeTripos(alg)
    A = alg.structure
    u = data.draw(maps(max_size=3))
    phi = tuple(data.draw(st.integers(0, A.size - 1)) for _ in range(u.dom.size))
    P = T.pred(u.dom, phi)
    assert T.exists(u, P).payload == _exists_oracle(A, u, phi)
    assert T.forall(u, P).payload == tuple(
        A.lattice.big_meet(phi[i] for i in range(u.dom.size) if u(i) == j) for j in range(u.cod.size))
    L, imp = A.lattice, A.imp
    acc = L.top
    psi = tuple(data.draw(st.integers(0, A.size - 1)) for _ in range(u.dom.size))
    for x, y in zip(phi, psi):
        acc = L.meet[acc][imp[x][y]]
    assert T.entails(P, T.pred(u.dom, psi)) == (acc in alg.separator.members)


def test_heyting_implicative_is_pointwise():
    T = ImplicativeTripos(from_heyting(chain(3)))
    assert T.exact
    L = T.algebra.lattice
    for phi in T.fiber(FinSetObj(2)):
        for psi in T.fiber(FinSetObj(2)):
            assert T.entails(phi, psi) == all(L.leq[a][b] for a, b in zip(phi.payload, psi.payload))


def test_inexact_key_is_class_invariant():
    T = ImplicativeTripos(from_heyting(chain(3), [1, 2]))
    assert not T.exact
    F = T.fiber(FinSetObj(2))
    for phi in F:
        for psi in F:
            assert (T.key(phi) == T.key(psi)) == T.equiv(phi, psi)


def test_fiber_cap():
    T = PowerTripos(2, Caps(max_fiber=1 << 4))
    with pytest.raises(CapExceeded):
        T.fiber(FinSetObj(3))


def test_fiber_ops_and_bounds():
    T = PowerTripos(1)
    ops = fiber_ops(T)
    I = FinSetObj(2)
    assert ops["top"](I).payload == 3 and ops["bot"](I).payload == 0
    with pytest.raises(ValueError):
        T.meet(T.top(I), T.top(FinSetObj(1)))
    with pytest.raises(ValueError):
        T.pred(I, 8)


@pytest.mark.parametrize("T", [PowerTripos(1), PowerTripos(2), ImplicativeTripos(from_heyting(chain(3)))],
                         ids=["identity", "power2", "chain3"])
@given(fg=cospans(3), data=st.data())
def test_beck_chevalley_on_random_squares(T, fg, data):
    f, g = fg
    lim = pullback(f, g)
    p1, p2 = lim.projections
    phi = data.draw(st.sampled_from(T.fiber(f.dom)))
    assert beck_chevalley_check(T, p1, p2, f, g, phi).holds


def test_beck_chevalley_rejects_non_pullback():
    T = PowerTripos(1)
    d = FinMap(FinSetObj(2), FinSetObj(2), (0, 1))
    f = bang(FinSetObj(2))
    with pytest.raises(ValueError):
        beck_chevalley_check(T, d, d, f, f, T.top(FinSetObj(2)))


def test_reflection_along_epis_and_non_epis():
    T = PowerTripos(1)
    two, three = FinSetObj(2), FinSetObj(3)
    assert reflects_order(T, FinMap(three, two, (0, 1, 1))) is None
    bad = reflects_order(T, FinMap(two, three, (0, 1)))
    assert bad is not None
    phi, psi = bad
    assert not T.entails(phi, psi)
    assert prestack_check(T, FinMap(three, two, (0, 0, 1))).holds
    with pytest.raises(ValueError):
        prestack_check(T, FinMap(two, three, (0, 1)))
