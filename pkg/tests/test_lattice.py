import itertools

import pytest
from hypothesis import given, strategies as st

from tripos.lattice import (
    LatticeError,
    all_lattices,
    boolean,
    chain,
    diamond,
    heyting_from_order,
    is_distributive,
    lattice_from_pairs,
    m3,
    n5,
    validate_lattice,
)

SHIPPED = [chain(1), chain(2), chain(3), chain(4), boolean(2), boolean(3), diamond(), m3(), n5()]


def test_unlabelled_lattice_counts():
    # number of lattices on n unlabelled elements (OEIS A006966)
    assert [len(all_lattices(n)) for n in range(1, 6)] == [1, 1, 1, 2, 5]


@pytest.mark.parametrize("L", SHIPPED, ids=lambda L: f"size{L.size}")
def test_meet_join_are_glb_lub(L):
    r = range(L.size)
    for a, b in itertools.product(r, r):
        m, j = L.meet[a][b], L.join[a][b]
        lower = [c for c in r if L.leq[c][a] and L.leq[c][b]]
        upper = [c for c in r if L.leq[a][c] and L.leq[b][c]]
        assert m in lower and all(L.leq[c][m] for c in lower)
        assert j in upper and all(L.leq[j][c] for c in upper)
    assert all(L.leq[a][L.top] and L.leq[L.bottom][a] for a in r)


@pytest.mark.parametrize("L", SHIPPED, ids=lambda L: f"size{L.size}")
def test_big_ops_fold(L):
    r = range(L.size)
    assert L.big_meet([]) == L.top and L.big_join([]) == L.bottom
    for S in itertools.combinations(r, 2):
        assert L.big_meet(S) == L.meet[S[0]][S[1]]


def test_validation_errors():
    with pytest.raises(LatticeError, match="not a poset"):
        validate_lattice([[True, True], [True, True]])
    with pytest.raises(LatticeError, match="no top"):
        validate_lattice([[True, False], [False, True]])
    # two incomparable middle elements under a common pair of upper bounds
    with pytest.raises(LatticeError, match="missing join") as exc:
        lattice_from_pairs("0abcd1", [("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")])
    assert exc.value.witness is not None


def _heyting_oracle(L):
    # in a finite distributive lattice a -> b is the join of all c with c /\ a <= b
    r = range(L.size)
    return tuple(tuple(L.big_join([c for c in r if L.leq[L.meet[c][a]][b]]) for b in r) for a in r)


@pytest.mark.parametrize("L", [chain(2), chain(3), chain(4), boolean(2), boolean(3), diamond()], ids=str)
def test_heyting_matches_join_oracle(L):
    assert is_distributive(L)
    H = heyting_from_order(L)
    assert H.imp == _heyting_oracle(L)
    r = range(L.size)
    for a, b, c in itertools.product(r, r, r):
        assert L.leq[c][H.imp[a][b]] == L.leq[L.meet[c][a]][b]


@pytest.mark.parametrize("L", [m3(), n5()], ids=["M3", "N5"])
def test_non_distributive_are_not_heyting(L):
    assert not is_distributive(L)
    with pytest.raises(LatticeError, match="not Heyting"):
        heyting_from_order(L)


def test_every_small_distributive_lattice_is_heyting():
    for n in range(1, 6):
        for L in all_lattices(n):
            if is_distributive(L):
                heyting_from_order(L)
            else:
                with pytest.raises(LatticeError):
                    heyting_from_order(L)


@given(st.integers(1, 5), st.data())
def test_covers_generate_order(n, data):
    L = data.draw(st.sampled_from(all_lattices(n)))
    rebuilt = lattice_from_pairs([str(a) for a in range(n)], L.covers())
    assert rebuilt.leq == L.leq


def test_chain_labels():
    assert [chain(3).name(a) for a in range(3)] == ["bot", "h", "top"]
    assert diamond().size == 4 and is_distributive(diamond())
