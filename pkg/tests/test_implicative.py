import itertools
from functools import reduce

import pytest
from hypothesis import given, strategies as st

from tripos.implicative import (
    ImplicativeError,
    ImplicativeStructure,
    all_implicative_algebras,
    all_implicative_structures,
    all_separators,
    closure_mask,
    combinators,
    from_heyting,
    least_separator_bruteforce,
    separator_closure,
    validate_implicative,
    validate_separator,
)
from tripos.lattice import LatticeError, all_lattices, boolean, chain, diamond, heyting_from_order, m3

HEYTING = [chain(2), chain(3), diamond(), chain(4), boolean(3)]


def _meet_all(L, vals):
    return reduce(lambda a, b: L.meet[a][b], vals, L.top)


def _K_S_oracle(A):
    L, i = A.lattice, A.imp
    r = range(A.size)
    K = _meet_all(L, [i[x][i[y][x]] for x in r for y in r])
    S = _meet_all(L, [i[i[x][i[y][z]]][i[i[x][y]][i[x][z]]] for x in r for y in r for z in r])
    return K, S


def _is_separator(A, S):
    # direct reading of the definition, independent of separator_violation
    L, i = A.lattice, A.imp
    K, Sc = _K_S_oracle(A)
    up = all(b in S for a in S for b in range(A.size) if L.leq[a][b])
    mp = all(b in S for a in S for b in range(A.size) if i[a][b] in S)
    return up and mp and K in S and Sc in S


@pytest.mark.parametrize("L", HEYTING, ids=lambda L: f"size{L.size}")
def test_heyting_structures_validate_with_top_combinators(L):
    H = heyting_from_order(L)
    A = validate_implicative(L, H.imp)
    assert combinators(A) == (L.top, L.top)
    validate_separator(A, [L.top])
    validate_separator(A, range(L.size))


def test_bottom_implication_rejected_at_top():
    L = chain(3)
    imp = [[L.bottom] * 3 for _ in range(3)]
    with pytest.raises(ImplicativeError) as exc:
        validate_implicative(L, imp)
    assert exc.value.witness == (0,)


def test_meet_axiom_witness():
    L = diamond()  # bot, a, b, top
    H = heyting_from_order(L)
    imp = [list(r) for r in H.imp]
    imp[0] = [3, 1, 3, 3]  # bot -> a := a breaks bot -> (a /\ b) = (bot -> a) /\ (bot -> b)
    with pytest.raises(ImplicativeError) as exc:
        validate_implicative(L, imp)
    assert len(exc.value.witness) == 3


def test_structures_match_brute_force_tables():
    # every table n^(n*n), filtered by the meet axiom, for lattices of size <= 3
    for n in range(1, 4):
        for L in all_lattices(n):
            brute = set()
            for flat in itertools.product(range(n), repeat=n * n):
                imp = [flat[k * n:(k + 1) * n] for k in range(n)]
                try:
                    validate_implicative(L, imp)
                except ImplicativeError:
                    continue
                brute.add(tuple(map(tuple, imp)))
            assert {A.imp for A in all_implicative_structures(L)} == brute


def test_algebra_count_up_to_three():
    # DERIVED: structures on each lattice of size <= 3, times separators found by the definition oracle
    counts = []
    for n in range(1, 4):
        total = 0
        for L in all_lattices(n):
            for A in all_implicative_structures(L):
                total += sum(1 for m in range(1 << n) if _is_separator(A, {a for a in range(n) if m >> a & 1}))
        counts.append(total)
    assert counts == [1, 5, 232]
    assert sum(1 for n in range(1, 4) for L in all_lattices(n) for _ in all_implicative_algebras(L)) == 238


def _structures_upto(n):
    return [A for k in range(1, n + 1) for L in all_lattices(k) for A in all_implicative_structures(L)]


SMALL = _structures_upto(3)


@pytest.mark.parametrize("k", range(len(SMALL) // 50 + 1))
def test_combinators_and_separators_against_oracles(k):
    for A in SMALL[k * 50:(k + 1) * 50]:
        assert combinators(A) == _K_S_oracle(A)
        seps = all_separators(A)
        for m in range(1 << A.size):
            assert (m in seps) == _is_separator(A, {a for a in range(A.size) if m >> a & 1})


def test_closure_idempotent_and_monotone_upto_three():
    for A in SMALL:
        full = (1 << A.size) - 1
        cl = [closure_mask(A, g) for g in range(full + 1)]
        for g in range(full + 1):
            assert closure_mask(A, cl[g]) == cl[g]
            assert cl[g] & g == g
            for h in range(full + 1):
                if g & h == g:
                    assert cl[g] & cl[h] == cl[g]


@st.composite
def four_element_structures(draw):
    L = draw(st.sampled_from(all_lattices(4)))
    from tripos.implicative import implication_rows

    rows = implication_rows(L)
    return ImplicativeStructure(L, [draw(st.sampled_from(rows)) for _ in range(4)])


@given(four_element_structures(), st.integers(0, 15), st.integers(0, 15))
def test_closure_properties_size_four(A, g, h):
    assert combinators(A) == _K_S_oracle(A)
    c = closure_mask(A, g)
    assert closure_mask(A, c) == c
    assert closure_mask(A, g | h) & c == c
    assert separator_closure(A, [a for a in range(4) if g >> a & 1]) == least_separator_bruteforce(A, [a for a in range(4) if g >> a & 1])


@given(four_element_structures())
def test_k_below_every_instance(A):
    K, S = combinators(A)
    r = range(4)
    L, i = A.lattice, A.imp
    assert all(L.leq[K][i[x][i[y][x]]] for x in r for y in r)


def test_closure_examples():
    B = validate_implicative(chain(2), heyting_from_order(chain(2)).imp)
    assert separator_closure(B, []).members == {1}
    C = validate_implicative(chain(3), heyting_from_order(chain(3)).imp)
    assert separator_closure(C, [0]).members == {0, 1, 2}
    assert 2 in separator_closure(C, []).members
    # {h, top} on the 3-chain: upward closed and closed under modus ponens
    validate_separator(C, [1, 2])


def test_separator_violations_named():
    C = validate_implicative(chain(3), heyting_from_order(chain(3)).imp)
    with pytest.raises(ImplicativeError, match="upward"):
        validate_separator(C, [1])
    with pytest.raises(ImplicativeError, match="combinator"):
        validate_separator(C, [])


def test_from_heyting():
    alg = from_heyting(chain(3))
    assert alg.separator.members == {2}
    with pytest.raises(LatticeError):
        from_heyting(m3())
