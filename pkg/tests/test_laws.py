import itertools

import pytest

from tripos.core import ImplicativeTripos, Predicate, PowerTripos
from tripos.finset import FinMap, FinSetObj, product_obj
from tripos.functors import maybe_functor, power_functor
from tripos.implicative import from_heyting
from tripos.lattice import chain, diamond
from tripos.laws import (
    GenericFamily,
    assembly_check,
    check_comprehension,
    check_implicative_kernel,
    check_regular,
    check_skolem,
    check_tripos_composition,
    comprehension_witness,
    find_generic_family,
    is_generic,
    is_weakly_generic,
    subquotient_verdicts,
    implicative_morphism_check,
    weak_to_generic,
)
from tripos.verdict import CAP_EXCEEDED, FAILS, HOLDS
from tripos.config import Caps

ID = PowerTripos(1)
P2 = PowerTripos(2)
H3 = ImplicativeTripos(from_heyting(chain(3)))
B2 = ImplicativeTripos(from_heyting(chain(2)))


# --- comprehension ---------------------------------------------------------------

@pytest.mark.parametrize("i, j", list(itertools.product((1, 2, 3), repeat=2)))
def test_comprehension_identity(i, j):
    v = check_comprehension(ID, FinSetObj(i), FinSetObj(j))
    assert v.status == HOLDS
    assert v.details["checked"] == 2 ** (i * j)


@pytest.mark.parametrize("i, j", list(itertools.product((0, 1, 2), repeat=2)))
def test_comprehension_implicative(i, j):
    v = check_comprehension(H3, FinSetObj(i), FinSetObj(j))
    assert v.status == HOLDS
    assert v.details["checked"] == 3 ** (i * j)


def test_comprehension_power2_small():
    assert check_comprehension(P2, FinSetObj(1), FinSetObj(1)).status == HOLDS


def test_comprehension_witness_shapes():
    W = comprehension_witness(H3, FinSetObj(2))
    assert W.power_index.size == 9
    # eps(i, phi) = phi(i) with phi read as a tuple in lex order
    for i in range(2):
        for k, phi in enumerate(itertools.product(range(3), repeat=2)):
            assert W.epsilon.payload[i * 9 + k] == phi[i]
    W1 = comprehension_witness(ID, FinSetObj(3))
    assert W1.power_index.size == 8
    for i, U in itertools.product(range(3), range(8)):
        assert bool(W1.epsilon.payload >> (i * 8 + U) & 1) == bool(U >> i & 1)


def test_comprehension_cap():
    v = check_comprehension(PowerTripos(1, Caps(max_fiber=8)), FinSetObj(2), FinSetObj(2))
    assert v.status == CAP_EXCEEDED


# --- Skolem witnesses ----------------------------------------------------------

@pytest.mark.parametrize("i, j", [(1, 1), (2, 2), (2, 3), (3, 2)])
def test_skolem_identity_is_curried_rho(i, j):
    I, J = FinSetObj(i), FinSetObj(j)
    W = comprehension_witness(ID, I)
    for rho in ID.fiber(product_obj(I, J)):
        v = check_skolem(ID, rho, W)
        assert v.status == HOLDS
        r = v.details["r"]
        for jj in range(j):
            curried = sum(1 << ii for ii in range(i) if rho.payload >> (ii * j + jj) & 1)
            assert r.table[jj] == curried


def test_skolem_epsilon_itself():
    I = FinSetObj(2)
    W = comprehension_witness(H3, I)
    v = check_skolem(H3, W.epsilon, W)
    assert v.status == HOLDS
    assert v.details["r"].table == tuple(range(9))
    assert v.details["tried"] == 1


def test_skolem_power2_recorded_outcome():
    I = J = FinSetObj(2)
    IJ = product_obj(I, J)
    W = comprehension_witness(P2, I)
    # points of F_2(I x J) = (I x J)^2 are numbered lex; point 14 is ((1,1),(1,0)),
    # whose two J-coordinates differ, so no single r: J -> P(I) can produce it
    v = check_skolem(P2, P2.pred(IJ, 1 << 14), W)
    assert v.status == FAILS
    # point 5 is ((0,1),(0,1)), with equal J-coordinates: a witness exists
    v = check_skolem(P2, P2.pred(IJ, 1 << 5), W)
    assert v.status == HOLDS and v.details["r"].table == (0, 1)
    for payload in (0, 0xFFFF):
        assert check_skolem(P2, P2.pred(IJ, payload), W).status == HOLDS


def test_skolem_shape_errors():
    W = comprehension_witness(ID, FinSetObj(2))
    with pytest.raises(ValueError):
        check_skolem(ID, ID.top(FinSetObj(3)), W)
    W0 = comprehension_witness(ID, FinSetObj(0))
    with pytest.raises(ValueError):
        check_skolem(ID, ID.top(FinSetObj(0)), W0)


# --- generic families ------------------------------------------------------------

def test_generic_identity_is_true_over_two():
    v = find_generic_family(ID, range(0, 4), 3)
    assert v.status == HOLDS
    g = v.witness
    assert g.sigma.size == 2 and g.t.payload == 0b10


def test_generic_heyting_is_identity_table():
    v = find_generic_family(H3, range(0, 4), 2)
    assert v.status == HOLDS
    assert v.witness.sigma.size == 3 and v.witness.t.payload == (0, 1, 2)


def test_generic_power2_none_found_small_bounds():
    v = find_generic_family(P2, range(0, 3), 2)
    assert v.status == FAILS
    assert v.summary.startswith("none-found-within-bounds")
    assert [entry["sigma"] for entry in v.details["log"]] == [0, 1, 2]


@pytest.mark.parametrize("T, i_max", [(ID, 3), (H3, 2)])
def test_generic_implies_weakly_generic(T, i_max):
    g = find_generic_family(T, range(0, 4), i_max).witness
    assert is_generic(T, g, i_max).holds
    v = is_weakly_generic(T, g, i_max)
    assert v.status == HOLDS
    assert all(e.dom.size == e.cod.size for e, _ in v.details["witnesses"].values())


def test_weakly_generic_failures():
    empty = GenericFamily(FinSetObj(1), ID.bot(FinSetObj(1)))
    v = is_weakly_generic(ID, empty, 2)
    assert v.status == FAILS
    assert v.witness["phi"] == ID.top(FinSetObj(v.witness["I"]))


def test_classifiers_reproduce_predicates():
    g = GenericFamily(FinSetObj(2), ID.pred(FinSetObj(2), 0b10))
    v = is_generic(ID, g, 3, witnesses=True)
    for (k, payload), p in v.details["classifiers"].items():
        assert ID.reindex(g.t, p).payload == payload


# --- weak to generic -----------------------------------------------------------------

def test_weak_to_generic_identity():
    g = GenericFamily(FinSetObj(2), ID.pred(FinSetObj(2), 0b10))
    tr = weak_to_generic(ID, g, 3)
    assert tr.verdict.status == HOLDS
    assert tr.E_obj.size == 4  # (0,{0}), (0,{0,1}), (1,{1}), (1,{0,1})
    assert all(U >> u & 1 for u, U in zip(tr.p.table, tr.q.table))
    assert tr.audits and all(a.h_onto and a.ok for a in tr.audits)
    assert is_generic(ID, tr.result, 3).holds
    for a in tr.audits:
        for i in range(a.I):
            assert a.g.table[i] == sum({1 << a.f.table[j] for j in range(a.J) if a.e.table[j] == i})


def test_weak_to_generic_heyting():
    g = GenericFamily(FinSetObj(3), H3.pred(FinSetObj(3), (0, 1, 2)))
    tr = weak_to_generic(H3, g, 2)
    assert tr.verdict.status == HOLDS
    assert is_generic(H3, tr.result, 2).holds


def test_weak_to_generic_rejects_non_weak():
    with pytest.raises(ValueError, match="not weakly generic"):
        weak_to_generic(ID, GenericFamily(FinSetObj(1), ID.bot(FinSetObj(1))), 2)


# --- regularity --------------------------------------------------------------------

def test_regular_power_flavors():
    assert check_regular(ID).status == HOLDS
    v = check_regular(P2, max_size=4)
    assert v.status == HOLDS
    assert v.details["epis_checked"] > 0 and v.details["agreement_checked"] > 0


def test_regular_implicative():
    v = check_regular(H3, max_size=2)
    assert v.status == HOLDS and v.details["prestack_checked"] > 0


# --- composition -----------------------------------------------------------------

def test_composition_identity_identity():
    assert check_tripos_composition(power_functor(1), power_functor(1)).status == HOLDS


def test_composition_F2_after_identity():
    v = check_tripos_composition(power_functor(1), power_functor(2))
    assert v.status == HOLDS
    assert sorted(v.details["witnesses"]) == [0, 1, 2, 3, 4]


def test_composite_F2_F3_matches_F6():
    comp = power_functor(3).then(power_functor(2))
    assert subquotient_verdicts(comp, max_obj=3, i_max=2) == subquotient_verdicts(power_functor(6), max_obj=3, i_max=2)
    for k in range(4):
        X = FinSetObj(k)
        assert comp.obj(X).size == power_functor(6).obj(X).size


def test_composition_with_maybe_fails():
    v = check_tripos_composition(power_functor(1), maybe_functor())
    assert v.status == FAILS
    assert v.witness["stage"] == "F2"


# --- assemblies ------------------------------------------------------------------------

def test_assemblies():
    for k in range(5):
        v = assembly_check(ID, FinSetObj(k))
        assert v.status == HOLDS and v.details["I"] <= k
    v = assembly_check(P2, FinSetObj(3), i_max=2)
    assert v.status == HOLDS and v.details["I"] == 2
    assert assembly_check(P2, FinSetObj(5), i_max=2).status == FAILS
    bad = FinMap(FinSetObj(2), FinSetObj(4), (1, 1))
    assert assembly_check(P2, FinSetObj(2), candidate=bad).status == FAILS
    with pytest.raises(TypeError):
        assembly_check(H3, FinSetObj(1))


# --- implicative morphisms ------------------------------------------------------------

def test_identity_morphism():
    v = implicative_morphism_check((0, 1, 2), H3, H3)
    assert v.status == HOLDS and all(c > 0 for c in v.details["counts"].values())


def test_constant_top_morphism_fails_at_exists():
    # along the empty map 0 -> 1, exists of the empty family is bottom,
    # and the constant map sends bottom to top
    v = implicative_morphism_check((2, 2, 2), H3, H3)
    assert v.status == FAILS
    assert v.witness["law"] == "exists"
    assert v.witness["u"].dom.size == 0


def test_chain_collapse_to_boolean():
    assert implicative_morphism_check((0, 1, 1), H3, B2).status == HOLDS
    # the other collapse sends h to bottom, also a lattice map
    assert implicative_morphism_check((0, 0, 1), H3, B2).status == HOLDS


def test_non_monotone_map_rejected():
    v = implicative_morphism_check((1, 0, 1), H3, B2)
    assert v.status == FAILS


def test_morphism_table_validation():
    with pytest.raises(ValueError):
        implicative_morphism_check((0, 1), H3, B2)
    with pytest.raises(ValueError):
        implicative_morphism_check((0, 1, 5), H3, B2)


# --- kernel --------------------------------------------------------------------------------

@pytest.mark.parametrize("L", [chain(2), chain(3), diamond()])
def test_kernel(L):
    v = check_implicative_kernel(from_heyting(L), max_size=2)
    assert v.status == HOLDS and v.details["compared"] > 0
