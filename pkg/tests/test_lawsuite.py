import pytest

from tripos.core import ImplicativeTripos, PowerTripos
from tripos.implicative import from_heyting, all_implicative_algebras
from tripos.lattice import chain, diamond
from tripos.lawsuite import LAWS, check_laws
from tripos.verdict import FAILS, HOLDS


@pytest.mark.parametrize("T, size", [
    (PowerTripos(1), 3),
    (PowerTripos(2), 2),
    (ImplicativeTripos(from_heyting(chain(3))), 2),
    (ImplicativeTripos(from_heyting(diamond())), 2),
])
def test_all_laws_hold(T, size):
    v = check_laws(T, size)
    assert v.status == HOLDS, v.witness
    assert set(v.details["counts"]) == set(LAWS)
    assert all(c > 0 for c in v.details["counts"].values())


def test_non_heyting_implicative_algebra_satisfies_laws():
    # pick the first algebra whose separator is not just the top
    for L in (chain(2), chain(3)):
        algs = [a for a in all_implicative_algebras(L) if len(a.separator.members) > 1]
        if algs:
            alg = algs[0]
            break
    v = check_laws(ImplicativeTripos(alg), 1)
    assert v.status == HOLDS, v.witness


class _LooseExists(PowerTripos):
    """Existential quantification replaced by the top predicate."""

    def _exists(self, u, m):
        return self._full(u.cod)


class _MeetAsImp(PowerTripos):
    def _imp(self, I, a, b):
        return a & b


class _SkewedReindex(PowerTripos):
    """Reindexing that forgets the last point, so identities are not preserved."""

    def _reindex(self, m, u):
        out = super()._reindex(m, u)
        return out & ~(1 << (self.F(u.dom).size - 1)) if u.dom.size else out


@pytest.mark.parametrize("cls, law", [
    (_LooseExists, "exists-adjoint"),
    (_MeetAsImp, "heyting"),
    (_SkewedReindex, "reindex-functorial"),
])
def test_broken_structure_is_caught(cls, law):
    v = check_laws(cls(1), 2)
    assert v.status == FAILS
    assert v.witness["law"] == law
    if law == "heyting":
        assert v.witness["rule"] == "implication"


def test_law_subset():
    v = check_laws(PowerTripos(1), 2, laws=("frobenius",))
    assert v.status == HOLDS
    assert v.details["counts"]["frobenius"] > 0
    assert v.details["counts"].get("heyting", 0) == 0
