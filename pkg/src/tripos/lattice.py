"""Finite lattices and Heyting algebras given by operation tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence

from .finset import FinSetObj


class LatticeError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class FinLattice:
    elements: FinSetObj
    leq: tuple  # leq[a][b] is True iff a <= b
    meet: tuple
    join: tuple
    top: int
    bottom: int

    @property
    def size(self) -> int:
        return self.elements.size

    def __eq__(self, other):
        return isinstance(other, FinLattice) and self.leq == other.leq and self.elements == other.elements

    def __hash__(self):
        return hash(self.leq)

    def name(self, a: int) -> str:
        return self.elements.label(a)

    def big_meet(self, S: Iterable[int]) -> int:
        m = self.meet
        return reduce(lambda x, y: m[x][y], S, self.top)

    def big_join(self, S: Iterable[int]) -> int:
        j = self.join
        return reduce(lambda x, y: j[x][y], S, self.bottom)

    def upset(self, a: int) -> list:
        return [b for b in range(self.size) if self.leq[a][b]]

    def covers(self) -> list:
        """Hasse diagram edges (a, b) with a < b and nothing strictly between."""
        n, L = self.size, self.leq
        out = []
        for a in range(n):
            for b in range(n):
                if a != b and L[a][b] and not any(
                    c not in (a, b) and L[a][c] and L[c][b] for c in range(n)
                ):
                    out.append((a, b))
        return out


def big_meet(L: FinLattice, S: Iterable[int]) -> int:
    return L.big_meet(S)


def big_join(L: FinLattice, S: Iterable[int]) -> int:
    return L.big_join(S)


def _bound(leq, n, a, b, upper: bool) -> Optional[int]:
    if upper:
        cands = [c for c in range(n) if leq[a][c] and leq[b][c]]
        best = [c for c in cands if all(leq[c][d] for d in cands)]
    else:
        cands = [c for c in range(n) if leq[c][a] and leq[c][b]]
        best = [c for c in cands if all(leq[d][c] for d in cands)]
    return best[0] if best else None


def validate_lattice(leq: Sequence[Sequence[bool]], labels: Optional[Sequence[str]] = None) -> FinLattice:
    """Check ``leq`` is a partial order with all binary and empty meets/joins.

    Completeness reduces to these by finiteness.
    """
    n = len(leq)
    if any(len(row) != n for row in leq):
        raise LatticeError("order matrix is not square")
    leq = tuple(tuple(bool(x) for x in row) for row in leq)
    for a in range(n):
        if not leq[a][a]:
            raise LatticeError(f"not a poset: not reflexive at {a}", (a,))
    for a, b in itertools.combinations(range(n), 2):
        if leq[a][b] and leq[b][a]:
            raise LatticeError(f"not a poset: antisymmetry fails at {{{a},{b}}}", (a, b))
    for a, b, c in itertools.product(range(n), repeat=3):
        if leq[a][b] and leq[b][c] and not leq[a][c]:
            raise LatticeError(f"not a poset: transitivity fails at {a}<={b}<={c}", (a, b, c))
    tops = [t for t in range(n) if all(leq[a][t] for a in range(n))]
    bots = [t for t in range(n) if all(leq[t][a] for a in range(n))]
    if not tops:
        raise LatticeError("missing meet of {} (no top)", ())
    if not bots:
        raise LatticeError("missing join of {} (no bottom)", ())
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            j = _bound(leq, n, a, b, upper=True)
            if j is None:
                raise LatticeError(f"missing join of {{{a},{b}}}", (a, b))
            m = _bound(leq, n, a, b, upper=False)
            if m is None:
                raise LatticeError(f"missing meet of {{{a},{b}}}", (a, b))
            join[a][b] = join[b][a] = j
            meet[a][b] = meet[b][a] = m
    elements = FinSetObj(n, tuple(labels) if labels is not None else None)
    return FinLattice(
        elements, leq, tuple(map(tuple, meet)), tuple(map(tuple, join)), tops[0], bots[0]
    )


def lattice_from_pairs(labels: Sequence[str], pairs: Iterable[tuple]) -> FinLattice:
    """Build from generating order pairs; reflexive-transitive closure is taken."""
    n = len(labels)
    idx = {x: k for k, x in enumerate(labels)}
    leq = [[a == b for b in range(n)] for a in range(n)]
    for a, b in pairs:
        a = idx[a] if not isinstance(a, int) else a
        b = idx[b] if not isinstance(b, int) else b
        leq[a][b] = True
    for k in range(n):
        for a in range(n):
            if leq[a][k]:
                for b in range(n):
                    if leq[k][b]:
                        leq[a][b] = True
    return validate_lattice(leq, labels)


@dataclass(frozen=True)
class HeytingAlg:
    lattice: FinLattice
    imp: tuple

    @property
    def size(self):
        return self.lattice.size


def heyting_from_order(L: FinLattice) -> HeytingAlg:
    """Relative pseudocomplement ``a -> b = max{c : c /\\ a <= b}``."""
    n = L.size
    imp = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            cands = [c for c in range(n) if L.leq[L.meet[c][a]][b]]
            best = [c for c in cands if all(L.leq[d][c] for d in cands)]
            if not best:
                raise LatticeError(f"not Heyting: {{c : c /\\ {a} <= {b}}} has no maximum", (a, b))
            imp[a][b] = best[0]
    return HeytingAlg(L, tuple(map(tuple, imp)))


def is_distributive(L: FinLattice) -> bool:
    m, j = L.meet, L.join
    r = range(L.size)
    return all(m[a][j[b][c]] == j[m[a][b]][m[a][c]] for a in r for b in r for c in r)


# --- shipped lattices -------------------------------------------------------

def chain(n: int) -> FinLattice:
    if n == 2:
        labels = ["bot", "top"]
    elif n == 3:
        labels = ["bot", "h", "top"]
    else:
        labels = [str(k) for k in range(n)]
    return validate_lattice([[a <= b for b in range(n)] for a in range(n)], labels)


def boolean(k: int) -> FinLattice:
    """Powerset of a k-element set; element = bitmask."""
    n = 1 << k
    return validate_lattice([[a & ~b == 0 for b in range(n)] for a in range(n)], [str(a) for a in range(n)])


def diamond() -> FinLattice:
    """2 x 2 with labelled atoms."""
    return lattice_from_pairs(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


def m3() -> FinLattice:
    return lattice_from_pairs(
        ["bot", "a", "b", "c", "top"],
        [("bot", x) for x in "abc"] + [(x, "top") for x in "abc"],
    )


def n5() -> FinLattice:
    return lattice_from_pairs(
        ["bot", "a", "b", "c", "top"],
        [("bot", "a"), ("a", "b"), ("b", "top"), ("bot", "c"), ("c", "top")],
    )


def all_lattices(n: int) -> list:
    """Every lattice on ``n`` elements up to isomorphism.

    Brute force over order relations; the representative kept is the first
    relation (in enumeration order) of each isomorphism class.
    """
    if n == 0:
        return []
    pairs = [(a, b) for a in range(n) for b in range(n) if a < b]
    seen, out = set(), []
    perms = list(itertools.permutations(range(n)))
    # every finite poset has a linear extension, so restricting to a < b
    # in the labelling covers all isomorphism classes
    for bits in itertools.product((False, True), repeat=len(pairs)):
        leq = [[a == b for b in range(n)] for a in range(n)]
        for (a, b), on in zip(pairs, bits):
            leq[a][b] = on
        try:
            L = validate_lattice(leq)
        except LatticeError:
            continue
        key = min(tuple(L.leq[p[a]][p[b]] for a in range(n) for b in range(n)) for p in perms)
        if key not in seen:
            seen.add(key)
            out.append(L)
    return out
