"""Implicative structures, separators and implicative algebras.

An implicative structure is a finite lattice with a binary ``imp`` satisfying
``x -> meet(Y) = meet(x -> y for y in Y)``; by finiteness this is the
binary case plus ``x -> top = top``.  Nothing else (in particular no
contravariance in the first argument) is assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .lattice import FinLattice, HeytingAlg, heyting_from_order


class ImplicativeError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _bits(mask: int) -> Iterator[int]:
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


def _mask(elements: Iterable[int]) -> int:
    m = 0
    for a in elements:
        m |= 1 << a
    return m


class ImplicativeStructure:
    __slots__ = ("lattice", "imp", "_up", "_comb")

    def __init__(self, lattice: FinLattice, imp):
        self.lattice = lattice
        self.imp = tuple(tuple(row) for row in imp)
        self._up = None
        self._comb = None

    def __eq__(self, other):
        return isinstance(other, ImplicativeStructure) and self.lattice == other.lattice and self.imp == other.imp

    def __hash__(self):
        return hash(self.imp)

    def __repr__(self):
        return f"ImplicativeStructure(size={self.size}, imp={self.imp})"

    @property
    def size(self) -> int:
        return self.lattice.size

    @property
    def top(self) -> int:
        return self.lattice.top

    @property
    def bottom(self) -> int:
        return self.lattice.bottom

    def upmasks(self) -> tuple:
        if self._up is None:
            L = self.lattice
            self._up = tuple(_mask(L.upset(a)) for a in range(L.size))
        return self._up

    def combinators(self) -> tuple:
        if self._comb is None:
            self._comb = combinators(self)
        return self._comb


def validate_implicative(L: FinLattice, imp) -> ImplicativeStructure:
    n = L.size
    if len(imp) != n or any(len(row) != n for row in imp):
        raise ImplicativeError("implication table shape does not match lattice")
    for row in imp:
        for v in row:
            if not 0 <= v < n:
                raise ImplicativeError(f"implication value {v} out of range")
    m, top = L.meet, L.top
    for x in range(n):
        if imp[x][top] != top:
            raise ImplicativeError(f"{L.name(x)} -> top != top", (x,))
    for x in range(n):
        row = imp[x]
        for a in range(n):
            for b in range(a + 1, n):
                if row[m[a][b]] != m[row[a]][row[b]]:
                    raise ImplicativeError(
                        f"{L.name(x)} -> ({L.name(a)} /\\ {L.name(b)}) != "
                        f"({L.name(x)} -> {L.name(a)}) /\\ ({L.name(x)} -> {L.name(b)})",
                        (x, a, b),
                    )
    return ImplicativeStructure(L, imp)


def combinators(A: ImplicativeStructure) -> tuple:
    """``(K, S)``: meets of ``x->y->x`` and ``(x->y->z)->(x->y)->x->z``."""
    i, m = A.imp, A.lattice.meet
    r = range(A.size)
    K = A.top
    for x in r:
        ix = i[x]
        for y in r:
            K = m[K][ix[i[y][x]]]
    S = A.top
    for x in r:
        ix = i[x]
        for y in r:
            xy = ix[y]
            ixy = i[xy]
            iy = i[y]
            for z in r:
                S = m[S][i[ix[iy[z]]][ixy[ix[z]]]]
    return K, S


@dataclass(frozen=True)
class Separator:
    members: frozenset

    def __contains__(self, a):
        return a in self.members

    @property
    def mask(self) -> int:
        return _mask(self.members)


def separator_violation(A: ImplicativeStructure, mask: int):
    """First reason ``mask`` fails to be a separator, or ``None``."""
    up = A.upmasks()
    n = A.size
    for a in _bits(mask):
        missing = up[a] & ~mask
        if missing:
            b = next(_bits(missing))
            return ("not-upward-closed", (a, b))
    K, S = A.combinators()
    if not mask >> K & 1:
        return ("missing-combinator", ("K", K))
    if not mask >> S & 1:
        return ("missing-combinator", ("S", S))
    imp = A.imp
    for a in _bits(mask):
        row = imp[a]
        for b in range(n):
            if mask >> row[b] & 1 and not mask >> b & 1:
                return ("mp-violation", (a, b))
    return None


def validate_separator(A: ImplicativeStructure, S: Iterable[int]) -> Separator:
    members = frozenset(S)
    v = separator_violation(A, _mask(members))
    if v is not None:
        kind, w = v
        L = A.lattice
        if kind == "not-upward-closed":
            msg = f"not upward closed: {L.name(w[0])} in S, {L.name(w[0])} <= {L.name(w[1])}, {L.name(w[1])} not in S"
        elif kind == "missing-combinator":
            msg = f"missing combinator {w[0]} = {L.name(w[1])}"
        else:
            a, b = w
            msg = f"modus ponens fails: {L.name(a)} and {L.name(a)} -> {L.name(b)} in S, {L.name(b)} not"
        raise ImplicativeError(msg, v)
    return Separator(members)


def closure_mask(A: ImplicativeStructure, gens: int) -> int:
    K, S = A.combinators()
    up, imp, n = A.upmasks(), A.imp, A.size
    cur = gens | 1 << K | 1 << S
    while True:
        new = cur
        for a in _bits(cur):
            new |= up[a]
        for a in _bits(new):
            row = imp[a]
            for b in range(n):
                if new >> row[b] & 1:
                    new |= 1 << b
        if new == cur:
            return cur
        cur = new


def separator_closure(A: ImplicativeStructure, gens: Iterable[int] = ()) -> Separator:
    """Least separator containing ``gens`` (worklist fixpoint)."""
    return Separator(frozenset(_bits(closure_mask(A, _mask(gens)))))


def all_separators(A: ImplicativeStructure) -> list:
    """Every separator, as bitmasks in increasing order (brute force)."""
    return [m for m in range(1 << A.size) if separator_violation(A, m) is None]


def least_separator_bruteforce(A: ImplicativeStructure, gens: Iterable[int] = ()) -> Separator:
    """Intersection of all separators containing ``gens``."""
    g = _mask(gens)
    out = (1 << A.size) - 1
    for m in all_separators(A):
        if m & g == g:
            out &= m
    return Separator(frozenset(_bits(out)))


class ImplicativeAlgebra:
    __slots__ = ("structure", "separator", "name")

    def __init__(self, structure: ImplicativeStructure, separator: Separator, name: str = ""):
        self.structure = structure
        self.separator = separator
        self.name = name

    def __repr__(self):
        L = self.lattice
        sep = sorted(L.name(a) for a in self.separator.members)
        return f"ImplicativeAlgebra({self.name or L.size}, S={sep})"

    def __eq__(self, other):
        return (
            isinstance(other, ImplicativeAlgebra)
            and self.structure == other.structure
            and self.separator == other.separator
        )

    def __hash__(self):
        return hash((self.structure, self.separator))

    @property
    def lattice(self) -> FinLattice:
        return self.structure.lattice

    @property
    def imp(self):
        return self.structure.imp

    @property
    def size(self):
        return self.structure.size


def implicative_algebra(L: FinLattice, imp, separator: Iterable[int], name: str = "") -> ImplicativeAlgebra:
    A = validate_implicative(L, imp)
    return ImplicativeAlgebra(A, validate_separator(A, separator), name)


def from_heyting(H: HeytingAlg | FinLattice, S: Iterable[int] | None = None, name: str = "") -> ImplicativeAlgebra:
    if isinstance(H, FinLattice):
        H = heyting_from_order(H)
    if S is None:
        S = [H.lattice.top]
    return implicative_algebra(H.lattice, H.imp, S, name)


# --- enumeration ------------------------------------------------------------

def implication_rows(L: FinLattice) -> list:
    """Maps ``A -> A`` preserving binary meets and top: the admissible rows of ``imp``."""
    n, m, top = L.size, L.meet, L.top
    rows = []
    for f in itertools.product(range(n), repeat=n):
        if f[top] != top:
            continue
        if all(f[m[a][b]] == m[f[a]][f[b]] for a in range(n) for b in range(a + 1, n)):
            rows.append(f)
    return rows


def all_implicative_structures(L: FinLattice) -> Iterator[ImplicativeStructure]:
    """Every implication table on ``L`` satisfying the meet axiom."""
    rows = implication_rows(L)
    for imp in itertools.product(rows, repeat=L.size):
        yield ImplicativeStructure(L, imp)


def all_implicative_algebras(L: FinLattice) -> Iterator[ImplicativeAlgebra]:
    for A in all_implicative_structures(L):
        for m in all_separators(A):
            yield ImplicativeAlgebra(A, Separator(frozenset(_bits(m))))


def closure_sweep(max_size: int = 4):
    """``separator_closure`` against the intersection oracle on every structure up to ``max_size``.

    Lattices are taken up to isomorphism; implication tables are all of them.
    """
    from .lattice import all_lattices
    from .verdict import fails, holds

    structures = pairs = 0
    for n in range(1, max_size + 1):
        full = (1 << n) - 1
        for L in all_lattices(n):
            for A in all_implicative_structures(L):
                structures += 1
                seps = all_separators(A)
                for g in range(1 << n):
                    pairs += 1
                    oracle = full
                    for s in seps:
                        if s & g == g:
                            oracle &= s
                    got = closure_mask(A, g)
                    if got != oracle:
                        return fails("separator-closure", {"imp": A.imp, "leq": L.leq, "gens": sorted(_bits(g)),
                                                           "closure": sorted(_bits(got)), "oracle": sorted(_bits(oracle))},
                                     {"max_size": max_size}, "closure differs from the least separator")
    return holds("separator-closure", {"max_size": max_size},
                 f"closure equals the intersection oracle on {structures} structures", structures=structures, pairs=pairs)
