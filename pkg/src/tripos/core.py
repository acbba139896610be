"""Fibered preorders over finite sets: the two concrete tripos families.

``PowerTripos(n)`` is the subobject fibration of ``Set`` pulled back along
``I |-> I^n``: a predicate over ``I`` is a subset of ``I^n`` (bitmask), and
reindexing / quantifiers act along ``u^n``.  ``n = 1`` is the identity
flavor, i.e. ordinary subsets.

``ImplicativeTripos(A)`` has predicates ``I -> A`` ordered by
``phi |- psi  iff  meet_i (phi_i -> psi_i) in S``.  Its connectives and
quantifiers are the second-order encodings

    a /\\ b  = meet_c ((a -> b -> c) -> c)
    a \\/ b  = meet_c ((a -> c) -> (b -> c) -> c)
    (exists_u phi)(j) = meet_c ((meet_{u(i)=j} (phi_i -> c)) -> c)
    (forall_u phi)(j) = meet_{u(i)=j} phi_i

which are only Heyting operations up to ``-||-``; the law suite checks this.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .config import DEFAULT_CAPS, CapExceeded, Caps
from .finset import (
    FinMap,
    FinSetObj,
    encode,
    is_epi,
    is_pullback_square,
    product_elements,
    product_obj,
)
from .implicative import ImplicativeAlgebra
from .verdict import fails, holds

Payload = Union[int, tuple]


@dataclass(frozen=True)
class Predicate:
    index: FinSetObj
    payload: Payload

    def __repr__(self):
        return f"Predicate({self.index.size}, {self.payload!r})"

    def to_json(self):
        p = self.payload
        return {"index": self.index.size, "payload": list(p) if isinstance(p, tuple) else p}


def _same(a: FinSetObj, b: FinSetObj, what="index"):
    if a.size != b.size:
        raise ValueError(f"{what} mismatch: {a.size} vs {b.size}")


def _bits(mask: int) -> Iterator[int]:
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


class Tripos:
    """Common interface; subclasses fix fibers, reindexing and logic."""

    flavor = "abstract"
    # True when -||- coincides with payload equality
    exact = False

    def __init__(self, caps: Caps = DEFAULT_CAPS):
        self.caps = caps

    # fibers -------------------------------------------------------------
    def fiber_size(self, I: FinSetObj) -> int:
        raise NotImplementedError

    def _payloads(self, I: FinSetObj) -> Iterator[Payload]:
        raise NotImplementedError

    def fiber(self, I: FinSetObj) -> list:
        n = self.fiber_size(I)
        if n > self.caps.max_fiber:
            raise CapExceeded(f"fiber over {I.size} has {n} predicates (cap {self.caps.max_fiber})")
        return [Predicate(I, p) for p in self._payloads(I)]

    def pred(self, I: FinSetObj, payload) -> Predicate:
        return Predicate(I, self._check_payload(I, payload))

    # order ----------------------------------------------------------------
    def entails(self, phi: Predicate, psi: Predicate) -> bool:
        _same(phi.index, psi.index)
        return self._entails(phi.index, phi.payload, psi.payload)

    def equiv(self, phi: Predicate, psi: Predicate) -> bool:
        return self.entails(phi, psi) and self.entails(psi, phi)

    def holds(self, phi: Predicate) -> bool:
        return self.entails(self.top(phi.index), phi)

    def key(self, phi: Predicate):
        """Hashable representative; equal keys imply ``-||-``."""
        return phi.payload

    # structure --------------------------------------------------------------
    def reindex(self, phi: Predicate, u: FinMap) -> Predicate:
        _same(phi.index, u.cod, "reindex sort")
        return Predicate(u.dom, self._reindex(phi.payload, u))

    def exists(self, u: FinMap, phi: Predicate) -> Predicate:
        _same(phi.index, u.dom, "quantifier sort")
        return Predicate(u.cod, self._exists(u, phi.payload))

    def forall(self, u: FinMap, phi: Predicate) -> Predicate:
        _same(phi.index, u.dom, "quantifier sort")
        return Predicate(u.cod, self._forall(u, phi.payload))

    def top(self, I: FinSetObj) -> Predicate:
        return Predicate(I, self._top(I))

    def bot(self, I: FinSetObj) -> Predicate:
        return Predicate(I, self._bot(I))

    def meet(self, phi: Predicate, psi: Predicate) -> Predicate:
        _same(phi.index, psi.index)
        return Predicate(phi.index, self._meet(phi.index, phi.payload, psi.payload))

    def join(self, phi: Predicate, psi: Predicate) -> Predicate:
        _same(phi.index, psi.index)
        return Predicate(phi.index, self._join(phi.index, phi.payload, psi.payload))

    def imp(self, phi: Predicate, psi: Predicate) -> Predicate:
        _same(phi.index, psi.index)
        return Predicate(phi.index, self._imp(phi.index, phi.payload, psi.payload))

    def equality(self, I: FinSetObj) -> Predicate:
        """The equality predicate on ``I x I``."""
        raise NotImplementedError

    def describe(self) -> str:
        return self.flavor


def fiber_enumerate(T: Tripos, I: FinSetObj) -> list:
    return T.fiber(I)


def fiber_ops(T: Tripos) -> dict:
    return {"top": T.top, "bot": T.bot, "and": T.meet, "or": T.join, "imp": T.imp}


def exists_along(T: Tripos, u: FinMap, phi: Predicate) -> Predicate:
    return T.exists(u, phi)


def forall_along(T: Tripos, u: FinMap, phi: Predicate) -> Predicate:
    return T.forall(u, phi)


# --- power triposes ------------------------------------------------------------

@lru_cache(maxsize=65536)
def power_table(table: tuple, dom: int, cod: int, n: int) -> tuple:
    """Lexicographic table of ``u^n : dom^n -> cod^n``."""
    if n == 1:
        return table
    sizes = [cod] * n
    return tuple(encode(sizes, [table[c] for c in xs]) for xs in product_elements([dom] * n))


def _bitrev(k: int, width: int) -> int:
    out = 0
    for x in range(width):
        if k >> (width - 1 - x) & 1:
            out |= 1 << x
    return out


class PowerTripos(Tripos):
    exact = True

    def __init__(self, n: int = 1, caps: Caps = DEFAULT_CAPS):
        if n < 1:
            raise ValueError("power exponent must be >= 1")
        super().__init__(caps)
        self.n = n
        self.flavor = "identity" if n == 1 else "subobject"

    def __repr__(self):
        return f"PowerTripos({self.n})"

    def __eq__(self, other):
        return isinstance(other, PowerTripos) and other.n == self.n

    def __hash__(self):
        return hash(("power", self.n))

    def describe(self):
        return "identity" if self.n == 1 else f"power:{self.n}"

    def F(self, I: FinSetObj) -> FinSetObj:
        return FinSetObj(I.size ** self.n)

    def F_map(self, u: FinMap) -> FinMap:
        return FinMap(self.F(u.dom), self.F(u.cod), self._ptab(u))

    def _ptab(self, u: FinMap) -> tuple:
        return power_table(u.table, u.dom.size, u.cod.size, self.n)

    def fiber_size(self, I):
        return 1 << (I.size ** self.n)

    def _payloads(self, I):
        w = I.size ** self.n
        for k in range(1 << w):
            yield _bitrev(k, w)

    def _check_payload(self, I, p):
        w = I.size ** self.n
        if isinstance(p, (set, frozenset, list, tuple)):
            m = 0
            for x in p:
                if not 0 <= x < w:
                    raise ValueError(f"code {x} outside F(I), which has {w} elements")
                m |= 1 << x
            p = m
        if p < 0 or p >> w:
            raise ValueError("subset mask wider than F(I)")
        return p

    def _full(self, I):
        return (1 << (I.size ** self.n)) - 1

    def _entails(self, I, a, b):
        return a & ~b == 0

    def _top(self, I):
        return self._full(I)

    def _bot(self, I):
        return 0

    def _meet(self, I, a, b):
        return a & b

    def _join(self, I, a, b):
        return a | b

    def _imp(self, I, a, b):
        return (self._full(I) & ~a) | b

    def _reindex(self, m, u):
        tab = self._ptab(u)
        out = 0
        for x, y in enumerate(tab):
            if m >> y & 1:
                out |= 1 << x
        return out

    def _exists(self, u, m):
        tab = self._ptab(u)
        out = 0
        for x in _bits(m):
            out |= 1 << tab[x]
        return out

    def _forall(self, u, m):
        full_dom = self._full(u.dom)
        return self._full(u.cod) & ~self._exists(u, full_dom & ~m)

    def equality(self, I):
        II = product_obj(I, I)
        diag = FinMap(I, II, tuple(i * I.size + i for i in range(I.size)))
        return self.exists(diag, self.top(I))

    def elements(self, phi: Predicate) -> list:
        """Members of ``phi`` as ``n``-tuples of index elements."""
        return [tuple(_decode_power(x, phi.index.size, self.n)) for x in _bits(phi.payload)]


def _decode_power(x, size, n):
    out = []
    for _ in range(n):
        out.append(x % size)
        x //= size
    return reversed(out)


# --- implicative triposes ----------------------------------------------------

class ImplicativeTripos(Tripos):
    flavor = "implicative"

    def __init__(self, algebra: ImplicativeAlgebra, caps: Caps = DEFAULT_CAPS):
        super().__init__(caps)
        self.algebra = algebra
        A = algebra.structure
        L = A.lattice
        n, imp, m = A.size, A.imp, L.meet
        self.N = n
        self.imp_t = imp
        self.meet_t = m
        self.T, self.B = L.top, L.bottom
        self.sep_mask = algebra.separator.mask
        r = range(n)

        def bigmeet(vals):
            acc = L.top
            for v in vals:
                acc = m[acc][v]
            return acc

        self.and_t = tuple(
            tuple(bigmeet(imp[imp[a][imp[b][c]]][c] for c in r) for b in r) for a in r
        )
        self.or_t = tuple(
            tuple(bigmeet(imp[imp[a][c]][imp[imp[b][c]][c]] for c in r) for b in r) for a in r
        )
        self._bigmeet = bigmeet
        self.exact = self.sep_mask == 1 << L.top and _is_heyting_like(A)

    def __repr__(self):
        return f"ImplicativeTripos({self.algebra!r})"

    def describe(self):
        return f"implicative:{self.algebra.name or self.N}"

    def fiber_size(self, I):
        return self.N ** I.size

    def _payloads(self, I):
        return itertools.product(range(self.N), repeat=I.size)

    def _check_payload(self, I, p):
        p = tuple(p)
        if len(p) != I.size or any(not 0 <= v < self.N for v in p):
            raise ValueError("payload must be a table I -> A")
        return p

    def _entails(self, I, a, b):
        imp, m = self.imp_t, self.meet_t
        acc = self.T
        for x, y in zip(a, b):
            acc = m[acc][imp[x][y]]
        return bool(self.sep_mask >> acc & 1)

    def _top(self, I):
        return (self.T,) * I.size

    def _bot(self, I):
        return (self.B,) * I.size

    def _meet(self, I, a, b):
        t = self.and_t
        return tuple(t[x][y] for x, y in zip(a, b))

    def _join(self, I, a, b):
        t = self.or_t
        return tuple(t[x][y] for x, y in zip(a, b))

    def _imp(self, I, a, b):
        t = self.imp_t
        return tuple(t[x][y] for x, y in zip(a, b))

    def _reindex(self, a, u):
        return tuple(a[j] for j in u.table)

    def _fibers(self, u, a):
        groups = [[] for _ in range(u.cod.size)]
        for i, j in enumerate(u.table):
            groups[j].append(a[i])
        return groups

    def _forall(self, u, a):
        return tuple(self._bigmeet(g) for g in self._fibers(u, a))

    def _exists(self, u, a):
        imp, bm, r = self.imp_t, self._bigmeet, range(self.N)
        out = []
        for g in self._fibers(u, a):
            out.append(bm(imp[bm(imp[x][c] for x in g)][c] for c in r))
        return tuple(out)

    def equality(self, I):
        return Predicate(
            FinSetObj(I.size * I.size),
            tuple(self.T if i == k else self.B for i in range(I.size) for k in range(I.size)),
        )

    def key(self, phi):
        if self.exact:
            return phi.payload
        return _class_key(self, phi)


def _is_heyting_like(A) -> bool:
    """``a -> b = top iff a <= b``: then ``S = {top}`` makes ``|-`` pointwise order."""
    L = A.lattice
    return all((A.imp[a][b] == L.top) == L.leq[a][b] for a in range(A.size) for b in range(A.size))


def _class_key(T: ImplicativeTripos, phi: Predicate):
    # the lex-least member of the -||- class, found by scanning the fiber
    for p in T._payloads(phi.index):
        if T._entails(phi.index, p, phi.payload) and T._entails(phi.index, phi.payload, p):
            return p
    raise AssertionError("unreachable: phi is equivalent to itself")


# --- structural checks -------------------------------------------------------

def beck_chevalley_check(T: Tripos, p1: FinMap, p2: FinMap, f: FinMap, g: FinMap, phi: Predicate):
    """Square ``P -p1-> X -f-> Z``, ``P -p2-> Y -g-> Z`` with ``phi`` over ``X``.

    Checks ``g^* exists_f phi -||- exists_p2 p1^* phi`` and the dual for forall.
    """
    if not is_pullback_square(p1, p2, f, g):
        raise ValueError("not a pullback square")
    lhs = T.reindex(T.exists(f, phi), g)
    rhs = T.exists(p2, T.reindex(phi, p1))
    if not T.equiv(lhs, rhs):
        return fails("beck-chevalley", {"quantifier": "exists", "phi": phi, "lhs": lhs, "rhs": rhs})
    lhs = T.reindex(T.forall(f, phi), g)
    rhs = T.forall(p2, T.reindex(phi, p1))
    if not T.equiv(lhs, rhs):
        return fails("beck-chevalley", {"quantifier": "forall", "phi": phi, "lhs": lhs, "rhs": rhs})
    return holds("beck-chevalley")


def reflects_order(T: Tripos, u: FinMap):
    """First pair with ``u^* phi |- u^* psi`` but not ``phi |- psi``, or ``None``."""
    J = u.cod
    preds = T.fiber(J)
    pulled = [T.reindex(p, u) for p in preds]
    if isinstance(T, PowerTripos):
        masks = [p.payload for p in preds]
        pm = [p.payload for p in pulled]
        for a in range(len(masks)):
            ma, pa = masks[a], pm[a]
            for b in range(len(masks)):
                if pa & ~pm[b] == 0 and ma & ~masks[b]:
                    return preds[a], preds[b]
        return None
    for a, phi in enumerate(preds):
        for b, psi in enumerate(preds):
            if T.entails(pulled[a], pulled[b]) and not T.entails(phi, psi):
                return phi, psi
    return None


def prestack_check(T: Tripos, e: FinMap):
    if not is_epi(e):
        raise ValueError("prestack_check needs an epi")
    bad = reflects_order(T, e)
    if bad is None:
        return holds("prestack", {"epi": list(e.table)})
    return fails("prestack", {"epi": e, "phi": bad[0], "psi": bad[1]})
