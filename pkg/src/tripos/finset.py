"""Finite sets and total functions between them.

Elements of a set of size ``n`` are the integers ``0..n-1``.  Products and
pullbacks use lexicographic pair encoding (first coordinate most
significant), so every constructed diagram is reproducible bit-for-bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

from .config import DEFAULT_CAPS, CapExceeded


@dataclass(frozen=True)
class FinSetObj:
    size: int
    labels: Optional[tuple] = None

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"negative size {self.size}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.size:
                raise ValueError("labels must have one entry per element")
            if len(set(self.labels)) != self.size:
                raise ValueError("labels must be distinct")

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(range(self.size))

    def label(self, x: int) -> str:
        return str(self.labels[x]) if self.labels else str(x)


def fs(n: int) -> FinSetObj:
    return FinSetObj(n)


@dataclass(frozen=True)
class FinMap:
    dom: FinSetObj
    cod: FinSetObj
    table: tuple

    def __post_init__(self):
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.dom.size:
            raise ValueError(f"table length {len(table)} != dom size {self.dom.size}")
        for y in table:
            if not 0 <= y < self.cod.size:
                raise ValueError(f"table entry {y} outside codomain of size {self.cod.size}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __repr__(self):
        return f"FinMap({self.dom.size}->{self.cod.size}, {list(self.table)})"

    def then(self, g: "FinMap") -> "FinMap":
        return compose(self, g)


def finmap(table: Sequence[int], cod: int | FinSetObj, dom: int | FinSetObj | None = None) -> FinMap:
    cod = cod if isinstance(cod, FinSetObj) else FinSetObj(cod)
    if dom is None:
        dom = FinSetObj(len(table))
    elif not isinstance(dom, FinSetObj):
        dom = FinSetObj(dom)
    return FinMap(dom, cod, tuple(table))


def identity(X: FinSetObj) -> FinMap:
    return FinMap(X, X, tuple(range(X.size)))


def compose(f: FinMap, g: FinMap) -> FinMap:
    """``g . f``: apply ``f`` first."""
    if f.cod.size != g.dom.size:
        raise ValueError(f"cannot compose: cod {f.cod.size} != dom {g.dom.size}")
    gt = g.table
    return FinMap(f.dom, g.cod, tuple(gt[y] for y in f.table))


def constant(X: FinSetObj, Y: FinSetObj, y: int) -> FinMap:
    return FinMap(X, Y, (y,) * X.size)


def bang(X: FinSetObj) -> FinMap:
    return FinMap(X, terminal(), (0,) * X.size)


def all_maps(X: FinSetObj, Y: FinSetObj) -> Iterator[FinMap]:
    """Every map X -> Y, lexicographic on the table."""
    for t in itertools.product(range(Y.size), repeat=X.size):
        yield FinMap(X, Y, t)


def all_epis(X: FinSetObj, Y: FinSetObj) -> Iterator[FinMap]:
    for f in all_maps(X, Y):
        if len(set(f.table)) == Y.size:
            yield f


def all_monos(X: FinSetObj, Y: FinSetObj) -> Iterator[FinMap]:
    for t in itertools.permutations(range(Y.size), X.size):
        yield FinMap(X, Y, t)


# --- epi / mono / image -----------------------------------------------------

@dataclass(frozen=True)
class EpiMono:
    is_epi: bool
    is_mono: bool

    @property
    def is_iso(self) -> bool:
        return self.is_epi and self.is_mono


def epi_mono(f: FinMap) -> EpiMono:
    rng = set(f.table)
    return EpiMono(is_epi=len(rng) == f.cod.size, is_mono=len(rng) == f.dom.size)


def is_epi(f: FinMap) -> bool:
    return len(set(f.table)) == f.cod.size


def is_mono(f: FinMap) -> bool:
    return len(set(f.table)) == f.dom.size


def image_factorization(f: FinMap) -> tuple[FinMap, FinMap]:
    """Return ``(e, m)`` with ``e`` epi, ``m`` mono, ``m . e = f``.

    The image elements are ordered by value in the codomain.
    """
    rng = sorted(set(f.table))
    pos = {y: k for k, y in enumerate(rng)}
    im = FinSetObj(len(rng))
    e = FinMap(f.dom, im, tuple(pos[y] for y in f.table))
    m = FinMap(im, f.cod, tuple(rng))
    return e, m


# --- limits -----------------------------------------------------------------

@lru_cache(maxsize=None)
def terminal() -> FinSetObj:
    return FinSetObj(1)


def initial() -> FinSetObj:
    return FinSetObj(0)


@dataclass(frozen=True)
class Limit:
    """Apex with its projections and a builder of mediating maps.

    ``mediate(cone)`` takes one leg per projection and returns the unique map
    into the apex, raising ``ValueError`` when the legs do not form a cone.
    """

    kind: str
    apex: FinSetObj
    projections: tuple
    mediate: Callable[..., FinMap]


def product_obj(*objs: FinSetObj) -> FinSetObj:
    n = 1
    for X in objs:
        n *= X.size
    return FinSetObj(n)


def encode(sizes: Sequence[int], coords: Sequence[int]) -> int:
    k = 0
    for s, c in zip(sizes, coords):
        k = k * s + c
    return k


def decode(sizes: Sequence[int], k: int) -> tuple:
    out = []
    for s in reversed(sizes):
        out.append(k % s)
        k //= s
    return tuple(reversed(out))


def product_elements(sizes: Sequence[int]) -> Iterator[tuple]:
    return itertools.product(*(range(s) for s in sizes))


def product(*objs: FinSetObj) -> Limit:
    sizes = [X.size for X in objs]
    apex = product_obj(*objs)
    projs = tuple(
        FinMap(apex, X, tuple(c[k] for c in product_elements(sizes)))
        for k, X in enumerate(objs)
    )

    def mediate(*legs: FinMap) -> FinMap:
        if len(legs) != len(objs):
            raise ValueError("wrong number of legs")
        W = legs[0].dom if legs else terminal()
        if legs and any(l.dom.size != W.size for l in legs):
            raise ValueError("legs have different domains")
        for l, X in zip(legs, objs):
            if l.cod.size != X.size:
                raise ValueError("leg codomain mismatch")
        return FinMap(W, apex, tuple(encode(sizes, [l.table[w] for l in legs]) for w in range(W.size)))

    return Limit("product", apex, projs, mediate)


def pairing(f: FinMap, g: FinMap) -> FinMap:
    return product(f.cod, g.cod).mediate(f, g)


def map_product(f: FinMap, g: FinMap) -> FinMap:
    """``f x g`` acting coordinatewise on lexicographic pairs."""
    src = [f.dom.size, g.dom.size]
    tgt = [f.cod.size, g.cod.size]
    table = tuple(encode(tgt, (f.table[a], g.table[b])) for a, b in product_elements(src))
    return FinMap(product_obj(f.dom, g.dom), product_obj(f.cod, g.cod), table)


def equalizer(f: FinMap, g: FinMap) -> Limit:
    if f.dom.size != g.dom.size or f.cod.size != g.cod.size:
        raise ValueError("equalizer needs parallel maps")
    pts = [x for x in range(f.dom.size) if f.table[x] == g.table[x]]
    apex = FinSetObj(len(pts))
    incl = FinMap(apex, f.dom, tuple(pts))
    pos = {x: k for k, x in enumerate(pts)}

    def mediate(h: FinMap) -> FinMap:
        if h.cod.size != f.dom.size:
            raise ValueError("leg codomain mismatch")
        try:
            return FinMap(h.dom, apex, tuple(pos[y] for y in h.table))
        except KeyError:
            raise ValueError("leg does not equalize") from None

    return Limit("equalizer", apex, (incl,), mediate)


def pullback(f: FinMap, g: FinMap) -> Limit:
    """Canonical pullback of the cospan ``f: X -> Z <- Y :g``."""
    if f.cod.size != g.cod.size:
        raise ValueError("pullback needs a cospan")
    pts = [(x, y) for x in range(f.dom.size) for y in range(g.dom.size) if f.table[x] == g.table[y]]
    apex = FinSetObj(len(pts))
    p1 = FinMap(apex, f.dom, tuple(x for x, _ in pts))
    p2 = FinMap(apex, g.dom, tuple(y for _, y in pts))
    pos = {pt: k for k, pt in enumerate(pts)}

    def mediate(a: FinMap, b: FinMap) -> FinMap:
        if a.dom.size != b.dom.size:
            raise ValueError("legs have different domains")
        try:
            return FinMap(a.dom, apex, tuple(pos[(a.table[w], b.table[w])] for w in range(a.dom.size)))
        except KeyError:
            raise ValueError("legs do not form a cone") from None

    return Limit("pullback", apex, (p1, p2), mediate)


def limits(kind: str, *args) -> Limit:
    if kind == "terminal":
        return Limit("terminal", terminal(), (), bang)
    if kind == "product":
        return product(*args)
    if kind == "equalizer":
        return equalizer(*args)
    if kind == "pullback":
        return pullback(*args)
    raise ValueError(f"unknown limit kind {kind!r}")


def is_pullback_square(p1: FinMap, p2: FinMap, f: FinMap, g: FinMap) -> bool:
    """Is ``P --p1--> X --f--> Z``, ``P --p2--> Y --g--> Z`` a pullback?"""
    if compose(p1, f).table != compose(p2, g).table:
        return False
    try:
        cmp = pullback(f, g).mediate(p1, p2)
    except ValueError:
        return False
    return epi_mono(cmp).is_iso


# --- subobjects and powersets ------------------------------------------------

@dataclass(frozen=True)
class Subobject:
    ambient: FinSetObj
    members: int  # bitmask over ambient

    def __post_init__(self):
        if self.members < 0 or self.members >> self.ambient.size:
            raise ValueError("bitmask wider than ambient")

    def __contains__(self, x: int) -> bool:
        return bool(self.members >> x & 1)

    def elements(self) -> list:
        return [x for x in range(self.ambient.size) if self.members >> x & 1]

    def meet(self, other: "Subobject") -> "Subobject":
        return Subobject(self.ambient, self.members & other.members)

    def join(self, other: "Subobject") -> "Subobject":
        return Subobject(self.ambient, self.members | other.members)

    def leq(self, other: "Subobject") -> bool:
        return self.members & ~other.members == 0

    def as_mono(self) -> FinMap:
        els = self.elements()
        return FinMap(FinSetObj(len(els)), self.ambient, tuple(els))


def subobject_from_elements(X: FinSetObj, elements) -> Subobject:
    m = 0
    for x in elements:
        m |= 1 << x
    return Subobject(X, m)


def _check_cap(X: FinSetObj, cap: int | None):
    cap = DEFAULT_CAPS.max_powerset_base if cap is None else cap
    if X.size > cap:
        raise CapExceeded(f"set of size {X.size} exceeds powerset cap {cap}")


def subobject_lattice(X: FinSetObj, cap: int | None = None) -> list:
    """All subobjects of X ordered by bitmask value (a linear extension of inclusion)."""
    _check_cap(X, cap)
    return [Subobject(X, m) for m in range(1 << X.size)]


@dataclass(frozen=True)
class MembershipRel:
    base: FinSetObj
    power: FinSetObj
    pairs: Subobject  # of base x power, lexicographic

    def holds(self, x: int, U: int) -> bool:
        return (x * self.power.size + U) in self.pairs


def powerset_membership(X: FinSetObj, cap: int | None = None) -> MembershipRel:
    """The relation ``x in U`` on ``X x P(X)``; subset ``U`` is encoded by its bitmask."""
    _check_cap(X, cap)
    P = FinSetObj(1 << X.size)
    amb = product_obj(X, P)
    m = 0
    for x in range(X.size):
        for U in range(P.size):
            if U >> x & 1:
                m |= 1 << (x * P.size + U)
    return MembershipRel(X, P, Subobject(amb, m))
