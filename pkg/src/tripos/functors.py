"""Endofunctors of finite sets and the Set-valued tripos conditions.

A functor ``F: Set -> Set`` is a tripos when it preserves finite limits and
every set is a subquotient of some ``F(I)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .finset import (
    FinMap,
    FinSetObj,
    all_maps,
    encode,
    epi_mono,
    equalizer,
    is_epi,
    is_mono,
    pairing,
    product,
    product_elements,
    terminal,
)
from .verdict import fails, holds


@dataclass(frozen=True)
class SetFunctor:
    name: str
    obj: Callable[[FinSetObj], FinSetObj]
    fmap: Callable[[FinMap], FinMap]

    def __call__(self, x):
        return self.fmap(x) if isinstance(x, FinMap) else self.obj(x)

    def then(self, H: "SetFunctor") -> "SetFunctor":
        """``H . self``."""
        return SetFunctor(f"{H.name}.{self.name}", lambda X: H.obj(self.obj(X)), lambda u: H.fmap(self.fmap(u)))


def power_functor(n: int) -> SetFunctor:
    """``I |-> I^n`` with lexicographic encoding of tuples."""

    def obj(X):
        return FinSetObj(X.size ** n)

    def fmap(u):
        sizes = [u.cod.size] * n
        table = tuple(encode(sizes, [u.table[c] for c in xs]) for xs in product_elements([u.dom.size] * n))
        return FinMap(obj(u.dom), obj(u.cod), table)

    return SetFunctor(f"F{n}", obj, fmap)


def maybe_functor() -> SetFunctor:
    """``X |-> X + 1``; fails to preserve the terminal object."""

    def obj(X):
        return FinSetObj(X.size + 1)

    def fmap(u):
        return FinMap(obj(u.dom), obj(u.cod), u.table + (u.cod.size,))

    return SetFunctor("Maybe", obj, fmap)


def preserves_finite_limits(F: SetFunctor, max_size: int = 2):
    """Compare ``F(limit)`` with the limit of the ``F``-image via the comparison map."""
    checked = {"terminal": 0, "product": 0, "equalizer": 0}
    if F.obj(terminal()).size != 1:
        return fails("preserves-limits", {"kind": "terminal", "size": F.obj(terminal()).size})
    checked["terminal"] = 1
    sets = [FinSetObj(k) for k in range(max_size + 1)]
    for X in sets:
        for Y in sets:
            lim = product(X, Y)
            p1, p2 = lim.projections
            cmp = pairing(F.fmap(p1), F.fmap(p2))
            checked["product"] += 1
            if not epi_mono(cmp).is_iso:
                return fails("preserves-limits", {"kind": "product", "X": X, "Y": Y})
    for X in sets:
        for Y in sets:
            maps = list(all_maps(X, Y))
            for f in maps:
                for g in maps:
                    (incl,) = equalizer(f, g).projections
                    Fi = F.fmap(incl)
                    target = equalizer(F.fmap(f), F.fmap(g))
                    checked["equalizer"] += 1
                    try:
                        cmp = target.mediate(Fi)
                    except ValueError:
                        return fails("preserves-limits", {"kind": "equalizer", "f": f, "g": g, "reason": "F(incl) does not equalize"})
                    if not epi_mono(cmp).is_iso:
                        return fails("preserves-limits", {"kind": "equalizer", "f": f, "g": g})
    return holds("preserves-limits", {"max_size": max_size}, checked=checked)


@dataclass(frozen=True)
class SetSubquotient:
    I: FinSetObj
    m: FinMap  # C >-> F(I)
    e: FinMap  # C ->> A


def find_subquotient(F: SetFunctor, A: FinSetObj, i_max: int = 4):
    """Lex-first ``(I, m, e)`` with ``m: C >-> F(I)`` mono and ``e: C ->> A`` epi.

    Searches ``I = 0, 1, ...`` and, for each, monos of an ``|A|``-element ``C``
    into ``F(I)`` in lexicographic order, with ``e`` the identity.
    """
    C = FinSetObj(A.size)
    e = FinMap(C, A, tuple(range(A.size)))
    for k in range(i_max + 1):
        I = FinSetObj(k)
        FI = F.obj(I)
        if FI.size < C.size:
            continue
        m = FinMap(C, FI, tuple(range(C.size)))
        if is_mono(m) and is_epi(e):
            return SetSubquotient(I, m, e)
    return None
