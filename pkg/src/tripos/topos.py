"""The topos of partial equivalence relations over a tripos.

Objects are PERs ``(I, E)`` with ``E`` a predicate over ``I x I``; morphisms
are functional relations, compared up to ``-||-``.  Every condition is a
closed formula of the internal logic, evaluated with ``logic.eval_formula``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import CapExceeded
from .core import Predicate, Tripos
from .finset import FinMap, FinSetObj, all_maps, encode, product_elements, product_obj
from .logic import And, Atom, Eq, Exists, Forall, Imp, eval_formula, exists, forall
from .verdict import fails, holds, cap_exceeded


@dataclass(frozen=True)
class PerObject:
    index: FinSetObj
    eq: Predicate

    def __post_init__(self):
        if self.eq.index.size != self.index.size ** 2:
            raise ValueError("PER equality must live over index x index")


@dataclass(frozen=True)
class FunRel:
    src: PerObject
    tgt: PerObject
    rel: Predicate

    def __post_init__(self):
        if self.rel.index.size != self.src.index.size * self.tgt.index.size:
            raise ValueError("relation must live over src.index x tgt.index")


class ToposMorphism:
    """A functional relation read up to provable equivalence in ``T``."""

    def __init__(self, T: Tripos, rep: FunRel):
        self.T, self.rep = T, rep

    def __eq__(self, other):
        return (
            isinstance(other, ToposMorphism)
            and self.rep.src == other.rep.src
            and self.rep.tgt == other.rep.tgt
            and self.T.equiv(self.rep.rel, other.rep.rel)
        )

    def __hash__(self):
        return hash((self.rep.src, self.rep.tgt, self.T.key(self.rep.rel)))


def _holds(T, F):
    return T.holds(eval_formula(T, F))


def per_conditions(X: PerObject) -> dict:
    E, I = X.eq, X.index
    return {
        "symmetric": forall([("x", I), ("y", I)], Imp(Atom(E, ("x", "y")), Atom(E, ("y", "x")))),
        "transitive": forall(
            [("x", I), ("y", I), ("z", I)],
            Imp(And((Atom(E, ("x", "y")), Atom(E, ("y", "z")))), Atom(E, ("x", "z"))),
        ),
    }


def funrel_conditions(F: FunRel) -> dict:
    X, Y = F.src.index, F.tgt.index
    EX, EY, R = F.src.eq, F.tgt.eq, F.rel
    return {
        "strict": forall(
            [("x", X), ("y", Y)],
            Imp(Atom(R, ("x", "y")), And((Atom(EX, ("x", "x")), Atom(EY, ("y", "y"))))),
        ),
        "relational": forall(
            [("x", X), ("x2", X), ("y", Y), ("y2", Y)],
            Imp(
                And((Atom(EX, ("x2", "x")), Atom(R, ("x", "y")), Atom(EY, ("y", "y2")))),
                Atom(R, ("x2", "y2")),
            ),
        ),
        "single-valued": forall(
            [("x", X), ("y", Y), ("y2", Y)],
            Imp(And((Atom(R, ("x", "y")), Atom(R, ("x", "y2")))), Atom(EY, ("y", "y2"))),
        ),
        "total": Forall("x", X, Imp(Atom(EX, ("x", "x")), Exists("y", Y, Atom(R, ("x", "y"))))),
    }


def _validate(T, check, conds, bounds):
    failed = [name for name, F in conds.items() if not _holds(T, F)]
    if failed:
        return fails(check, {"failed": failed}, bounds, "fails: " + ", ".join(failed))
    return holds(check, bounds, "all conditions hold", conditions=list(conds))


def validate_per(T: Tripos, X: PerObject):
    try:
        return _validate(T, "per", per_conditions(X), {"index": X.index.size})
    except CapExceeded as exc:
        return cap_exceeded("per", {"index": X.index.size}, str(exc))


def validate_funrel(T: Tripos, F: FunRel, check_ends: bool = True):
    bounds = {"src": F.src.index.size, "tgt": F.tgt.index.size}
    try:
        if check_ends:
            for end, X in (("src", F.src), ("tgt", F.tgt)):
                v = validate_per(T, X)
                if not v.holds:
                    return fails("funrel", {"end": end, **(v.witness or {})}, bounds, f"{end} is not a PER")
        return _validate(T, "funrel", funrel_conditions(F), bounds)
    except CapExceeded as exc:
        return cap_exceeded("funrel", bounds, str(exc))


def is_per(T, X) -> bool:
    return all(_holds(T, F) for F in per_conditions(X).values())


def is_funrel(T, F) -> bool:
    return all(_holds(T, C) for C in funrel_conditions(F).values())


# --- category structure -------------------------------------------------------

def compose_funrel(T: Tripos, F: FunRel, G: FunRel) -> FunRel:
    """``G . F``: ``rel(x, z) = exists y. F(x, y) /\\ G(y, z)``."""
    if F.tgt != G.src:
        raise ValueError("boundary mismatch: F.tgt != G.src")
    X, Y, Z = F.src.index, F.tgt.index, G.tgt.index
    body = Exists("y", Y, And((Atom(F.rel, ("x", "y")), Atom(G.rel, ("y", "z")))))
    rel = eval_formula(T, body, (("x", X), ("z", Z)))
    return FunRel(F.src, G.tgt, rel)


def identity_funrel(X: PerObject) -> FunRel:
    return FunRel(X, X, X.eq)


def same_morphism(T: Tripos, F: FunRel, G: FunRel) -> bool:
    return F.src == G.src and F.tgt == G.tgt and T.equiv(F.rel, G.rel)


def delta_obj(T: Tripos, I: FinSetObj) -> PerObject:
    return PerObject(I, T.equality(I))


def delta_map(T: Tripos, u: FinMap) -> FunRel:
    """``rel(i, j) = eq_J(u i, j)``, i.e. the equality of ``J`` reindexed along ``u x id``."""
    I, J = u.dom, u.cod
    eqJ = T.equality(J)
    table = tuple(encode((J.size, J.size), (u.table[i], j)) for i, j in product_elements((I.size, J.size)))
    rel = T.reindex(eqJ, FinMap(product_obj(I, J), eqJ.index, table))
    return FunRel(delta_obj(T, I), delta_obj(T, J), rel)


def all_pers(T: Tripos, I: FinSetObj) -> list:
    out, seen = [], set()
    for E in T.fiber(product_obj(I, I)):
        k = T.key(E)
        if k in seen:
            continue
        X = PerObject(I, E)
        if is_per(T, X):
            seen.add(k)
            out.append(X)
    return out


def all_funrels(T: Tripos, X: PerObject, Y: PerObject) -> list:
    """Functional relations ``X -> Y``, one representative per ``-||-`` class."""
    out, seen = [], set()
    for R in T.fiber(product_obj(X.index, Y.index)):
        k = T.key(R)
        if k in seen:
            continue
        F = FunRel(X, Y, R)
        if is_funrel(T, F):
            seen.add(k)
            out.append(F)
    return out


def pers_up_to(T: Tripos, max_index: int) -> list:
    return [X for k in range(max_index + 1) for X in all_pers(T, FinSetObj(k))]


def check_category_laws(T: Tripos, max_index: int = 2):
    """Unit laws and associativity on every enumerated morphism."""
    bounds = {"max_index": max_index, "flavor": T.describe()}
    try:
        objs = pers_up_to(T, max_index)
        hom = {(a, b): all_funrels(T, X, Y) for a, X in enumerate(objs) for b, Y in enumerate(objs)}
    except CapExceeded as exc:
        return cap_exceeded("category-laws", bounds, str(exc))
    counts = {"objects": len(objs), "morphisms": sum(map(len, hom.values())), "unit": 0, "assoc": 0, "closed": 0}
    for a, X in enumerate(objs):
        if not is_funrel(T, identity_funrel(X)):
            return fails("category-laws", {"law": "identity-valid", "X": X}, bounds, "identity is not functional")
    comp = {}
    for (a, b), fs_ in hom.items():
        idA, idB = identity_funrel(objs[a]), identity_funrel(objs[b])
        for p, F in enumerate(fs_):
            counts["unit"] += 1
            if not (same_morphism(T, compose_funrel(T, idA, F), F) and same_morphism(T, compose_funrel(T, F, idB), F)):
                return fails("category-laws", {"law": "unit", "F": F}, bounds, "unit law fails")
    n = len(objs)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for p, F in enumerate(hom[a, b]):
                    for q, G in enumerate(hom[b, c]):
                        GF = compose_funrel(T, F, G)
                        counts["closed"] += 1
                        if not is_funrel(T, GF):
                            return fails("category-laws", {"law": "composite-valid", "F": F, "G": G}, bounds,
                                         "composite is not functional")
                        comp[a, b, c, p, q] = GF
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    for p, F in enumerate(hom[a, b]):
                        for q, G in enumerate(hom[b, c]):
                            GF = comp[a, b, c, p, q]
                            for r, H in enumerate(hom[c, d]):
                                counts["assoc"] += 1
                                lhs = compose_funrel(T, GF, H)
                                rhs = compose_funrel(T, F, comp[b, c, d, q, r])
                                if not same_morphism(T, lhs, rhs):
                                    return fails("category-laws", {"law": "assoc", "F": F, "G": G, "H": H}, bounds,
                                                 "associativity fails")
    return holds("category-laws", bounds, f"{counts['objects']} objects, {counts['morphisms']} morphisms", counts=counts)


def check_delta_functor(T: Tripos, max_size: int = 3):
    bounds = {"max_size": max_size, "flavor": T.describe()}
    sets = [FinSetObj(k) for k in range(max_size + 1)]
    checked = 0
    for I in sets:
        idI = FinMap(I, I, tuple(range(I.size)))
        if not same_morphism(T, delta_map(T, idI), identity_funrel(delta_obj(T, I))):
            return fails("delta-functor", {"law": "identity", "I": I.size}, bounds, "identity not preserved")
    for I in sets:
        for J in sets:
            for f in all_maps(I, J):
                df = delta_map(T, f)
                for K in sets:
                    for g in all_maps(J, K):
                        checked += 1
                        gf = FinMap(I, K, tuple(g.table[x] for x in f.table))
                        if not same_morphism(T, delta_map(T, gf), compose_funrel(T, df, delta_map(T, g))):
                            return fails("delta-functor", {"law": "composition", "f": f, "g": g}, bounds,
                                         "composition not preserved")
    return holds("delta-functor", bounds, f"{checked} composable pairs", checked=checked)


# --- limits -------------------------------------------------------------------

def per_product(T: Tripos, X: PerObject, Y: PerObject):
    """``X x Y`` with its two projections."""
    I, J = X.index, Y.index
    P = product_obj(I, J)
    ex, ey = X.eq, Y.eq
    # context (x, y, x2, y2) packs as ((x, y), (x2, y2)) lexicographically
    body = And((Atom(ex, ("x", "x2")), Atom(ey, ("y", "y2"))))
    eq = eval_formula(T, body, (("x", I), ("y", J), ("x2", I), ("y2", J)))
    XY = PerObject(P, Predicate(product_obj(P, P), eq.payload))
    r1 = eval_formula(T, And((Atom(ex, ("x", "x2")), Atom(ey, ("y", "y")))), (("x", I), ("y", J), ("x2", I)))
    r2 = eval_formula(T, And((Atom(ex, ("x", "x")), Atom(ey, ("y", "y2")))), (("x", I), ("y", J), ("y2", J)))
    p1 = FunRel(XY, X, Predicate(product_obj(P, I), r1.payload))
    p2 = FunRel(XY, Y, Predicate(product_obj(P, J), r2.payload))
    return XY, p1, p2


def pair_funrel(T: Tripos, XY: PerObject, F: FunRel, G: FunRel) -> FunRel:
    """``<F, G>: Z -> X x Y`` with ``rel(z, (x, y)) = F(z, x) /\\ G(z, y)``."""
    Z, X, Y = F.src.index, F.tgt.index, G.tgt.index
    body = And((Atom(F.rel, ("z", "x")), Atom(G.rel, ("z", "y"))))
    rel = eval_formula(T, body, (("z", Z), ("x", X), ("y", Y)))
    return FunRel(F.src, XY, Predicate(product_obj(Z, XY.index), rel.payload))


def transpose(T: Tripos, F: FunRel) -> FunRel:
    rel = eval_formula(T, Atom(F.rel, ("x", "y")), (("y", F.tgt.index), ("x", F.src.index)))
    return FunRel(F.tgt, F.src, rel)


def check_delta_limits(T: Tripos, max_index: int = 2, product_sizes=((1, 1), (2, 2))):
    """``Delta(1)`` is terminal and ``Delta(I x J)`` is a product, among PERs with index ``<= max_index``."""
    bounds = {"max_index": max_index, "product_sizes": [list(p) for p in product_sizes], "flavor": T.describe()}
    report = {}
    try:
        objs = pers_up_to(T, max_index)
        one = delta_obj(T, FinSetObj(1))
        for X in objs:
            n = len(all_funrels(T, X, one))
            if n != 1:
                return fails("delta-limits", {"law": "terminal", "X": X, "morphisms": n}, bounds, "Delta(1) is not terminal")
        report["terminal_tested"] = len(objs)

        for a, b in product_sizes:
            I, J = FinSetObj(a), FinSetObj(b)
            IJ = product_obj(I, J)
            D = delta_obj(T, IJ)
            DI, DJ = delta_obj(T, I), delta_obj(T, J)
            pi1 = delta_map(T, FinMap(IJ, I, tuple(k // b for k in range(a * b))))
            pi2 = delta_map(T, FinMap(IJ, J, tuple(k % b for k in range(a * b))))
            # universal property against every test object
            mediations = 0
            for Z in objs:
                cands = all_funrels(T, Z, D)
                for F in all_funrels(T, Z, DI):
                    for G in all_funrels(T, Z, DJ):
                        hits = [H for H in cands
                                if same_morphism(T, compose_funrel(T, H, pi1), F)
                                and same_morphism(T, compose_funrel(T, H, pi2), G)]
                        mediations += 1
                        if len(hits) != 1:
                            return fails("delta-limits", {"law": "product", "sizes": [a, b], "Z": Z, "F": F, "G": G,
                                                          "mediators": len(hits)}, bounds, "no unique mediating morphism")
            # explicit two-sided iso with the PER product
            XY, p1, p2 = per_product(T, DI, DJ)
            phi = pair_funrel(T, XY, pi1, pi2)
            psi = transpose(T, phi)
            ok = (is_funrel(T, phi) and is_funrel(T, psi)
                  and same_morphism(T, compose_funrel(T, phi, psi), identity_funrel(D))
                  and same_morphism(T, compose_funrel(T, psi, phi), identity_funrel(XY))
                  and same_morphism(T, compose_funrel(T, phi, p1), pi1)
                  and same_morphism(T, compose_funrel(T, phi, p2), pi2))
            if not ok:
                return fails("delta-limits", {"law": "iso", "sizes": [a, b]}, bounds, "no two-sided iso with the PER product")
            report[f"product_{a}x{b}"] = {"mediations": mediations, "iso": True}
    except CapExceeded as exc:
        return cap_exceeded("delta-limits", bounds, str(exc))
    return holds("delta-limits", bounds, "Delta preserves the terminal object and binary products", **report)


# --- monos, epis and subquotients -------------------------------------------

def internal_mono(T: Tripos, F: FunRel) -> bool:
    X, Y = F.src.index, F.tgt.index
    body = Imp(And((Atom(F.rel, ("x", "y")), Atom(F.rel, ("x2", "y")))), Atom(F.src.eq, ("x", "x2")))
    return _holds(T, forall([("x", X), ("x2", X), ("y", Y)], body))


def internal_epi(T: Tripos, F: FunRel) -> bool:
    X, Y = F.src.index, F.tgt.index
    body = Imp(Atom(F.tgt.eq, ("y", "y")), Exists("x", X, Atom(F.rel, ("x", "y"))))
    return _holds(T, Forall("y", Y, body))


def cancel_mono(T: Tripos, F: FunRel, tests) -> bool:
    """Left cancellation against every morphism from each test object."""
    for Z in tests:
        hs = all_funrels(T, Z, F.src)
        img = [compose_funrel(T, h, F) for h in hs]
        for a in range(len(hs)):
            for b in range(a + 1, len(hs)):
                if same_morphism(T, img[a], img[b]) and not same_morphism(T, hs[a], hs[b]):
                    return False
    return True


def cancel_epi(T: Tripos, F: FunRel, tests) -> bool:
    for Z in tests:
        hs = all_funrels(T, F.tgt, Z)
        img = [compose_funrel(T, F, h) for h in hs]
        for a in range(len(hs)):
            for b in range(a + 1, len(hs)):
                if same_morphism(T, img[a], img[b]) and not same_morphism(T, hs[a], hs[b]):
                    return False
    return True


def check_mono_epi_agreement(T: Tripos, max_index: int = 2):
    """Internal mono/epi formulas agree with cancellation on all enumerated morphisms."""
    bounds = {"max_index": max_index, "flavor": T.describe()}
    objs = pers_up_to(T, max_index)
    checked = 0
    for X in objs:
        for Y in objs:
            for F in all_funrels(T, X, Y):
                checked += 1
                for kind, a, b in (("mono", internal_mono(T, F), cancel_mono(T, F, objs)),
                                   ("epi", internal_epi(T, F), cancel_epi(T, F, objs))):
                    if a != b:
                        return fails("mono-epi", {"kind": kind, "F": F, "internal": a, "cancellation": b}, bounds,
                                     "internal and cancellation verdicts disagree")
    return holds("mono-epi", bounds, f"agreement on {checked} morphisms", checked=checked)


@dataclass(frozen=True)
class SubquotientWitness:
    I: FinSetObj
    C: PerObject
    e: FunRel  # C ->> A
    m: FunRel  # C >-> Delta(I)


def subquotient_witness(T: Tripos, A: PerObject):
    """``A`` as a quotient of ``C`` inside ``Delta(A.index)``.

    ``C`` has equality ``A.eq(x, x) /\\ x = x2``; ``e`` is ``A.eq`` read as a
    relation ``C -> A`` and ``m`` is ``C``'s own equality into ``Delta(I)``.
    """
    I = A.index
    eqC = eval_formula(T, And((Atom(A.eq, ("x", "x")), Eq("x", "x2"))), (("x", I), ("x2", I)))
    C = PerObject(I, eqC)
    e = FunRel(C, A, A.eq)
    m = FunRel(C, delta_obj(T, I), eqC)
    W = SubquotientWitness(I, C, e, m)
    bounds = {"index": I.size, "flavor": T.describe()}
    checks = {
        "C-per": is_per(T, C),
        "e-funrel": is_funrel(T, e),
        "m-funrel": is_funrel(T, m),
        "e-epi": internal_epi(T, e),
        "m-mono": internal_mono(T, m),
    }
    if all(checks.values()):
        v = holds("subquotient", bounds, "witness validated", checks=checks)
    else:
        v = fails("subquotient", {"checks": checks}, bounds, "witness invalid")
    v.details["witness"] = W
    return v
