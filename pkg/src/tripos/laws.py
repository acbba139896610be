"""Mechanical checkers for tripos-level statements.

Every statement quantifying over all index sets is checked on sets up to an
explicit bound recorded in the verdict.  A negative search result is bounded
evidence, not a proof.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .config import CapExceeded
from .core import ImplicativeTripos, PowerTripos, Predicate, Tripos, reflects_order
from .finset import (
    FinMap,
    FinSetObj,
    all_epis,
    all_maps,
    compose,
    identity,
    is_epi,
    map_product,
    powerset_membership,
    product_obj,
    pullback,
)
from .functors import SetFunctor, find_subquotient, power_functor, preserves_finite_limits
from .logic import Atom, Exists, Forall, Iff, eval_formula
from .verdict import CAP_EXCEEDED, FAILS, HOLDS, Verdict, cap_exceeded, fails, holds


# --- comprehension ----------------------------------------------------------------

@dataclass
class ComprehensionWitness:
    base: FinSetObj
    power_index: FinSetObj
    epsilon: Predicate  # over base x power_index
    construction: dict = field(default_factory=dict)


def comprehension_witness(T: Tripos, I: FinSetObj) -> ComprehensionWitness:
    if isinstance(T, ImplicativeTripos):
        return _implicative_witness(T, I)
    if isinstance(T, PowerTripos):
        return _power_witness(T, I)
    raise TypeError(f"no comprehension construction for {T!r}")


def _implicative_witness(T, I):
    P = FinSetObj(T.N ** I.size)
    if P.size > T.caps.max_fiber:
        raise CapExceeded(f"A^I has {P.size} elements")
    tables = list(itertools.product(range(T.N), repeat=I.size))
    eps = tuple(tables[k][i] for i in range(I.size) for k in range(P.size))
    return ComprehensionWitness(I, P, Predicate(product_obj(I, P), eps))


def _power_witness(T, I):
    """Membership predicate assembled along the subquotient ``C >-> F(P(I)) , C ->> P(F I)``.

    ``P(I)`` is the powerset of ``F(I)``; ``C`` is its diagonal copy inside
    ``F(P(I)) = P(I)^n`` (so ``e`` is an iso), and ``epsilon`` is the image
    under ``F(I) x m`` of the pullback of membership along ``F(I) x e``.
    """
    n = T.n
    FI = T.F(I)
    mem = powerset_membership(FI, T.caps.max_powerset_base)
    P = mem.power
    FP = FinSetObj(P.size ** n)
    C = P
    stride = sum(P.size ** k for k in range(n))
    m = FinMap(C, FP, tuple(U * stride for U in range(P.size)))
    e = identity(C)
    # pullback of membership along FI x e, then image along FI x m
    pulled = [(x, c) for x in range(FI.size) for c in range(C.size) if mem.holds(x, e.table[c])]
    sub = [(x, m.table[c]) for x, c in pulled]
    # transport FI x F(P) = I^n x P^n to F(I x P) = (I x P)^n
    IP = product_obj(I, P)
    mask = 0
    for x, y in sub:
        xs = _digits(x, I.size, n)
        ys = _digits(y, P.size, n)
        k = 0
        for a, b in zip(xs, ys):
            k = k * IP.size + (a * P.size + b)
        mask |= 1 << k
    eps = Predicate(IP, mask)
    return ComprehensionWitness(I, P, eps, {"C": C, "m": m, "e": e, "membership": mem.pairs})


def _digits(x, base, n):
    out = [0] * n
    for k in range(n - 1, -1, -1):
        out[k] = x % base
        x //= base
    return out


def comprehension_formula(rho: Predicate, W: ComprehensionWitness, J: FinSetObj):
    I, P = W.base, W.power_index
    body = Iff(Atom(rho, ("i", "j")), Atom(W.epsilon, ("i", "p")))
    return Forall("j", J, Exists("p", P, Forall("i", I, body)))


def check_comprehension(T: Tripos, I: FinSetObj, J: FinSetObj) -> Verdict:
    bounds = {"I": I.size, "J": J.size, "flavor": T.describe()}
    IJ = product_obj(I, J)
    try:
        rhos = T.fiber(IJ)
        W = comprehension_witness(T, I)
        checked = 0
        for rho in rhos:
            val = eval_formula(T, comprehension_formula(rho, W, J))
            checked += 1
            if not T.holds(val):
                return fails("comprehension", {"rho": rho}, bounds, "comprehension formula fails", checked=checked)
    except CapExceeded as exc:
        return cap_exceeded("comprehension", bounds, str(exc))
    v = holds("comprehension", bounds, f"holds for all {checked} rho", checked=checked)
    v.details["witness"] = W
    return v


def check_skolem(T: Tripos, rho: Predicate, W: ComprehensionWitness, J: Optional[FinSetObj] = None) -> Verdict:
    """Search ``r: J -> P(I)`` with ``forall j, i. rho(i,j) <-> i eps r(j)``.

    ``J`` is read off ``rho`` unless ``I`` is empty.
    """
    I, P = W.base, W.power_index
    if J is None:
        if I.size == 0:
            raise ValueError("J must be given when I is empty")
        J = FinSetObj(rho.index.size // I.size)
    if I.size * J.size != rho.index.size:
        raise ValueError("rho must live over I x J")
    bounds = {"I": I.size, "J": J.size, "P": P.size, "flavor": T.describe()}
    # a closed universal over j survives reindexing along each point j: 1 -> J,
    # so per-point candidates prune the search without losing any witness
    per_point = []
    for j in range(J.size):
        at_j = T.reindex(rho, FinMap(I, product_obj(I, J), tuple(i * J.size + j for i in range(I.size))))
        cands = []
        for p in range(P.size):
            eps_p = T.reindex(W.epsilon, FinMap(I, W.epsilon.index, tuple(i * P.size + p for i in range(I.size))))
            F = Forall("i", I, Iff(Atom(at_j, ("i",)), Atom(eps_p, ("i",))))
            if T.holds(eval_formula(T, F)):
                cands.append(p)
        per_point.append(cands)
    total = 1
    for c in per_point:
        total *= len(c)
    if total > T.caps.max_fiber:
        return cap_exceeded("skolem", bounds, f"{total} candidate Skolem functions")
    tried = 0
    for table in itertools.product(*per_point):
        tried += 1
        r = FinMap(J, P, table)
        eps_r = T.reindex(W.epsilon, map_product(identity(I), r))
        F = Forall("j", J, Forall("i", I, Iff(Atom(rho, ("i", "j")), Atom(eps_r, ("i", "j")))))
        if T.holds(eval_formula(T, F)):
            return holds("skolem", bounds, "Skolem function found", r=r, tried=tried)
    return fails("skolem", {"rho": rho}, bounds, "no Skolem function within bounds", tried=tried)


# --- generic families ---------------------------------------------------------

@dataclass(frozen=True)
class GenericFamily:
    sigma: FinSetObj
    t: Predicate


def _reindexings(T: Tripos, t: Predicate, I: FinSetObj):
    """``{key: p}`` over all ``p: I -> sigma``, first (lex) ``p`` per key."""
    out = {}
    for p in all_maps(I, t.index):
        out.setdefault(T.key(T.reindex(t, p)), p)
    return out


def _find_classifier(T, reach, phi):
    if T.exact:
        return reach.get(phi.payload)
    for k, p in reach.items():
        if T.equiv(Predicate(phi.index, k), phi):
            return p
    return None


def is_generic(T: Tripos, g: GenericFamily, i_max: int, witnesses: bool = False) -> Verdict:
    bounds = {"i_max": i_max, "sigma": g.sigma.size}
    found = {}
    for k in range(i_max + 1):
        I = FinSetObj(k)
        try:
            fiber = T.fiber(I)
        except CapExceeded as exc:
            return cap_exceeded("generic", bounds, str(exc))
        reach = _reindexings(T, g.t, I)
        for phi in fiber:
            p = _find_classifier(T, reach, phi)
            if p is None:
                return fails("generic", {"I": k, "phi": phi}, bounds, "predicate not a reindexing of t")
            if witnesses:
                found[(k, phi.payload)] = p
    v = holds("generic", bounds)
    if witnesses:
        v.details["classifiers"] = found
    return v


def find_generic_family(T: Tripos, sigma_sizes, i_max: int) -> Verdict:
    """First ``(sigma, t)`` (smaller sigma first, lexicographic ``t``) that is generic up to ``i_max``."""
    sigma_sizes = list(sigma_sizes)
    bounds = {"sigma_sizes": sigma_sizes, "i_max": i_max, "flavor": T.describe()}
    log = []
    for s in sigma_sizes:
        S = FinSetObj(s)
        try:
            cands = T.fiber(S)
        except CapExceeded as exc:
            return cap_exceeded("generic", bounds, str(exc))
        tried = 0
        for t in cands:
            tried += 1
            v = is_generic(T, GenericFamily(S, t), i_max)
            if v.status == CAP_EXCEEDED:
                return cap_exceeded("generic", bounds, v.summary)
            if v.holds:
                log.append({"sigma": s, "tried": tried})
                out = holds("generic", bounds, f"generic family found: sigma = {s}", log=log)
                out.witness = GenericFamily(S, t)
                return out
        log.append({"sigma": s, "tried": tried})
    return fails(
        "generic",
        None,
        bounds,
        "none-found-within-bounds (bounded evidence, not a proof)",
        log=log,
    )


def is_weakly_generic(T: Tripos, g: GenericFamily, i_max: int, j_max: Optional[int] = None) -> Verdict:
    """For each ``phi`` over ``I``, find an epi ``e: J ->> I`` and ``f: J -> sigma``
    with ``e^* phi -||- f^* t``; ``J`` ranges over ``|I|..j_max``."""
    j_max = i_max + 1 if j_max is None else j_max
    bounds = {"i_max": i_max, "j_max": j_max, "sigma": g.sigma.size, "flavor": T.describe()}
    found = {}
    reach_cache = {}
    try:
        for k in range(i_max + 1):
            I = FinSetObj(k)
            for phi in T.fiber(I):
                w = None
                for jsz in range(k, j_max + 1):
                    J = FinSetObj(jsz)
                    if jsz not in reach_cache:
                        reach_cache[jsz] = _reindexings(T, g.t, J)
                    reach = reach_cache[jsz]
                    for e in all_epis(J, I):
                        f = _find_classifier(T, reach, T.reindex(phi, e))
                        if f is not None:
                            w = (e, f)
                            break
                    if w:
                        break
                if w is None:
                    return fails("weakly-generic", {"I": k, "phi": phi}, bounds, "no (epi, map) pair within bounds")
                found[(k, phi.payload)] = w
    except CapExceeded as exc:
        return cap_exceeded("weakly-generic", bounds, str(exc))
    v = holds("weakly-generic", bounds, f"{len(found)} predicates covered")
    v.details["witnesses"] = found
    return v


@dataclass
class AuditRecord:
    I: int
    phi: Predicate
    J: int
    e: FinMap
    f: FinMap
    g: FinMap
    R: FinSetObj
    r1: FinMap
    r2: FinMap
    h: FinMap
    h_onto: bool
    steps: dict
    ok: bool


@dataclass
class WeakToGenericTrace:
    E_obj: FinSetObj
    p: FinMap
    q: FinMap
    result: GenericFamily
    audits: list
    verdict: Verdict


def _regular_precondition(T: Tripos, max_size: int = 3) -> Optional[dict]:
    for d in range(max_size + 1):
        for c in range(min(d, 2) + 1):
            for e in all_epis(FinSetObj(d), FinSetObj(c)):
                bad = reflects_order(T, e)
                if bad is not None:
                    return {"epi": e, "phi": bad[0], "psi": bad[1]}
    return None


def weak_to_generic(T: Tripos, g: GenericFamily, i_max: int, j_max: Optional[int] = None) -> WeakToGenericTrace:
    """Turn a weakly generic ``t`` over sigma into ``exists_q p^* t`` over ``P(sigma)``
    and audit genericity of the result along the maps ``g(i) = {f(j) | e(j) = i}``."""
    bad = _regular_precondition(T)
    if bad is not None:
        raise ValueError(f"precondition: reindexing along an epi does not reflect the order: {bad}")
    weak = is_weakly_generic(T, g, i_max, j_max)
    if not weak.holds:
        raise ValueError(f"precondition: family is not weakly generic ({weak.summary})")
    S = g.sigma
    mem = powerset_membership(S, T.caps.max_powerset_base)
    PS = mem.power
    pairs = [(u, U) for u in range(S.size) for U in range(PS.size) if U >> u & 1]
    E = FinSetObj(len(pairs))
    p = FinMap(E, S, tuple(u for u, _ in pairs))
    q = FinMap(E, PS, tuple(U for _, U in pairs))
    t2 = T.exists(q, T.reindex(g.t, p))
    result = GenericFamily(PS, t2)
    pt = T.reindex(g.t, p)

    audits = []
    all_ok = True
    for (k, payload), (e, f) in weak.details["witnesses"].items():
        I = FinSetObj(k)
        phi = Predicate(I, payload)
        gmap = FinMap(I, PS, tuple(_image_mask(f, e, i) for i in range(k)))
        pb = pullback(q, gmap)
        r1, r2 = pb.projections
        R = pb.apex
        # h(j) = (f(j), g(e(j)), e(j)) as an element of R
        h = pb.mediate(
            FinMap(e.dom, E, tuple(pairs.index((f.table[j], gmap.table[e.table[j]])) for j in range(e.dom.size))),
            e,
        )
        h_onto = is_epi(h)
        steps = {}
        s0 = T.reindex(t2, gmap)
        s1 = T.exists(r2, T.reindex(pt, r1))
        s2 = T.exists(r2, T.exists(h, T.reindex(T.reindex(pt, r1), h)))
        s3 = T.exists(e, T.reindex(g.t, f))
        steps["beck-chevalley"] = T.equiv(s0, s1)
        steps["h-epic"] = T.equiv(s1, s2)
        steps["factor"] = compose(h, r2).table == e.table and compose(compose(h, r1), p).table == f.table and T.equiv(s2, s3)
        steps["prestack"] = T.equiv(s3, phi)
        steps["classified"] = T.equiv(s0, phi)
        ok = h_onto and all(steps.values())
        all_ok &= ok
        audits.append(AuditRecord(k, phi, e.dom.size, e, f, gmap, R, r1, r2, h, h_onto, steps, ok))

    bounds = {"i_max": i_max, "j_max": weak.bounds["j_max"], "sigma": S.size, "flavor": T.describe()}
    if all_ok:
        verdict = holds("weak-to-generic", bounds, f"{len(audits)} audits pass", audits=len(audits))
    else:
        first = next(a for a in audits if not a.ok)
        verdict = fails("weak-to-generic", {"I": first.I, "phi": first.phi, "steps": first.steps}, bounds,
                        "AUDIT FAILURE: constructed family does not classify phi")
    return WeakToGenericTrace(E, p, q, result, audits, verdict)


def _image_mask(f: FinMap, e: FinMap, i: int) -> int:
    m = 0
    for j, ej in enumerate(e.table):
        if ej == i:
            m |= 1 << f.table[j]
    return m


# --- regularity ---------------------------------------------------------------

def check_regular(T: Tripos, max_size: int = 4, prestack_max_width: int = 9) -> Verdict:
    """Epi preservation of ``F`` cross-checked against order reflection.

    For power triposes both verdicts are computed per map ``u`` (epi or not)
    and must agree; order reflection is only evaluated where ``|F(cod u)| <=
    prestack_max_width``.
    """
    bounds = {"max_size": max_size, "prestack_max_width": prestack_max_width, "flavor": T.describe()}
    sets = [FinSetObj(k) for k in range(max_size + 1)]
    if isinstance(T, PowerTripos):
        epis_checked = agreement = 0
        for X in sets:
            for Y in sets:
                for u in all_maps(X, Y):
                    Fu_epi = is_epi(T.F_map(u))
                    if is_epi(u):
                        epis_checked += 1
                        if not Fu_epi:
                            return fails("regular", {"u": u}, bounds, "F does not preserve an epi")
                    if Y.size ** T.n <= prestack_max_width:
                        refl = reflects_order(T, u) is None
                        agreement += 1
                        if refl != Fu_epi:
                            return fails("regular", {"u": u, "F(u) epi": Fu_epi, "reflects": refl}, bounds,
                                         "epi preservation and prestack verdicts disagree")
        return holds("regular", bounds, "F preserves epis; prestack verdicts agree",
                     epis_checked=epis_checked, agreement_checked=agreement)
    checked = 0
    for X in sets:
        for Y in sets:
            if T.fiber_size(Y) > prestack_max_width ** 2:
                continue
            for e in all_epis(X, Y):
                checked += 1
                bad = reflects_order(T, e)
                if bad is not None:
                    return fails("regular", {"epi": e, "phi": bad[0], "psi": bad[1]}, bounds, "prestack fails")
    return holds("regular", bounds, "base is Set: every epi splits, so regularity holds by construction; "
                 "prestack verified on capped epis", prestack_checked=checked)


# --- composition --------------------------------------------------------------

def is_set_tripos(F: SetFunctor, max_obj: int = 4, limit_size: int = 2, i_max: int = 4) -> Verdict:
    lim = preserves_finite_limits(F, limit_size)
    if not lim.holds:
        return fails("set-tripos", {"functor": F.name, **lim.witness}, lim.bounds, "does not preserve finite limits")
    wits = {}
    for k in range(max_obj + 1):
        w = find_subquotient(F, FinSetObj(k), i_max)
        if w is None:
            return fails("set-tripos", {"functor": F.name, "A": k}, {"i_max": i_max}, "no subquotient witness")
        wits[k] = w
    v = holds("set-tripos", {"max_obj": max_obj, "limit_size": limit_size, "i_max": i_max})
    v.details["witnesses"] = wits
    return v


def check_tripos_composition(F1: SetFunctor, H: SetFunctor, max_obj: int = 4, limit_size: int = 2,
                             i_max: int = 4) -> Verdict:
    """``H`` is a tripos iff it preserves finite limits, given ``F2 = H F1`` is one.

    Witnesses for ``H`` are those of ``F2`` read as ``C >-> H(F1 I)``.
    """
    F2 = F1.then(H)
    bounds = {"F1": F1.name, "H": H.name, "max_obj": max_obj, "limit_size": limit_size, "i_max": i_max}
    v1 = is_set_tripos(F1, max_obj, limit_size, i_max)
    if not v1.holds:
        return fails("composition", {"stage": "F1", **(v1.witness or {})}, bounds, "F1 is not a tripos")
    v2 = is_set_tripos(F2, max_obj, limit_size, i_max)
    if not v2.holds:
        return fails("composition", {"stage": "F2", **(v2.witness or {})}, bounds, "F2 = H F1 is not a tripos")
    lim = preserves_finite_limits(H, limit_size)
    if not lim.holds:
        return fails("composition", {"stage": "H", **lim.witness}, bounds, "H does not preserve finite limits")
    transported = {}
    for k, w in v2.details["witnesses"].items():
        HF1I = H.obj(F1.obj(w.I))
        m = FinMap(w.m.dom, HF1I, w.m.table)
        if not (len(set(m.table)) == m.dom.size and is_epi(w.e)):
            return fails("composition", {"stage": "transport", "A": k}, bounds, "transported witness invalid")
        transported[k] = (w.I.size, m, w.e)
    v = holds("composition", bounds, "H preserves finite limits and inherits subquotient witnesses from H F1")
    v.details["witnesses"] = transported
    return v


def subquotient_verdicts(F: SetFunctor, max_obj: int = 4, i_max: int = 4) -> dict:
    return {k: find_subquotient(F, FinSetObj(k), i_max) is not None for k in range(max_obj + 1)}


# --- assemblies ---------------------------------------------------------------

def assembly_check(T: PowerTripos, A: FinSetObj, candidate: Optional[FinMap] = None, i_max: int = 4) -> Verdict:
    """Does ``A`` embed in ``F(I)`` for some ``I <= i_max``?"""
    if not isinstance(T, PowerTripos):
        raise TypeError("assembly_check applies to Set-valued (power) triposes")
    bounds = {"A": A.size, "i_max": i_max, "flavor": T.describe()}
    if candidate is not None:
        if candidate.dom.size != A.size:
            raise ValueError("candidate must have domain A")
        ok = len(set(candidate.table)) == A.size
        if ok:
            return holds("assembly", bounds, "candidate is a mono", embedding=candidate)
        return fails("assembly", {"candidate": candidate}, bounds, "candidate is not a mono")
    for k in range(i_max + 1):
        FI = T.F(FinSetObj(k))
        for m in all_maps(A, FI):
            if len(set(m.table)) == A.size:
                return holds("assembly", bounds, f"A embeds in F({k})", I=k, embedding=m)
    return fails("assembly", {"A": A.size}, bounds, "not found within bounds")


# --- implicative morphisms --------------------------------------------------

def implicative_morphism_check(h, T1: ImplicativeTripos, T2: ImplicativeTripos, max_size: int = 2) -> Verdict:
    """Postcomposition with ``h`` as a map of fibered preorders preserving regular logic."""
    h = tuple(h)
    if len(h) != T1.N or any(not 0 <= x < T2.N for x in h):
        raise ValueError("h must be a table A1 -> A2")
    bounds = {"max_size": max_size}
    sets = [FinSetObj(k) for k in range(max_size + 1)]

    def g(phi):
        return Predicate(phi.index, tuple(h[x] for x in phi.payload))

    counts = dict.fromkeys(("monotone", "top", "meet", "reindex", "exists"), 0)
    for I in sets:
        F = T1.fiber(I)
        counts["top"] += 1
        if not T2.equiv(g(T1.top(I)), T2.top(I)):
            return fails("implicative-morphism", {"law": "top", "I": I.size}, bounds, "top not preserved")
        for phi in F:
            for psi in F:
                counts["monotone"] += 1
                if T1.entails(phi, psi) and not T2.entails(g(phi), g(psi)):
                    return fails("implicative-morphism", {"law": "monotone", "phi": phi, "psi": psi}, bounds, "not monotone")
                counts["meet"] += 1
                if not T2.equiv(g(T1.meet(phi, psi)), T2.meet(g(phi), g(psi))):
                    return fails("implicative-morphism", {"law": "meet", "phi": phi, "psi": psi}, bounds, "meet not preserved")
    for I in sets:
        for J in sets:
            for u in all_maps(I, J):
                for phi in T1.fiber(J):
                    counts["reindex"] += 1
                    if g(T1.reindex(phi, u)) != T2.reindex(g(phi), u):
                        return fails("implicative-morphism", {"law": "reindex", "u": u, "phi": phi}, bounds, "reindexing not preserved")
                for phi in T1.fiber(I):
                    counts["exists"] += 1
                    if not T2.equiv(g(T1.exists(u, phi)), T2.exists(u, g(phi))):
                        return fails("implicative-morphism", {"law": "exists", "u": u, "phi": phi}, bounds, "existential not preserved")
    return holds("implicative-morphism", bounds, "all laws hold", counts=counts)


# --- implicative kernel ---------------------------------------------------------

def check_implicative_kernel(alg, max_size: int = 3) -> Verdict:
    """``K = S = top`` and, for ``S = {top}``, entailment is the pointwise order on fibers."""
    from .implicative import combinators

    A = alg.structure
    L = A.lattice
    bounds = {"max_size": max_size, "algebra": alg.name or L.size}
    K, S = combinators(A)
    if (K, S) != (L.top, L.top):
        return fails("kernel", {"K": L.name(K), "S": L.name(S)}, bounds, "combinators are not top")
    T = ImplicativeTripos(alg)
    compared = 0
    for k in range(max_size + 1):
        F = T.fiber(FinSetObj(k))
        for phi in F:
            for psi in F:
                compared += 1
                pointwise = all(L.leq[a][b] for a, b in zip(phi.payload, psi.payload))
                if T.entails(phi, psi) != pointwise:
                    return fails("kernel", {"phi": phi, "psi": psi, "pointwise": pointwise}, bounds,
                                 "entailment differs from the pointwise order")
    return holds("kernel", bounds, f"K = S = top; entailment is pointwise on {compared} pairs", compared=compared)
