"""Exhaustive law sweeps for a tripos on all index sets up to a size bound."""

from __future__ import annotations

from .core import Tripos
from .finset import FinMap, FinSetObj, all_maps, compose, identity, pullback
from .verdict import FAILS, HOLDS, Verdict

LAWS = (
    "preorder",
    "reindex-functorial",
    "reindex-monotone",
    "reindex-preserves-ops",
    "heyting",
    "exists-adjoint",
    "forall-adjoint",
    "frobenius",
    "beck-chevalley",
)


class _Tally:
    def __init__(self):
        self.counts = {law: 0 for law in LAWS}
        self.failure = None

    def ok(self, law, cond, witness):
        self.counts[law] += 1
        if not cond and self.failure is None:
            self.failure = {"law": law, **witness}
        return cond


def check_laws(T: Tripos, max_size: int, laws=LAWS) -> Verdict:
    """Run every law in ``laws`` on all sets of size ``0..max_size``.

    Stops at the first failing law instance and reports it.
    """
    tally = _Tally()
    sets = [FinSetObj(k) for k in range(max_size + 1)]
    fibers = {I.size: T.fiber(I) for I in sets}
    maps = {(I.size, J.size): list(all_maps(I, J)) for I in sets for J in sets}
    ent, eq = T.entails, T.equiv

    def run():
        if "preorder" in laws:
            for I in sets:
                F = fibers[I.size]
                for a in F:
                    if not tally.ok("preorder", ent(a, a), {"phi": a}):
                        return
                rel = [[ent(a, b) for b in F] for a in F]
                n = len(F)
                for x in range(n):
                    for y in range(n):
                        if rel[x][y]:
                            for z in range(n):
                                if rel[y][z] and not tally.ok("preorder", rel[x][z], {"phi": F[x], "psi": F[y], "chi": F[z]}):
                                    return

        if "reindex-functorial" in laws:
            for I in sets:
                for phi in fibers[I.size]:
                    if not tally.ok("reindex-functorial", eq(T.reindex(phi, identity(I)), phi), {"phi": phi, "map": "id"}):
                        return
            for (i, j), us in maps.items():
                for (j2, k), vs in maps.items():
                    if j2 != j:
                        continue
                    for u in us:
                        for v in vs:
                            vu = compose(u, v)
                            for phi in fibers[k]:
                                lhs = T.reindex(phi, vu)
                                rhs = T.reindex(T.reindex(phi, v), u)
                                if not tally.ok("reindex-functorial", eq(lhs, rhs), {"phi": phi, "u": u, "v": v}):
                                    return

        if "reindex-monotone" in laws or "reindex-preserves-ops" in laws:
            for (i, j), us in maps.items():
                FJ = fibers[j]
                I = sets[i]
                for u in us:
                    pulled = [T.reindex(p, u) for p in FJ]
                    for a, phi in enumerate(FJ):
                        for b, psi in enumerate(FJ):
                            if "reindex-monotone" in laws and ent(phi, psi):
                                if not tally.ok("reindex-monotone", ent(pulled[a], pulled[b]), {"u": u, "phi": phi, "psi": psi}):
                                    return
                            if "reindex-preserves-ops" in laws:
                                for op, f in (("and", T.meet), ("or", T.join), ("imp", T.imp)):
                                    lhs = T.reindex(f(phi, psi), u)
                                    rhs = f(pulled[a], pulled[b])
                                    if not tally.ok("reindex-preserves-ops", eq(lhs, rhs), {"op": op, "u": u, "phi": phi, "psi": psi}):
                                        return
                    if "reindex-preserves-ops" in laws:
                        J = sets[j]
                        for op, p, q in (("top", T.reindex(T.top(J), u), T.top(I)), ("bot", T.reindex(T.bot(J), u), T.bot(I))):
                            if not tally.ok("reindex-preserves-ops", eq(p, q), {"op": op, "u": u}):
                                return

        if "heyting" in laws:
            for I in sets:
                F = fibers[I.size]
                top, bot = T.top(I), T.bot(I)
                E = {(a.payload, b.payload): ent(a, b) for a in F for b in F}
                for phi in F:
                    if not tally.ok("heyting", ent(phi, top) and ent(bot, phi), {"rule": "top/bot", "phi": phi}):
                        return
                for phi in F:
                    for psi in F:
                        conj = T.meet(phi, psi)
                        disj = T.join(phi, psi)
                        impl = T.imp(phi, psi)
                        for rho in F:
                            r, p, s = rho.payload, phi.payload, psi.payload
                            if not tally.ok("heyting", ent(rho, conj) == (E[r, p] and E[r, s]), {"rule": "meet", "rho": rho, "phi": phi, "psi": psi}):
                                return
                            if not tally.ok("heyting", ent(disj, rho) == (E[p, r] and E[s, r]), {"rule": "join", "rho": rho, "phi": phi, "psi": psi}):
                                return
                            if not tally.ok("heyting", ent(rho, impl) == ent(T.meet(rho, phi), psi), {"rule": "implication", "rho": rho, "phi": phi, "psi": psi}):
                                return

        for (i, j), us in maps.items():
            FI, FJ = fibers[i], fibers[j]
            for u in us:
                ex = [T.exists(u, p) for p in FI]
                fa = [T.forall(u, p) for p in FI]
                pulled = [T.reindex(q, u) for q in FJ]
                for a, phi in enumerate(FI):
                    for b, psi in enumerate(FJ):
                        if "exists-adjoint" in laws:
                            if not tally.ok("exists-adjoint", ent(ex[a], psi) == ent(phi, pulled[b]), {"u": u, "phi": phi, "psi": psi}):
                                return
                        if "forall-adjoint" in laws:
                            if not tally.ok("forall-adjoint", ent(pulled[b], phi) == ent(psi, fa[a]), {"u": u, "phi": phi, "psi": psi}):
                                return
                        if "frobenius" in laws:
                            lhs = T.exists(u, T.meet(phi, pulled[b]))
                            rhs = T.meet(ex[a], psi)
                            if not tally.ok("frobenius", eq(lhs, rhs), {"u": u, "phi": phi, "psi": psi}):
                                return

        if "beck-chevalley" in laws:
            for (x, z), fs_ in maps.items():
                for (y, z2), gs in maps.items():
                    if z2 != z:
                        continue
                    for f in fs_:
                        for g in gs:
                            pb = pullback(f, g)
                            p1, p2 = pb.projections
                            for phi in fibers[x]:
                                lhs = T.reindex(T.exists(f, phi), g)
                                rhs = T.exists(p2, T.reindex(phi, p1))
                                if not tally.ok("beck-chevalley", eq(lhs, rhs), {"quantifier": "exists", "f": f, "g": g, "phi": phi}):
                                    return
                                lhs = T.reindex(T.forall(f, phi), g)
                                rhs = T.forall(p2, T.reindex(phi, p1))
                                if not tally.ok("beck-chevalley", eq(lhs, rhs), {"quantifier": "forall", "f": f, "g": g, "phi": phi}):
                                    return

    run()
    bounds = {"max_size": max_size, "flavor": T.describe()}
    counts = {k: v for k, v in tally.counts.items() if k in laws}
    if tally.failure is not None:
        return Verdict("laws", FAILS, bounds, tally.failure, f"law {tally.failure['law']} fails", details={"counts": counts})
    return Verdict("laws", HOLDS, bounds, None, f"{sum(counts.values())} law instances hold", details={"counts": counts})
