"""Worked examples: the power triposes ``I |-> I^n`` and the codiscrete-graph
functor ``nabla`` into reflexive graphs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import PowerTripos
from .finset import (
    FinMap,
    FinSetObj,
    all_maps,
    encode,
    epi_mono,
    is_epi,
    is_mono,
    pairing,
    product,
    product_obj,
)
from .functors import power_functor, preserves_finite_limits
from .verdict import fails, holds


# --- power triposes ------------------------------------------------------------

def diagonal(I: FinSetObj, n: int) -> FinMap:
    stride = sum(I.size ** k for k in range(n))
    return FinMap(I, FinSetObj(I.size ** n), tuple(i * stride for i in range(I.size)))


def first_projection(I: FinSetObj, n: int) -> FinMap:
    w = I.size ** (n - 1)
    return FinMap(FinSetObj(I.size ** n), I, tuple(k // w for k in range(I.size ** n)))


def product_shuffle(n: int, I: FinSetObj, J: FinSetObj) -> FinMap:
    """``(I x J)^n -> I^n x J^n``, unzipping coordinates."""
    a, b = I.size, J.size
    F = power_functor(n)
    src = F.obj(product_obj(I, J))
    table = []
    for k in range(src.size):
        xs, ys, r = [], [], k
        for _ in range(n):
            r, c = divmod(r, a * b)
            xs.append(c // b)
            ys.append(c % b)
        table.append(encode((a ** n, b ** n), (encode([a] * n, xs[::-1]), encode([b] * n, ys[::-1]))))
    return FinMap(src, product_obj(F.obj(I), F.obj(J)), tuple(table))


def validate_power_functor(n: int, limit_size: int = 2, split_max: int = 4):
    """Finite limits are preserved and each ``I`` splits off ``I^n`` along the diagonal."""
    bounds = {"n": n, "limit_size": limit_size, "split_max": split_max}
    F = power_functor(n)
    lim = preserves_finite_limits(F, limit_size)
    if not lim.holds:
        return fails("power-tripos", {"stage": "limits", **lim.witness}, bounds, "finite limits not preserved")
    for k in range(split_max + 1):
        I = FinSetObj(k)
        d, p = diagonal(I, n), first_projection(I, n)
        if any(p.table[d.table[i]] != i for i in range(k)):
            return fails("power-tripos", {"stage": "split", "I": k}, bounds, "diagonal is not split by the first projection")
    shuffles = {}
    for a in range(1, 4):
        for b in range(1, 4):
            I, J = FinSetObj(a), FinSetObj(b)
            s = product_shuffle(n, I, J)
            lim2 = product(I, J)
            q1, q2 = lim2.projections
            canon = pairing(F.fmap(q1), F.fmap(q2))
            if not epi_mono(s).is_iso or s.table != canon.table:
                return fails("power-tripos", {"stage": "shuffle", "I": a, "J": b}, bounds, "coordinate shuffle is not the comparison iso")
            shuffles[f"{a}x{b}"] = True
    return holds("power-tripos", bounds, f"I |-> I^{n} preserves finite limits; diagonals split",
                 limits=lim.details.get("checked"), shuffles=shuffles)


def power_tripos(n: int, validate: bool = True) -> PowerTripos:
    if n < 1:
        raise ValueError("n must be >= 1")
    if validate:
        v = validate_power_functor(n)
        if not v.holds:
            raise AssertionError(v.summary)
    return PowerTripos(n)


def counterexample_report(n: int, m: int):
    """Fiber over 2 of ``I |-> I^n`` has ``2^(2^n)`` elements: a discriminating invariant."""
    if n < 1 or m < 1:
        raise ValueError("n, m must be >= 1")
    two = FinSetObj(2)
    sn = PowerTripos(n).fiber_size(two)
    sm = PowerTripos(m).fiber_size(two)
    equivalent = sn == sm
    bounds = {"n": n, "m": m, "index": 2}
    summary = f"fiber over 2: {sn} vs {sm}; " + ("equivalent" if equivalent else "non-equivalent")
    return holds("counterexample", bounds, summary, fiber_n=sn, fiber_m=sm, equivalent=equivalent,
                 discriminator="subsets of 2^n pulled back to the fiber over 2")


# --- reflexive graphs -----------------------------------------------------------

@dataclass(frozen=True)
class ReflexiveGraph:
    nodes: FinSetObj
    edges: FinSetObj
    src: FinMap
    tgt: FinMap
    refl: FinMap

    def __post_init__(self):
        for f, d, c in ((self.src, self.edges, self.nodes), (self.tgt, self.edges, self.nodes), (self.refl, self.nodes, self.edges)):
            if f.dom.size != d.size or f.cod.size != c.size:
                raise ValueError("structure map has wrong shape")
        for v in range(self.nodes.size):
            e = self.refl.table[v]
            if self.src.table[e] != v or self.tgt.table[e] != v:
                raise ValueError(f"refl({v}) is not a loop at {v}")

    def ends(self, e: int) -> tuple:
        return self.src.table[e], self.tgt.table[e]

    def non_reflexive(self) -> list:
        r = set(self.refl.table)
        return [e for e in range(self.edges.size) if e not in r]

    def to_json(self):
        return {"nodes": self.nodes.size, "edges": [list(self.ends(e)) for e in range(self.edges.size)],
                "refl": list(self.refl.table)}


def graph(n_nodes: int, extra_edges=()) -> ReflexiveGraph:
    """Nodes ``0..n-1`` with loops ``refl(v) = v`` followed by ``extra_edges`` as (src, tgt)."""
    ends = [(v, v) for v in range(n_nodes)] + [tuple(e) for e in extra_edges]
    N, E = FinSetObj(n_nodes), FinSetObj(len(ends))
    return ReflexiveGraph(N, E, FinMap(E, N, tuple(s for s, _ in ends)), FinMap(E, N, tuple(t for _, t in ends)),
                          FinMap(N, E, tuple(range(n_nodes))))


@dataclass(frozen=True)
class GraphMorphism:
    dom: ReflexiveGraph
    cod: ReflexiveGraph
    node_map: FinMap
    edge_map: FinMap

    def __post_init__(self):
        G, H, f, g = self.dom, self.cod, self.node_map, self.edge_map
        for e in range(G.edges.size):
            s, t = G.ends(e)
            if H.ends(g.table[e]) != (f.table[s], f.table[t]):
                raise ValueError(f"edge {e} not sent to an edge between the images of its ends")
        for v in range(G.nodes.size):
            if g.table[G.refl.table[v]] != H.refl.table[f.table[v]]:
                raise ValueError(f"refl({v}) not preserved")

    @property
    def is_mono(self):
        return is_mono(self.node_map) and is_mono(self.edge_map)

    @property
    def is_epi(self):
        return is_epi(self.node_map) and is_epi(self.edge_map)


def graph_morphisms(G: ReflexiveGraph, H: ReflexiveGraph):
    """All morphisms, node maps in lexicographic order."""
    refl_G = {G.refl.table[v]: v for v in range(G.nodes.size)}
    by_ends = {}
    for e in range(H.edges.size):
        by_ends.setdefault(H.ends(e), []).append(e)
    for f in all_maps(G.nodes, H.nodes):
        choices = []
        for e in range(G.edges.size):
            if e in refl_G:
                choices.append([H.refl.table[f.table[refl_G[e]]]])
            else:
                s, t = G.ends(e)
                choices.append(by_ends.get((f.table[s], f.table[t]), []))
        for tab in itertools.product(*choices):
            yield GraphMorphism(G, H, f, FinMap(G.edges, H.edges, tuple(tab)))


def nabla(I: FinSetObj) -> ReflexiveGraph:
    """Codiscrete graph: exactly one edge ``i -> i2`` for every pair, encoded ``i * |I| + i2``."""
    n = I.size
    E = product_obj(I, I)
    return ReflexiveGraph(I, E, FinMap(E, I, tuple(k // n for k in range(n * n))),
                          FinMap(E, I, tuple(k % n for k in range(n * n))),
                          FinMap(I, E, tuple(i * n + i for i in range(n))))


def gamma(G: ReflexiveGraph) -> FinSetObj:
    """Global sections: maps from the one-node graph, i.e. nodes."""
    return G.nodes


def coproduct(G: ReflexiveGraph, H: ReflexiveGraph) -> ReflexiveGraph:
    n = G.nodes.size
    extra = [G.ends(e) for e in G.non_reflexive()] + [tuple(x + n for x in H.ends(e)) for e in H.non_reflexive()]
    return graph(n + H.nodes.size, extra)


def all_graphs(max_nodes: int, max_extra: int, max_edges=None) -> list:
    """Reflexive graphs in normal form: loops first, then sorted non-reflexive edges."""
    out = []
    for n in range(max_nodes + 1):
        pairs = [(s, t) for s in range(n) for t in range(n)]
        for m in range(max_extra + 1):
            if max_edges is not None and n + m > max_edges:
                break
            if m and not pairs:
                break
            for extra in itertools.combinations_with_replacement(pairs, m):
                out.append(graph(n, extra))
    return out


def check_nabla_adjunction(max_nodes: int = 2, max_edges: int = 4, max_I: int = 2):
    """``GraphMorphism(G, nabla I) -> FinMap(gamma G, I)``, taking the node map, is a bijection."""
    bounds = {"max_nodes": max_nodes, "max_edges": max_edges, "max_I": max_I}
    graphs = all_graphs(max_nodes, max_edges, max_edges)
    checked = 0
    for G in graphs:
        for k in range(max_I + 1):
            I = FinSetObj(k)
            lhs = [h.node_map.table for h in graph_morphisms(G, nabla(I))]
            rhs = [f.table for f in all_maps(gamma(G), I)]
            checked += 1
            if sorted(lhs) != sorted(rhs) or len(set(lhs)) != len(lhs):
                return fails("nabla-adjunction", {"G": G, "I": k, "left": len(lhs), "right": len(rhs)}, bounds,
                             "hom-set comparison is not a bijection")
    return holds("nabla-adjunction", bounds, f"bijection on {checked} hom-set pairs", graphs=len(graphs), checked=checked)


def graph_isos(G: ReflexiveGraph, H: ReflexiveGraph) -> list:
    return [h for h in graph_morphisms(G, H) if epi_mono(h.node_map).is_iso and epi_mono(h.edge_map).is_iso]


def nabla_not_cocontinuous():
    """``nabla(1 + 1)`` against ``nabla 1 + nabla 1``."""
    two = nabla(FinSetObj(2))
    one = nabla(FinSetObj(1))
    s = coproduct(one, one)
    scanned = sum(1 for _ in graph_morphisms(two, s))
    isos = graph_isos(two, s)
    details = {"edges": [two.edges.size, s.edges.size], "nodes": [two.nodes.size, s.nodes.size],
               "morphisms_scanned": scanned, "isos": len(isos)}
    if isos:
        return fails("nabla-not-cocontinuous", {"iso": isos[0]}, {}, "an isomorphism exists", **details)
    return holds("nabla-not-cocontinuous", {}, f"edges {two.edges.size} vs {s.edges.size}; no isomorphism; "
                 "nabla keeps limits (right adjoint to gamma) but not coproducts, so it has no right adjoint",
                 **details)


@dataclass(frozen=True)
class NablaCover:
    I: FinSetObj
    C: ReflexiveGraph
    incl: GraphMorphism  # C >-> nabla(I)
    e: GraphMorphism  # C ->> G


def cover_by_nabla(G: ReflexiveGraph):
    """``G`` as a quotient of a subgraph of ``nabla(edges G)``.

    ``C`` keeps the edge ``d -> d2`` of ``nabla`` iff ``d = d2`` or
    ``src d2 = tgt d``; ``e`` sends node ``d`` to ``tgt d`` and a kept edge
    ``d -> d2`` (``d != d2``) to ``d2``.
    """
    I = G.edges
    n = I.size
    N = nabla(I)
    kept = [(d, d2) for d in range(n) for d2 in range(n) if d == d2 or G.src.table[d2] == G.tgt.table[d]]
    CE = FinSetObj(len(kept))
    pos = {p: k for k, p in enumerate(kept)}
    C = ReflexiveGraph(I, CE, FinMap(CE, I, tuple(d for d, _ in kept)), FinMap(CE, I, tuple(d2 for _, d2 in kept)),
                       FinMap(I, CE, tuple(pos[d, d] for d in range(n))))
    incl = GraphMorphism(C, N, FinMap(I, I, tuple(range(n))), FinMap(CE, N.edges, tuple(d * n + d2 for d, d2 in kept)))
    node_e = FinMap(I, G.nodes, tuple(G.tgt.table[d] for d in range(n)))
    edge_e = FinMap(CE, G.edges, tuple(d2 if d != d2 else G.refl.table[G.tgt.table[d]] for d, d2 in kept))
    e = GraphMorphism(C, G, node_e, edge_e)
    cover = NablaCover(I, C, incl, e)
    pairs = [C.ends(k) for k in range(CE.size)]
    checks = {"at-most-one-edge": len(set(pairs)) == len(pairs), "incl-mono": incl.is_mono, "e-epi": e.is_epi}
    bounds = {"nodes": G.nodes.size, "edges": G.edges.size}
    if all(checks.values()):
        v = holds("cover-by-nabla", bounds, f"cover with |I| = {n}", checks=checks)
    else:
        v = fails("cover-by-nabla", {"checks": checks}, bounds, "cover invalid")
    v.details["cover"] = cover
    return v


def check_covers(max_nodes: int = 2, max_extra: int = 2):
    bounds = {"max_nodes": max_nodes, "max_extra": max_extra}
    graphs = all_graphs(max_nodes, max_extra)
    for G in graphs:
        v = cover_by_nabla(G)
        if not v.holds:
            return fails("cover-by-nabla", {"G": G, **v.witness}, bounds, "cover invalid")
    return holds("cover-by-nabla", bounds, f"covers validate on {len(graphs)} graphs", graphs=len(graphs))
