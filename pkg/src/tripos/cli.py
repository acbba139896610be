"""``tripos`` command line: ``check <id>``, ``gallery``, ``validate <file>``.

Exit status: 0 holds, 1 fails, 2 cap exceeded, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

from .config import DEFAULT_CAPS, CapExceeded, Caps
from .core import ImplicativeTripos, PowerTripos
from .finset import FinSetObj
from .implicative import from_heyting
from .lattice import chain, diamond
from .verdict import CAP_EXCEEDED, FAILS, HOLDS, Verdict, jsonable

EXIT = {HOLDS: 0, FAILS: 1, CAP_EXCEEDED: 2}
INPUT_ERROR = 3

BUILTIN_ALGEBRAS = {
    "bool2": lambda: from_heyting(chain(2), name="bool2"),
    "chain3": lambda: from_heyting(chain(3), name="chain3"),
    "bool4": lambda: from_heyting(diamond(), name="bool4"),
}


class InputError(ValueError):
    pass


# --- argument helpers ----------------------------------------------------------

def load_algebra(ref: str):
    if ref in BUILTIN_ALGEBRAS:
        return BUILTIN_ALGEBRAS[ref]()
    from .textformat import parse_algebra

    try:
        with open(ref) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read algebra {ref!r}: {exc.strerror}") from exc
    return parse_algebra(text, name=ref)


def make_tripos(flavor: str, caps: Caps, algebra: str | None = None):
    if flavor == "identity":
        return PowerTripos(1, caps)
    if flavor.startswith("power:"):
        n = flavor.split(":", 1)[1]
        if not n.isdigit() or int(n) < 1:
            raise InputError(f"bad power exponent in {flavor!r}")
        return PowerTripos(int(n), caps)
    if flavor == "implicative" or flavor.startswith("implicative:"):
        ref = flavor.split(":", 1)[1] if ":" in flavor else algebra
        if not ref:
            raise InputError("implicative flavor needs an algebra (implicative:NAME or --algebra FILE)")
        return ImplicativeTripos(load_algebra(ref), caps)
    raise InputError(f"unknown flavor {flavor!r} (identity, power:N, implicative:NAME)")


def make_functor(name: str):
    from .functors import maybe_functor, power_functor

    if name == "identity":
        return power_functor(1)
    if name == "maybe":
        return maybe_functor()
    if name.startswith("power:") and name[6:].isdigit() and int(name[6:]) >= 1:
        return power_functor(int(name[6:]))
    raise InputError(f"unknown functor {name!r} (identity, power:N, maybe)")


def _family(T, a):
    """The family named by ``--sigma`` / ``--t``, with a per-flavor default."""
    from .laws import GenericFamily
    from .textformat import ParseError, _payload

    if a.t is None:
        if isinstance(T, PowerTripos) and T.n == 1:
            return GenericFamily(FinSetObj(2), T.pred(FinSetObj(2), {1}))
        if isinstance(T, ImplicativeTripos):
            S = FinSetObj(T.N)
            return GenericFamily(S, T.pred(S, range(T.N)))
        raise InputError("this flavor has no default family; pass --sigma and --t")
    S = FinSetObj(a.sigma if a.sigma is not None else 2)
    try:
        return GenericFamily(S, _payload(T, S, a.t.split(), None))
    except ParseError as exc:
        raise InputError(f"--t: {exc}") from exc


# --- registry ---------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    description: str
    run: Callable = field(repr=False)
    flavored: bool = True


def _ca(T, a):
    from .laws import check_comprehension

    return check_comprehension(T, FinSetObj(_dflt(a.I, 2)), FinSetObj(_dflt(a.J, 2)))


def _skolem(T, a):
    from .laws import check_skolem, comprehension_witness
    from .finset import product_obj
    from .verdict import cap_exceeded, fails, holds

    I, J = FinSetObj(_dflt(a.I, 2)), FinSetObj(_dflt(a.J, 2))
    bounds = {"I": I.size, "J": J.size, "flavor": T.describe()}
    try:
        W = comprehension_witness(T, I)
        rhos = T.fiber(product_obj(I, J))
    except CapExceeded as exc:
        return cap_exceeded("skolem", bounds, str(exc))
    for rho in rhos:
        v = check_skolem(T, rho, W, J)
        if not v.holds:
            v.bounds.update(bounds)
            return v
    return holds("skolem", bounds, f"every one of {len(rhos)} predicates has a Skolem function", checked=len(rhos))


def _dflt(x, d):
    return d if x is None else x


def _generic(T, a):
    from .laws import find_generic_family

    return find_generic_family(T, range(_dflt(a.sigma_min, 1), _dflt(a.sigma_max, 4) + 1), _dflt(a.i_max, 3))


def _weak(T, a):
    from .laws import is_weakly_generic

    v = is_weakly_generic(T, _family(T, a), _dflt(a.i_max, 3), a.j_max)
    v.details.pop("witnesses", None)
    return v


def _w2g(T, a):
    from .laws import weak_to_generic

    try:
        tr = weak_to_generic(T, _family(T, a), _dflt(a.i_max, 4), a.j_max)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    v = tr.verdict
    v.details.update({
        "E": tr.E_obj, "p": tr.p, "q": tr.q, "result": tr.result,
        "h_onto_all": all(r.h_onto for r in tr.audits),
        "audits": [{"I": r.I, "phi": r.phi, "J": r.J, "g": r.g, "R": r.R, "h_onto": r.h_onto, "steps": r.steps}
                   for r in tr.audits],
    })
    return v


def _regular(T, a):
    from .laws import check_regular

    return check_regular(T, _dflt(a.max_size, 4))


def _composition(T, a):
    from .laws import check_tripos_composition

    return check_tripos_composition(make_functor(a.f1 or "identity"), make_functor(a.h or "power:2"))


def _assembly(T, a):
    from .laws import assembly_check

    if not isinstance(T, PowerTripos):
        raise InputError("assembly applies to identity and power flavors")
    return assembly_check(T, FinSetObj(_dflt(a.A, 3)), i_max=_dflt(a.i_max, 4))


def _morphism(T, a):
    from .laws import implicative_morphism_check

    src = load_algebra(a.source or "chain3")
    tgt = load_algebra(a.target or "bool2")
    if a.map is None:
        if (a.source or "chain3") != "chain3" or (a.target or "bool2") != "bool2":
            raise InputError("--map is required unless collapsing chain3 onto bool2")
        names = "bot top top"
    else:
        names = a.map
    labels = [tgt.lattice.name(x) for x in range(tgt.size)]
    try:
        h = [labels.index(x) for x in names.split()]
    except ValueError as exc:
        raise InputError(f"--map: unknown target element in {names!r}") from exc
    try:
        return implicative_morphism_check(h, ImplicativeTripos(src, a.caps), ImplicativeTripos(tgt, a.caps),
                                          _dflt(a.max_size, 2))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _laws(T, a):
    from .lawsuite import check_laws

    try:
        return check_laws(T, _dflt(a.max_size, 2))
    except CapExceeded as exc:
        from .verdict import cap_exceeded

        return cap_exceeded("laws", {"max_size": _dflt(a.max_size, 2), "flavor": T.describe()}, str(exc))


def _kernel(T, a):
    from .laws import check_implicative_kernel

    if not isinstance(T, ImplicativeTripos):
        raise InputError("kernel applies to implicative flavors")
    return check_implicative_kernel(T.algebra, _dflt(a.max_size, 3))


def _closure(T, a):
    from .implicative import closure_sweep

    return closure_sweep(_dflt(a.max_size, 4))


def _power(T, a):
    from .gallery import validate_power_functor

    return validate_power_functor(_dflt(a.n, 2))


def _counter(T, a):
    from .gallery import counterexample_report

    n, m = _dflt(a.n, 1), _dflt(a.m, 2)
    if n < 1 or m < 1:
        raise InputError("--n and --m must be >= 1")
    return counterexample_report(n, m)


def _nabla_adj(T, a):
    from .gallery import check_nabla_adjunction

    return check_nabla_adjunction(_dflt(a.max_nodes, 2), _dflt(a.max_edges, 4), _dflt(a.i_max, 2))


def _nabla_nc(T, a):
    from .gallery import nabla_not_cocontinuous

    return nabla_not_cocontinuous()


def _cover(T, a):
    from .gallery import check_covers

    return check_covers(_dflt(a.max_nodes, 2), _dflt(a.max_extra, 2))


def _topos(fn_name, default):
    def run(T, a):
        from . import topos

        try:
            return getattr(topos, fn_name)(T, _dflt(a.max_index, default))
        except CapExceeded as exc:
            from .verdict import cap_exceeded

            return cap_exceeded(fn_name, {"max_index": _dflt(a.max_index, default)}, str(exc))

    return run


def _subquotients(T, a):
    from .topos import pers_up_to, subquotient_witness
    from .verdict import fails, holds

    k = _dflt(a.max_index, 2)
    objs = pers_up_to(T, k)
    for X in objs:
        v = subquotient_witness(T, X)
        if not v.holds:
            return v
    return holds("subquotient", {"max_index": k, "flavor": T.describe()}, f"witnesses validate for {len(objs)} PERs",
                 pers=len(objs))


REGISTRY = [
    Check("laws", "fibered preorder laws (Heyting fibers, adjoint quantifiers, Beck-Chevalley)",
          "exhaustive law suite on all index sets up to --max-size", _laws),
    Check("kernel", "implicative algebras from complete Heyting algebras",
          "K = S = top and entailment is pointwise order (S = {top})", _kernel),
    Check("separator-closure", "implicative algebras: least separator",
          "closure agrees with the intersection oracle on all structures up to --max-size", _closure, False),
    Check("ca", "comprehension lemma: membership predicates classify binary predicates",
          "comprehension formula for every predicate over I x J", _ca),
    Check("skolem", "traditional triposes: comprehension witnessed by base functions",
          "Skolem-function search for every predicate over I x J", _skolem),
    Check("generic", "traditional tripos: generic family",
          "bounded search for a generic family (smaller sigma first, lexicographic t)", _generic),
    Check("weakly-generic", "weak-genericity lemma: genericity up to an epi",
          "per-predicate (epi, map) witness search", _weak),
    Check("weak-to-generic", "weak-genericity lemma: existential image of the membership pairs",
          "build exists_q p^* t over P(sigma) and audit its genericity", _w2g),
    Check("regular", "regular triposes: epi preservation vs prestack",
          "F preserves epis, cross-checked against order reflection along maps", _regular),
    Check("composition", "composition theorem: H is a tripos iff it preserves finite limits",
          "tripos conditions for F1, H F1 and H (--f1, --h)", _composition, False),
    Check("assembly", "assemblies: subobjects of some F(I)", "injection search A >-> F(I)", _assembly),
    Check("implicative-morphism", "implicative algebras: morphisms by postcomposition",
          "law sweep for g(phi) = h . phi (--source, --target, --map)", _morphism, False),
    Check("power-tripos", "power triposes I |-> I^n", "finite limits, diagonal split, product shuffle", _power, False),
    Check("counterexample", "power-tripos inequivalence: fiber over 2",
          "compare 2^(2^n) with 2^(2^m)", _counter, False),
    Check("nabla-adjunction", "reflexive graphs: global sections left adjoint to codiscrete",
          "hom-set bijection GraphMorphism(G, nabla I) = Map(gamma G, I)", _nabla_adj, False),
    Check("nabla-not-cocontinuous", "reflexive graphs: codiscrete functor has no right adjoint",
          "nabla(1 + 1) against nabla 1 + nabla 1", _nabla_nc, False),
    Check("cover-by-nabla", "reflexive graphs: every graph is a subquotient of some nabla(I)",
          "direct cover construction on all small graphs", _cover, False),
    Check("category-laws", "PER topos: category structure", "unit and associativity laws on enumerated morphisms",
          _topos("check_category_laws", 2)),
    Check("delta-functor", "PER topos: constant objects functor", "Delta preserves identities and composition",
          _topos("check_delta_functor", 3)),
    Check("delta-limits", "PER topos: Delta preserves finite limits", "terminal object and binary products",
          _topos("check_delta_limits", 2)),
    Check("mono-epi", "PER topos: monos and epis", "internal characterisations agree with cancellation",
          _topos("check_mono_epi_agreement", 2)),
    Check("subquotient", "PER topos: every object is a subquotient of some Delta(I)",
          "witness construction on every enumerated PER", _subquotients),
]
CHECKS = {c.id: c for c in REGISTRY}


def list_gallery() -> list:
    return [{"id": c.id, "anchor": c.anchor, "description": c.description} for c in REGISTRY]


# --- reports --------------------------------------------------------------------

def report_dict(check: Check, v: Verdict, caps: Caps) -> dict:
    return {
        "check": check.id,
        "anchor": check.anchor,
        "status": v.status,
        "bounds": jsonable(v.bounds),
        "caps": caps.to_dict(),
        "summary": v.summary,
        "witness": jsonable(v.witness),
        "details": jsonable(v.details),
    }


def emit_report(rep: dict, fmt: str, wall: float | None = None) -> str:
    if fmt == "json":
        return json.dumps(rep, indent=2) + "\n"
    bounds = " ".join(f"{k}={json.dumps(v)}" for k, v in rep["bounds"].items())
    lines = [
        f"check:   {rep['check']}",
        f"anchor:  {rep['anchor']}",
        f"verdict: {rep['status']}",
        f"bounds:  {bounds}",
        f"summary: {rep['summary']}",
    ]
    if rep["witness"] is not None:
        lines.append("witness:")
        lines.extend("  " + l for l in json.dumps(rep["witness"], indent=2).splitlines())
    if wall is not None:
        lines.append(f"time:    {wall:.3f} s")
    return "\n".join(lines) + "\n"


def run_check(check_id: str, args, caps: Caps = DEFAULT_CAPS):
    if check_id not in CHECKS:
        raise InputError(f"unknown check {check_id!r}; see 'tripos gallery'")
    c = CHECKS[check_id]
    T = make_tripos(args.flavor or "identity", caps, args.algebra) if c.flavored else None
    if not c.flavored and args.flavor:
        raise InputError(f"check {check_id!r} takes no --flavor")
    args.caps = caps
    t0 = time.perf_counter()
    v = c.run(T, args)
    return report_dict(c, v, caps), time.perf_counter() - t0


# --- entry point ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="tripos", description="Bounded, exhaustive checks for triposes over finite sets.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="run one check")
    c.add_argument("id")
    c.add_argument("--flavor", help="identity | power:N | implicative:NAME (bool2, chain3, bool4, or a file)")
    c.add_argument("--algebra", help="algebra file for --flavor implicative")
    c.add_argument("--format", choices=("text", "json"), default="text")
    for name in ("I", "J", "n", "m", "A", "sigma", "sigma-min", "sigma-max", "i-max", "j-max", "max-size",
                 "max-index", "max-nodes", "max-edges", "max-extra"):
        c.add_argument(f"--{name}", type=int)
    c.add_argument("--t", help="family payload over sigma (codes or element names)")
    c.add_argument("--f1")
    c.add_argument("--h")
    c.add_argument("--source")
    c.add_argument("--target")
    c.add_argument("--map", help="images of the source elements, as target names")
    for name in ("max-fiber", "max-context", "max-powerset-base"):
        c.add_argument(f"--{name}", type=int, help="cap override")

    g = sub.add_parser("gallery", help="list checks")
    g.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("validate", help="validate an algebra or workbench file")
    v.add_argument("file")
    v.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _caps(a) -> Caps:
    over = {"max_fiber": a.max_fiber, "max_context": a.max_context, "max_powerset_base": a.max_powerset_base}
    for k, x in over.items():
        if x is not None and x <= 0:
            raise InputError(f"cap {k} must be positive")
    return DEFAULT_CAPS.override(**over)


def _validate(path, fmt, out):
    from .textformat import ParseError, check_workbench, parse_algebra, parse_workbench, serialize_algebra

    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path!r}: {exc.strerror}") from exc
    try:
        first = next((l.split("#", 1)[0].strip() for l in text.splitlines() if l.split("#", 1)[0].strip()), "")
        if first.startswith("tripos"):
            wb = parse_workbench(text)
            items = [{"kind": k, "name": n, "line": ln, "ok": ok, "note": note}
                     for k, n, ln, ok, note in check_workbench(wb)]
            rep = {"file": path, "kind": "workbench", "tripos": wb.tripos.describe(), "items": items}
            ok = all(i["ok"] for i in items)
        else:
            alg = parse_algebra(text)
            L = alg.lattice
            rep = {"file": path, "kind": "algebra", "size": alg.size,
                   "separator": sorted(L.name(s) for s in alg.separator.members),
                   "normal_form": serialize_algebra(alg)}
            ok = True
    except ParseError as exc:
        raise InputError(str(exc)) from exc
    rep["status"] = HOLDS if ok else FAILS
    if fmt == "json":
        out.write(json.dumps(rep, indent=2) + "\n")
    elif rep["kind"] == "algebra":
        out.write(f"valid algebra with {rep['size']} elements; separator {rep['separator']}\n{rep['normal_form']}")
    else:
        for i in rep["items"]:
            out.write(f"line {i['line']}: {i['kind']} {i['name']}: {'ok' if i['ok'] else 'FAIL'} ({i['note']})\n")
        out.write(f"{rep['status']}\n")
    return EXIT[rep["status"]]


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if a.cmd == "gallery":
            cat = list_gallery()
            if a.format == "json":
                out.write(json.dumps(cat, indent=2) + "\n")
            else:
                w = max(len(c["id"]) for c in cat)
                for c in cat:
                    out.write(f"{c['id'].ljust(w)}  {c['anchor']}\n")
            return 0
        if a.cmd == "validate":
            return _validate(a.file, a.format, out)
        rep, wall = run_check(a.id, a, _caps(a))
        out.write(emit_report(rep, a.format, None if a.format == "json" else wall))
        return EXIT[rep["status"]]
    except (InputError, ValueError) as exc:
        sys.stderr.write(f"tripos: error: {exc}\n")
        return INPUT_ERROR


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
