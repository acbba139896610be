"""Plain-text formats: algebra files and workbench files.

Algebra file::

    # the 3-element chain
    elements [bot, h, top]
    leq [(bot, h), (h, top)]
    imp                       # optional; Heyting implication when omitted
      bot: top top top
      h:   bot top top
      top: bot h top
    separator [top]           # generators; the least separator is taken

Workbench file: a ``tripos`` header (``identity``, ``power N`` or
``implicative`` followed by algebra lines), then declarations::

    sort X 2
    pred R X X = 0 3          # power flavors: codes of members of F(X x X)
    per E X = 0 3             # implicative: one element name per index
    funrel f E E = 0 3
    formula (forall (x X) (R x x))
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import ImplicativeTripos, PowerTripos, Predicate, Tripos
from .finset import FinSetObj, product_obj
from .implicative import (
    ImplicativeAlgebra,
    ImplicativeError,
    ImplicativeStructure,
    Separator,
    separator_closure,
    validate_implicative,
)
from .lattice import LatticeError, heyting_from_order, lattice_from_pairs
from .logic import FormulaError, Signature, eval_formula, parse_formula


class ParseError(ValueError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


_LIST = re.compile(r"^\[(.*)\]$")
_PAIR = re.compile(r"^\(\s*([^,\s()]+)\s*,\s*([^,\s()]+)\s*\)$")


def _strip(line):
    return line.split("#", 1)[0].rstrip()


def _list_items(body, lineno):
    m = _LIST.match(body.strip())
    if not m:
        raise ParseError(f"expected a bracketed list, got {body.strip()!r}", lineno)
    inner = m.group(1).strip()
    return inner, lineno


def _names(body, lineno):
    inner, _ = _list_items(body, lineno)
    if not inner:
        return []
    items = [x.strip() for x in inner.split(",")]
    if any(not x or " " in x for x in items):
        raise ParseError("malformed element list", lineno)
    return items


def _pairs(body, lineno):
    inner, _ = _list_items(body, lineno)
    out = []
    for chunk in re.findall(r"\([^()]*\)|[^,\s][^,]*", inner):
        chunk = chunk.strip()
        m = _PAIR.match(chunk)
        if not m:
            raise ParseError(f"malformed leq pair {chunk!r}", lineno)
        out.append((m.group(1), m.group(2)))
    rest = re.sub(r"\([^()]*\)|,|\s", "", inner)
    if rest:
        raise ParseError(f"malformed leq list near {rest!r}", lineno)
    return out


@dataclass
class _AlgebraLines:
    elements: list = None
    leq: list = None
    imp_rows: dict = field(default_factory=dict)
    imp_line: int = None
    separator: list = None
    lines: dict = field(default_factory=dict)


def _consume_algebra_line(acc: _AlgebraLines, line: str, lineno: int, in_imp: bool) -> bool:
    """Returns the new ``in_imp`` state; raises on a line it does not understand."""
    word, _, rest = line.strip().partition(" ")
    if word == "elements":
        acc.elements = _names(rest, lineno)
        acc.lines["elements"] = lineno
        return False
    if word == "leq":
        acc.leq = _pairs(rest, lineno)
        acc.lines["leq"] = lineno
        return False
    if word == "imp" and not rest.strip():
        acc.imp_line = lineno
        return True
    if word == "separator":
        acc.separator = _names(rest, lineno)
        acc.lines["separator"] = lineno
        return False
    if in_imp and ":" in line:
        name, _, vals = line.partition(":")
        name = name.strip()
        if name in acc.imp_rows:
            raise ParseError(f"duplicate imp row {name!r}", lineno)
        acc.imp_rows[name] = (vals.split(), lineno)
        return True
    raise ParseError(f"unrecognised line {line.strip()!r}", lineno)


def _build_algebra(acc: _AlgebraLines, name="") -> ImplicativeAlgebra:
    if acc.elements is None:
        raise ParseError("missing 'elements' line")
    labels = acc.elements
    if len(set(labels)) != len(labels):
        raise ParseError("duplicate element names", acc.lines["elements"])
    idx = {x: k for k, x in enumerate(labels)}
    leq = acc.leq or []
    for a, b in leq:
        for x in (a, b):
            if x not in idx:
                raise ParseError(f"unknown element {x!r} in leq", acc.lines.get("leq"))
    try:
        L = lattice_from_pairs(labels, leq)
    except LatticeError as exc:
        raise ParseError(f"not a lattice: {exc}", acc.lines.get("leq", acc.lines["elements"])) from exc
    if acc.imp_line is None:
        try:
            imp = heyting_from_order(L).imp
        except LatticeError as exc:
            raise ParseError(f"no imp table given and {exc}", acc.lines.get("leq")) from exc
    else:
        rows = []
        for x in labels:
            if x not in acc.imp_rows:
                raise ParseError(f"imp table missing row {x!r}", acc.imp_line)
            vals, ln = acc.imp_rows[x]
            if len(vals) != len(labels):
                raise ParseError(f"imp row {x!r} has {len(vals)} entries, expected {len(labels)}", ln)
            for v in vals:
                if v not in idx:
                    raise ParseError(f"unknown element {v!r} in imp row", ln)
            rows.append(tuple(idx[v] for v in vals))
        extra = set(acc.imp_rows) - set(labels)
        if extra:
            raise ParseError(f"imp row for unknown element {sorted(extra)[0]!r}", acc.imp_rows[sorted(extra)[0]][1])
        imp = tuple(rows)
    try:
        A = validate_implicative(L, imp)
    except ImplicativeError as exc:
        raise ParseError(f"not an implicative structure: {exc}", acc.imp_line) from exc
    gens = acc.separator or []
    for g in gens:
        if g not in idx:
            raise ParseError(f"unknown element {g!r} in separator", acc.lines.get("separator"))
    S = separator_closure(A, [idx[g] for g in gens])
    return ImplicativeAlgebra(A, S, name)


def parse_algebra(text: str, name: str = "") -> ImplicativeAlgebra:
    acc, in_imp = _AlgebraLines(), False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line.strip():
            continue
        in_imp = _consume_algebra_line(acc, line, lineno, in_imp)
    return _build_algebra(acc, name)


def serialize_algebra(alg: ImplicativeAlgebra) -> str:
    A: ImplicativeStructure = alg.structure
    L = A.lattice
    names = [L.name(a) for a in range(L.size)]
    covers = [(names[a], names[b]) for a, b in L.covers()]
    width = max((len(x) for x in names), default=0)
    lines = [
        f"elements [{', '.join(names)}]",
        "leq [" + ", ".join(f"({a}, {b})" for a, b in covers) + "]",
        "imp",
    ]
    for a in range(L.size):
        lines.append(f"  {(names[a] + ':').ljust(width + 1)} " + " ".join(names[v] for v in A.imp[a]))
    lines.append(f"separator [{', '.join(names[s] for s in sorted(alg.separator.members))}]")
    return "\n".join(lines) + "\n"


# --- workbench files ------------------------------------------------------------

@dataclass
class Workbench:
    tripos: Tripos
    sig: Signature
    pers: dict = field(default_factory=dict)  # name -> (PerObject, line)
    funrels: dict = field(default_factory=dict)  # name -> (FunRel, line)
    formulas: list = field(default_factory=list)  # (text, Formula, line)
    preds: dict = field(default_factory=dict)  # name -> line


def _payload(T: Tripos, I: FinSetObj, tokens, lineno):
    if isinstance(T, PowerTripos):
        try:
            codes = [int(t) for t in tokens]
        except ValueError as exc:
            raise ParseError("power payloads are lists of integer codes", lineno) from exc
        try:
            return T.pred(I, codes)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
    names = [T.algebra.lattice.name(a) for a in range(T.N)]
    idx = {x: k for k, x in enumerate(names)}
    if len(tokens) != I.size:
        raise ParseError(f"expected {I.size} element names, got {len(tokens)}", lineno)
    for t in tokens:
        if t not in idx:
            raise ParseError(f"unknown element {t!r}", lineno)
    return T.pred(I, [idx[t] for t in tokens])


def parse_workbench(text: str) -> Workbench:
    from .topos import FunRel, PerObject

    lines = [(k, _strip(raw)) for k, raw in enumerate(text.splitlines(), 1)]
    lines = [(k, l) for k, l in lines if l.strip()]
    if not lines or not lines[0][1].startswith("tripos"):
        raise ParseError("first line must be a 'tripos' header", lines[0][0] if lines else None)
    k0, head = lines[0]
    parts = head.split()
    body = lines[1:]
    if parts[1:] == ["identity"]:
        T = PowerTripos(1)
    elif len(parts) == 3 and parts[1] == "power" and parts[2].isdigit() and int(parts[2]) >= 1:
        T = PowerTripos(int(parts[2]))
    elif parts[1:] == ["implicative"]:
        acc, in_imp, rest = _AlgebraLines(), False, []
        for k, l in body:
            word = l.split()[0]
            if word in ("sort", "pred", "per", "funrel", "formula"):
                rest.append((k, l))
                in_imp = False
            elif rest:
                raise ParseError("algebra lines must precede declarations", k)
            else:
                in_imp = _consume_algebra_line(acc, l, k, in_imp)
        T = ImplicativeTripos(_build_algebra(acc))
        body = rest
    else:
        raise ParseError(f"unknown tripos header {head.strip()!r}", k0)

    wb = Workbench(T, Signature())
    sig = wb.sig
    for k, l in body:
        word, _, rest = l.strip().partition(" ")
        if word == "sort":
            p = rest.split()
            if len(p) != 2 or not p[1].isdigit():
                raise ParseError("expected 'sort NAME SIZE'", k)
            if p[0] in sig.sorts:
                raise ParseError(f"duplicate sort {p[0]!r}", k)
            sig.sorts[p[0]] = FinSetObj(int(p[1]))
        elif word in ("pred", "per", "funrel"):
            decl, eq, payload = rest.partition("=")
            if not eq:
                raise ParseError(f"expected '{word} NAME ... = PAYLOAD'", k)
            d = decl.split()
            if not d:
                raise ParseError("missing name", k)
            name, args = d[0], d[1:]
            if name in sig.preds or name in sig.sorts:
                raise ParseError(f"duplicate name {name!r}", k)
            if word == "pred":
                for s in args:
                    if s not in sig.sorts:
                        raise ParseError(f"unknown sort {s!r}", k)
                I = product_obj(*(sig.sorts[s] for s in args)) if args else FinSetObj(1)
                sig.preds[name] = (_payload(T, I, payload.split(), k), tuple(args))
                wb.preds[name] = k
            elif word == "per":
                if len(args) != 1 or args[0] not in sig.sorts:
                    raise ParseError("expected 'per NAME SORT = PAYLOAD'", k)
                S = sig.sorts[args[0]]
                X = PerObject(S, _payload(T, product_obj(S, S), payload.split(), k))
                wb.pers[name] = (X, k)
                sig.preds[name] = (X.eq, (args[0], args[0]))
            else:
                if len(args) != 2 or any(a not in wb.pers for a in args):
                    raise ParseError("expected 'funrel NAME PER PER = PAYLOAD'", k)
                X, Y = wb.pers[args[0]][0], wb.pers[args[1]][0]
                R = _payload(T, product_obj(X.index, Y.index), payload.split(), k)
                wb.funrels[name] = (FunRel(X, Y, R), k)
        elif word == "formula":
            try:
                wb.formulas.append((rest.strip(), parse_formula(rest, sig), k))
            except FormulaError as exc:
                raise ParseError(f"formula: {exc}", k) from exc
        else:
            raise ParseError(f"unrecognised line {l.strip()!r}", k)
    return wb


def check_workbench(wb: Workbench) -> list:
    """``[(kind, name, line, ok, note)]`` for every declaration that has a validity condition."""
    from .topos import validate_funrel, validate_per

    T, out = wb.tripos, []
    for name, (X, k) in wb.pers.items():
        v = validate_per(T, X)
        out.append(("per", name, k, v.holds, v.summary))
    for name, (F, k) in wb.funrels.items():
        v = validate_funrel(T, F)
        out.append(("funrel", name, k, v.holds, v.summary))
    for text, F, k in wb.formulas:
        try:
            ok = T.holds(eval_formula(T, F))
        except FormulaError as exc:
            raise ParseError(f"formula: {exc}", k) from exc
        out.append(("formula", text, k, ok, "holds" if ok else "does not hold"))
    return out
