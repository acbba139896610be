"""Internal first-order logic of a tripos.

Formulas are evaluated by structural recursion to a predicate over the
product of the context sorts: atoms by reindexing along tupling maps,
connectives fiberwise, quantifiers along the projection that drops the
bound variable.

Surface syntax (s-expressions)::

    formula := true | false
             | (and f ...) | (or f ...) | (implies f g) | (iff f g) | (not f)
             | (forall (x S) f) | (exists (x S) f)
             | (= x y) | (P x ...)

Sorts ``S`` and predicate symbols ``P`` are resolved in a ``Signature``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .config import CapExceeded
from .core import Predicate, PowerTripos, Tripos
from .finset import FinMap, FinSetObj, encode, product_elements


class FormulaError(ValueError):
    pass


class Formula:
    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __rshift__(self, other):
        return Imp(self, other)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    pred: Predicate
    args: tuple
    sorts: Optional[tuple] = None


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class And(Formula):
    parts: tuple


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    sort: FinSetObj
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    sort: FinSetObj
    body: Formula


def atom(pred: Predicate, *args: str, sorts=None) -> Atom:
    return Atom(pred, tuple(args), tuple(sorts) if sorts is not None else None)


def forall(binders, body) -> Formula:
    """``forall([("x", X), ("y", Y)], body)`` nests left to right."""
    for v, s in reversed(list(binders)):
        body = Forall(v, s, body)
    return body


def exists(binders, body) -> Formula:
    for v, s in reversed(list(binders)):
        body = Exists(v, s, body)
    return body


# --- evaluation ----------------------------------------------------------------

@lru_cache(maxsize=4096)
def _tupling(ctx_sizes: tuple, positions: tuple) -> tuple:
    arg_sizes = [ctx_sizes[p] for p in positions]
    return tuple(encode(arg_sizes, [c[p] for p in positions]) for c in product_elements(ctx_sizes))


@lru_cache(maxsize=4096)
def _drop_last(n: int, s: int) -> tuple:
    return tuple(k // s for k in range(n * s))


def _lookup(ctx, v):
    for pos in range(len(ctx) - 1, -1, -1):
        if ctx[pos][0] == v:
            return pos
    raise FormulaError(f"unbound variable {v!r}")


def _ctx_obj(ctx) -> FinSetObj:
    n = 1
    for _, s in ctx:
        n *= s.size
    return FinSetObj(n)


def eval_formula(T: Tripos, F: Formula, context=()) -> Predicate:
    """Value of ``F`` as a predicate over the product of ``context`` sorts.

    ``context`` is a sequence of ``(name, FinSetObj)``.
    """
    return _eval(T, F, tuple(context))


def _eval(T, F, ctx):
    I = _ctx_obj(ctx)
    if isinstance(T, PowerTripos) and I.size ** T.n > T.caps.max_context:
        raise CapExceeded(f"context of size {I.size} too large for exponent {T.n}")
    if isinstance(F, Top):
        return T.top(I)
    if isinstance(F, Bot):
        return T.bot(I)
    if isinstance(F, Atom):
        pos = tuple(_lookup(ctx, v) for v in F.args)
        if F.sorts is not None:
            if len(F.sorts) != len(pos):
                raise FormulaError("atom arity mismatch")
            for v, p, s in zip(F.args, pos, F.sorts):
                if ctx[p][1].size != s.size:
                    raise FormulaError(f"variable {v!r} has sort of size {ctx[p][1].size}, expected {s.size}")
        sizes = tuple(s.size for _, s in ctx)
        target = 1
        for p in pos:
            target *= sizes[p]
        if target != F.pred.index.size:
            raise FormulaError(f"atom arguments span {target} elements, predicate index has {F.pred.index.size}")
        u = FinMap(I, F.pred.index, _tupling(sizes, pos))
        return T.reindex(F.pred, u)
    if isinstance(F, Eq):
        p, q = _lookup(ctx, F.left), _lookup(ctx, F.right)
        S = ctx[p][1]
        if ctx[q][1].size != S.size:
            raise FormulaError("equality between different sorts")
        sizes = tuple(s.size for _, s in ctx)
        eq = T.equality(S)
        return T.reindex(eq, FinMap(I, eq.index, _tupling(sizes, (p, q))))
    if isinstance(F, And):
        acc = T.top(I)
        for part in F.parts:
            acc = T.meet(acc, _eval(T, part, ctx))
        return acc if F.parts else T.top(I)
    if isinstance(F, Or):
        if not F.parts:
            return T.bot(I)
        acc = _eval(T, F.parts[0], ctx)
        for part in F.parts[1:]:
            acc = T.join(acc, _eval(T, part, ctx))
        return acc
    if isinstance(F, Imp):
        return T.imp(_eval(T, F.left, ctx), _eval(T, F.right, ctx))
    if isinstance(F, Iff):
        a, b = _eval(T, F.left, ctx), _eval(T, F.right, ctx)
        return T.meet(T.imp(a, b), T.imp(b, a))
    if isinstance(F, Not):
        return T.imp(_eval(T, F.body, ctx), T.bot(I))
    if isinstance(F, (Forall, Exists)):
        inner = ctx + ((F.var, F.sort),)
        body = _eval(T, F.body, inner)
        proj = FinMap(body.index, I, _drop_last(I.size, F.sort.size))
        return T.forall(proj, body) if isinstance(F, Forall) else T.exists(proj, body)
    raise FormulaError(f"not a formula: {F!r}")


def holds(T: Tripos, F: Formula) -> bool:
    """A closed formula holds iff its value over 1 is ``-||- top``."""
    return T.holds(eval_formula(T, F, ()))


def free_vars(F: Formula) -> set:
    if isinstance(F, (Top, Bot)):
        return set()
    if isinstance(F, Atom):
        return set(F.args)
    if isinstance(F, Eq):
        return {F.left, F.right}
    if isinstance(F, (And, Or)):
        return set().union(*(free_vars(p) for p in F.parts)) if F.parts else set()
    if isinstance(F, (Imp, Iff)):
        return free_vars(F.left) | free_vars(F.right)
    if isinstance(F, Not):
        return free_vars(F.body)
    if isinstance(F, (Forall, Exists)):
        return free_vars(F.body) - {F.var}
    raise FormulaError(f"not a formula: {F!r}")


# --- surface syntax -----------------------------------------------------------

@dataclass
class Signature:
    sorts: dict = field(default_factory=dict)  # name -> FinSetObj
    preds: dict = field(default_factory=dict)  # name -> (Predicate, tuple of sort names)


_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")


def _tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character at {pos}")
        out.append((m.group(1) or m.group(2) or m.group(3), m.start(m.lastindex)))
        pos = m.end()
    return out


def _read(tokens, k):
    if k >= len(tokens):
        raise FormulaError("unexpected end of formula")
    tok, where = tokens[k]
    if tok == ")":
        raise FormulaError(f"unexpected ')' at {where}")
    if tok != "(":
        return (tok, where), k + 1
    items, k = [], k + 1
    while True:
        if k >= len(tokens):
            raise FormulaError(f"unclosed '(' at {where}")
        if tokens[k][0] == ")":
            return (items, where), k + 1
        item, k = _read(tokens, k)
        items.append(item)


def parse_formula(text: str, sig: Signature) -> Formula:
    tokens = _tokenize(text)
    tree, k = _read(tokens, 0)
    if k != len(tokens):
        raise FormulaError(f"trailing input at {tokens[k][1]}")
    return _build(tree, sig)


def _build(node, sig):
    val, where = node
    if isinstance(val, str):
        if val == "true":
            return Top()
        if val == "false":
            return Bot()
        raise FormulaError(f"expected formula at {where}, got {val!r}")
    if not val:
        raise FormulaError(f"empty form at {where}")
    head, _ = val[0]
    if not isinstance(head, str):
        raise FormulaError(f"form must start with an operator at {where}")
    args = val[1:]

    def need(k):
        if len(args) != k:
            raise FormulaError(f"{head} takes {k} argument(s) at {where}")

    if head in ("and", "or"):
        parts = tuple(_build(a, sig) for a in args)
        return And(parts) if head == "and" else Or(parts)
    if head in ("implies", "->"):
        need(2)
        return Imp(_build(args[0], sig), _build(args[1], sig))
    if head in ("iff", "<->"):
        need(2)
        return Iff(_build(args[0], sig), _build(args[1], sig))
    if head == "not":
        need(1)
        return Not(_build(args[0], sig))
    if head in ("forall", "exists"):
        need(2)
        binder, bw = args[0]
        if not (isinstance(binder, list) and len(binder) == 2 and all(isinstance(b[0], str) for b in binder)):
            raise FormulaError(f"binder must be (var Sort) at {bw}")
        var, sname = binder[0][0], binder[1][0]
        if sname not in sig.sorts:
            raise FormulaError(f"unknown sort {sname!r} at {binder[1][1]}")
        body = _build(args[1], sig)
        cls = Forall if head == "forall" else Exists
        return cls(var, sig.sorts[sname], body)
    if head == "=":
        need(2)
        return Eq(_var(args[0]), _var(args[1]))
    if head not in sig.preds:
        raise FormulaError(f"unknown predicate {head!r} at {where}")
    pred, snames = sig.preds[head]
    if len(snames) != len(args):
        raise FormulaError(f"{head} takes {len(snames)} argument(s) at {where}")
    return Atom(pred, tuple(_var(a) for a in args), tuple(sig.sorts[s] for s in snames))


def _var(node):
    val, where = node
    if not isinstance(val, str):
        raise FormulaError(f"expected variable at {where}")
    return val


def to_sexpr(F: Formula, names: dict | None = None) -> str:
    """Inverse of ``parse_formula`` given names for sorts and predicates (by identity)."""
    names = names or {}

    def nm(obj):
        for k, v in names.items():
            if v is obj or v == obj:
                return k
        raise FormulaError(f"no name for {obj!r}")

    if isinstance(F, Top):
        return "true"
    if isinstance(F, Bot):
        return "false"
    if isinstance(F, Atom):
        return "(" + " ".join([nm(F.pred), *F.args]) + ")"
    if isinstance(F, Eq):
        return f"(= {F.left} {F.right})"
    if isinstance(F, (And, Or)):
        op = "and" if isinstance(F, And) else "or"
        return "(" + " ".join([op, *(to_sexpr(p, names) for p in F.parts)]) + ")"
    if isinstance(F, Imp):
        return f"(implies {to_sexpr(F.left, names)} {to_sexpr(F.right, names)})"
    if isinstance(F, Iff):
        return f"(iff {to_sexpr(F.left, names)} {to_sexpr(F.right, names)})"
    if isinstance(F, Not):
        return f"(not {to_sexpr(F.body, names)})"
    if isinstance(F, (Forall, Exists)):
        op = "forall" if isinstance(F, Forall) else "exists"
        return f"({op} ({F.var} {nm(F.sort)}) {to_sexpr(F.body, names)})"
    raise FormulaError(f"not a formula: {F!r}")
