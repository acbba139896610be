"""Three-valued check outcomes and their JSON-able payloads."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

HOLDS = "holds-within-bounds"
FAILS = "fails"
CAP_EXCEEDED = "cap-exceeded"


@dataclass
class Verdict:
    check: str
    status: str
    bounds: dict = field(default_factory=dict)
    witness: Any = None
    summary: str = ""
    anchor: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.status == HOLDS

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


def holds(check, bounds=None, summary="", **details) -> Verdict:
    return Verdict(check, HOLDS, bounds or {}, None, summary, details=details)


def fails(check, witness, bounds=None, summary="", **details) -> Verdict:
    return Verdict(check, FAILS, bounds or {}, witness, summary, details=details)


def cap_exceeded(check, bounds=None, summary="") -> Verdict:
    return Verdict(check, CAP_EXCEEDED, bounds or {}, None, summary)


def jsonable(x):
    """Convert checker payloads (maps, predicates, dataclasses) to plain JSON data."""
    from .finset import FinMap, FinSetObj, Subobject

    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, FinMap):
        return {"dom": x.dom.size, "cod": x.cod.size, "table": list(x.table)}
    if isinstance(x, FinSetObj):
        return x.size
    if isinstance(x, Subobject):
        return {"ambient": x.ambient.size, "members": x.elements()}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    if hasattr(x, "to_json"):
        return x.to_json()
    if hasattr(x, "__dataclass_fields__"):
        return {k: jsonable(getattr(x, k)) for k in x.__dataclass_fields__}
    return repr(x)
