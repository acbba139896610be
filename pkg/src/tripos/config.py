"""Enumeration bounds shared by all checkers."""

from dataclasses import dataclass, asdict, replace


class CapExceeded(Exception):
    """An enumeration would exceed its configured bound."""


@dataclass(frozen=True)
class Caps:
    max_powerset_base: int = 16
    # fiber cardinality above which fiber enumeration refuses
    max_fiber: int = 1 << 16
    # number of ground elements of a formula context's F-image
    max_context: int = 1 << 14

    def to_dict(self):
        return asdict(self)

    def override(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


DEFAULT_CAPS = Caps()
