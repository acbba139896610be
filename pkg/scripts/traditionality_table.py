"""Bounded search for generic families across tripos flavors.

A ``none-found`` entry is bounded evidence only: no family over the listed
sigma sizes classifies every predicate over index sets up to ``i_max``.
"""

import sys
import time
from dataclasses import asdict, dataclass

sys.path.insert(0, __import__("os").path.dirname(__file__))
from _config import parse_config, write_json  # noqa: E402

from tripos.config import CapExceeded
from tripos.core import ImplicativeTripos, PowerTripos
from tripos.implicative import from_heyting
from tripos.lattice import chain, diamond
from tripos.laws import find_generic_family, is_weakly_generic


@dataclass
class TraditionalityConfig:
    powers: tuple[int, ...] = (1, 2, 3)
    sigma_max: int = 4
    i_max: int = 3
    implicative_i_max: int = 2
    out: str = "results/traditionality.json"


def flavors(cfg):
    for n in cfg.powers:
        yield f"power:{n}", PowerTripos(n), cfg.i_max
    yield "implicative:chain3", ImplicativeTripos(from_heyting(chain(3))), cfg.implicative_i_max
    yield "implicative:bool4", ImplicativeTripos(from_heyting(diamond())), cfg.implicative_i_max


def main(cfg: TraditionalityConfig):
    rows = []
    for name, T, i_max in flavors(cfg):
        t0 = time.perf_counter()
        v = find_generic_family(T, range(0, cfg.sigma_max + 1), i_max)
        row = {"flavor": name, "i_max": i_max, "status": v.status, "summary": v.summary,
               "log": v.details.get("log")}
        if v.holds:
            g = v.witness
            row["sigma"] = g.sigma.size
            row["t"] = g.t.payload if isinstance(g.t.payload, int) else list(g.t.payload)
            try:
                row["weakly_generic"] = is_weakly_generic(T, g, min(i_max, 2)).status
            except CapExceeded as exc:
                row["weakly_generic"] = f"cap: {exc}"
        row["wall_s"] = round(time.perf_counter() - t0, 2)
        rows.append(row)
        print(f"{name:20s} {v.status:20s} {row.get('sigma', '-')!s:>3}  {row['wall_s']:7.2f} s  {v.summary}")
    write_json(cfg.out, {"config": asdict(cfg), "rows": rows})


if __name__ == "__main__":
    main(parse_config(TraditionalityConfig))
