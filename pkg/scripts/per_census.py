"""Objects and morphisms of the PER category, per flavor and index bound."""

import sys
import time
from dataclasses import asdict, dataclass

sys.path.insert(0, __import__("os").path.dirname(__file__))
from _config import parse_config, write_json  # noqa: E402

from tripos.cli import make_tripos
from tripos.config import DEFAULT_CAPS
from tripos.topos import all_funrels, pers_up_to


@dataclass
class PerCensusConfig:
    flavors: tuple[str, ...] = ("identity", "implicative:bool2", "implicative:chain3", "power:2")
    max_index: int = 2
    # under power:N with N >= 2 the fiber over 2 x 2 has 2^16 members, so those stop earlier
    power_max_index: int = 1
    out: str = "results/per_census.json"


def main(cfg: PerCensusConfig):
    rows = []
    for flavor in cfg.flavors:
        k = cfg.power_max_index if flavor.startswith("power:") else cfg.max_index
        T = make_tripos(flavor, DEFAULT_CAPS)
        t0 = time.perf_counter()
        objs = pers_up_to(T, k)
        per_index = {}
        for X in objs:
            per_index[X.index.size] = per_index.get(X.index.size, 0) + 1
        morphisms = sum(len(all_funrels(T, X, Y)) for X in objs for Y in objs)
        wall = time.perf_counter() - t0
        rows.append({"flavor": flavor, "max_index": k, "pers": len(objs), "pers_by_index": per_index,
                     "morphisms": morphisms, "wall_s": round(wall, 2)})
        print(f"{flavor:20s} index <= {k}: {len(objs):4d} PERs {per_index}, {morphisms:6d} morphisms ({wall:.1f} s)", flush=True)
    write_json(cfg.out, {"config": asdict(cfg), "rows": rows})


if __name__ == "__main__":
    main(parse_config(PerCensusConfig))
