"""Law suite over every implicative algebra on small lattices.

Lattices are taken up to isomorphism; for each one, every implication table
and every separator is tried.  The table records, per algebra, whether the
fibers collapse to the pointwise order (``exact``) and how many law instances
were checked.
"""

import sys
import time
from dataclasses import asdict, dataclass

sys.path.insert(0, __import__("os").path.dirname(__file__))
from _config import parse_config, write_json  # noqa: E402

from tripos.core import ImplicativeTripos
from tripos.implicative import all_implicative_algebras
from tripos.lattice import all_lattices
from tripos.lawsuite import check_laws


@dataclass
class LawCensusConfig:
    max_algebra_size: int = 3
    index_size: int = 2
    out: str = "results/law_census.json"


def main(cfg: LawCensusConfig):
    rows = []
    t0 = time.perf_counter()
    for n in range(1, cfg.max_algebra_size + 1):
        for li, L in enumerate(all_lattices(n)):
            for alg in all_implicative_algebras(L):
                T = ImplicativeTripos(alg)
                v = check_laws(T, cfg.index_size)
                rows.append({
                    "size": n, "lattice": li, "imp": [list(r) for r in alg.structure.imp],
                    "separator": sorted(alg.separator.members), "exact": T.exact,
                    "status": v.status, "instances": sum(v.details["counts"].values()),
                    "witness": None if v.holds else str(v.witness),
                })
    wall = time.perf_counter() - t0
    by_size = {}
    for r in rows:
        s = by_size.setdefault(r["size"], {"algebras": 0, "exact": 0, "failing": 0})
        s["algebras"] += 1
        s["exact"] += r["exact"]
        s["failing"] += r["status"] != "holds-within-bounds"
    for n, s in sorted(by_size.items()):
        print(f"|A| = {n}: {s['algebras']} algebras, {s['exact']} exact, {s['failing']} failing")
    print(f"{len(rows)} algebras in {wall:.1f} s")
    write_json(cfg.out, {"config": asdict(cfg), "summary": by_size, "rows": rows, "wall_s": round(wall, 2)})


if __name__ == "__main__":
    main(parse_config(LawCensusConfig))
