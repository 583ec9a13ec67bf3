"""Compare deterministic bundle centers with the two classical baselines.

For each seeded graph this reports centers used and ball cost for the engine,
uniform random sampling and greedy set cover on fixed balls, then a mean per
(family, method) over the seeds.

    python scripts/compare_baselines.py --family path --n 256 --seeds 20
"""
import argparse
import statistics
import sys
from collections import defaultdict

from hitballs.baselines import run_baseline_folklore, run_baseline_random
from hitballs.bundles import build_bundles, choose_r
from hitballs.generators import GeneratorSpec, generate
from hitballs.graph import make_constant_degree


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", action="append", help="repeatable; default path and random-gnm")
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--r", type=int, help="center budget (default from choose_r)")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--p", type=int, default=2)
    a = ap.parse_args(argv)

    summary = defaultdict(list)
    print("family,seed,method,r,centers,total_size,mean_size,xlogx_cost")
    for family in a.family or ["path", "random-gnm"]:
        for seed in range(a.seeds):
            m = 2 * a.n if family.startswith("random") else None
            g = generate(GeneratorSpec(family, a.n, m, 1, 10, seed))
            h, _ = make_constant_degree(g)
            r = a.r or choose_r(h.n, h.m)
            bs = build_bundles(h, r, a.p)
            sizes = [len(b) for b in bs.balls]
            rows = [
                ("engine", len(bs.centers), sum(sizes), sum(sizes) / len(sizes), bs.xlogx_cost),
            ]
            for st in (run_baseline_random(h, r, seed), run_baseline_folklore(h, r)):
                rows.append((st.method, len(st.centers), st.total_size, st.mean_size, st.xlogx_cost))
            for method, centers, total, mean, xl in rows:
                print(f"{family},{seed},{method},{r},{centers},{total},{mean:.3f},{xl:.3f}")
                summary[family, method].append((centers, mean))

    print("\n# means over seeds", file=sys.stderr)
    for (family, method), vals in sorted(summary.items()):
        c = statistics.mean(v[0] for v in vals)
        s = statistics.mean(v[1] for v in vals)
        print(f"# {family:12s} {method:9s} centers {c:8.2f}  mean ball {s:8.2f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
