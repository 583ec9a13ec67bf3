"""Command-line driver: generate graphs, build bundles and oracles, verify, benchmark.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
CSV goes to stdout (or --out); logs go to stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .baselines import run_baseline_folklore, run_baseline_random
from .bundles import (
    build_bundles,
    bundle_cost_bound,
    choose_r,
    format_bundle_dump,
    parse_bundle_dump,
    verify_bundles,
)
from .engine import cost_bound
from .generators import FAMILIES, GeneratorSpec, generate
from .graph import Graph, GraphFormatError, format_graph, make_constant_degree, read_graph
from .report import BenchRow, render_csv
from .snapshot import SnapshotError, load_oracle, save_oracle
from .tz import build_oracle, oracle_violations, query, stretch_violations

log = logging.getLogger("hitballs")

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _graph_id(path: str) -> str:
    return Path(path).stem


def _elapsed(t0: float, timing: bool):
    return round((time.perf_counter() - t0) * 1000, 3) if timing else ""


def _tz_bound(n: int, k: int) -> float:
    return (16 * k + 1) * n ** (1 + 1 / k)


# ---------------------------------------------------------------- runners

def bundle_row(g: Graph, graph_id: str, r: int | None, p: int, *, verify: bool,
               timing: bool = False, seed="") -> tuple[BenchRow, object]:
    t0 = time.perf_counter()
    h, _ = make_constant_degree(g)
    if h.n < 4 and r is None:
        r = 1
    r = choose_r(h.n, h.m) if r is None else r
    if not 1 <= r <= h.n:
        raise UsageError(f"--r must lie in [1, {h.n}] for the degree-3 graph, got {r}")
    bs = build_bundles(h, r, p)
    elapsed = _elapsed(t0, timing)
    power = sum(len(b) ** p for b in bs.balls)
    bound = cost_bound(h.n, h.n, r, p)
    within = power <= bound and len(bs.centers) <= r
    lead, tail = bs.sssp_cost_terms()
    log.info("%s: n=%d -> %d after degree split, |R|=%d, |R| log n + sum|B| = %.1f, sum |B| log|B| = %.1f",
             graph_id, g.n, h.n, len(bs.centers), lead, tail)
    xbound = bundle_cost_bound(h.n, r, p)
    if xbound is not None:
        log.info("%s: sum |B| log|B| bound %.1f (ratio %.3g)", graph_id, xbound, tail / xbound)
    if verify:
        verdict = verify_bundles(h, bs)
        text = "ok" if verdict.ok and within else "fail"
        if not verdict.ok:
            log.error("%s: bundle check failed: %s", graph_id, verdict)
    else:
        text = "unverified" if within else "fail"
    if not within:
        log.error("%s: engine bound exceeded (|R|=%d, r=%d, sum |B|^p=%d)", graph_id, len(bs.centers), r, power)
    row = BenchRow("sssp-bundles", graph_id, h.n, h.m, r, p, len(bs.centers), bs.total_size,
                   tail, float(bound), float(power / bound), text, elapsed, seed)
    return row, bs


def tz_row(g: Graph, graph_id: str, k: int, *, verify: bool, timing: bool = False,
           seed="") -> tuple[BenchRow, object]:
    t0 = time.perf_counter()
    o = build_oracle(g, k)
    elapsed = _elapsed(t0, timing)
    problems = oracle_violations(o)
    if verify:
        bad = stretch_violations(o)
        if bad:
            problems.append(f"{len(bad)} pairs violate stretch, first {bad[0]}")
    for msg in problems:
        log.error("%s: %s", graph_id, msg)
    bound = _tz_bound(g.n, k)
    text = "fail" if problems else ("ok" if verify else "unverified")
    row = BenchRow("tz-build", graph_id, g.n, g.m, k, 1, sum(len(a) for a in o.levels[1:]),
                   o.total_size, "", bound, o.total_size / bound, text, elapsed, seed)
    return row, o


def baseline_rows(g: Graph, graph_id: str, r: int, seed: int, timing: bool = False) -> list[BenchRow]:
    rows = []
    t0 = time.perf_counter()
    rnd = run_baseline_random(g, r, seed)
    rows.append(BenchRow("baseline-random", graph_id, g.n, g.m, r, "", len(rnd.centers),
                         rnd.total_size, rnd.xlogx_cost, "", "", "n/a", _elapsed(t0, timing), seed))
    t0 = time.perf_counter()
    fl = run_baseline_folklore(g, r)
    rows.append(BenchRow("baseline-folklore", graph_id, g.n, g.m, r, "", len(fl.centers),
                         fl.total_size, fl.xlogx_cost, "", "", "n/a", _elapsed(t0, timing), ""))
    return rows


# ---------------------------------------------------------------- commands

def cmd_gen(a) -> int:
    spec = GeneratorSpec(a.family, a.n, a.m, a.wmin, a.wmax, a.seed)
    g = generate(spec)
    log.info("generated %s with %d edges", spec.graph_id(), g.m)
    _emit(format_graph(g), a.out)
    return OK


def cmd_sssp_bundles(a) -> int:
    g = read_graph(a.graph)
    row, bs = bundle_row(g, _graph_id(a.graph), a.r, a.p, verify=a.verify, timing=a.timing)
    if a.dump:
        Path(a.dump).write_text(format_bundle_dump(bs))
    _emit(render_csv([row]), a.out)
    return FAILED if row.verify_verdict == "fail" else OK


def cmd_tz_build(a) -> int:
    g = read_graph(a.graph)
    row, o = tz_row(g, _graph_id(a.graph), a.k, verify=a.verify, timing=a.timing)
    save_oracle(a.out, o)
    _emit(render_csv([row]), a.csv)
    return FAILED if row.verify_verdict == "fail" else OK


def _read_pairs(spec: str, n: int) -> list[tuple[int, int]]:
    if spec == "all":
        return [(u, v) for u in range(n) for v in range(n)]
    pairs = []
    for lineno, line in enumerate(Path(spec).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(",", " ").split()
        try:
            u, v = int(parts[0]), int(parts[1])
        except (ValueError, IndexError):
            raise UsageError(f"{spec}:{lineno}: expected 'u v', got {line!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise UsageError(f"{spec}:{lineno}: vertex out of range [0, {n})")
        pairs.append((u, v))
    return pairs


def cmd_tz_query(a) -> int:
    o = load_oracle(a.oracle)
    pairs = _read_pairs(a.pairs, o.n)
    lines = ["u,v,estimate"]
    broken = 0
    for u, v in pairs:
        try:
            est = query(o, u, v)
        except RuntimeError as exc:
            log.error("%s", exc)
            broken += 1
            est = None
        lines.append(f"{u},{v},{'' if est is None else est}")
    _emit("\n".join(lines) + "\n", a.out)
    if broken:
        return FAILED
    if a.check_stretch:
        bad = stretch_violations(o, pairs)
        if bad:
            log.error("%d of %d pairs violate stretch %d, first %s", len(bad), len(pairs), 2 * o.k - 1, bad[0])
            return FAILED
        log.info("all %d pairs within stretch %d", len(pairs), 2 * o.k - 1)
    return OK


def cmd_verify(a) -> int:
    if (a.bundles is None) == (a.oracle is None):
        raise UsageError("verify needs exactly one of --bundles or --oracle")
    if a.bundles is not None:
        if a.graph is None:
            raise UsageError("--bundles needs --graph")
        g = read_graph(a.graph)
        h, _ = make_constant_degree(g)
        bs = parse_bundle_dump(Path(a.bundles).read_text())
        verdict = verify_bundles(h, bs)
        if not verdict.ok:
            log.error("bundle check failed: %s", verdict)
        row = BenchRow("verify", _graph_id(a.graph), h.n, h.m, "", "", len(bs.centers),
                       bs.total_size, bs.xlogx_cost, "", "", "ok" if verdict.ok else "fail")
    else:
        o = load_oracle(a.oracle)
        g = read_graph(a.graph) if a.graph else o.graph
        problems = oracle_violations(o)
        bad = stretch_violations(o, g=g)
        if bad:
            problems.append(f"{len(bad)} pairs violate stretch {2 * o.k - 1}, first {bad[0]}")
        for msg in problems:
            log.error("%s", msg)
        bound = _tz_bound(o.n, o.k)
        row = BenchRow("verify", _graph_id(a.oracle), o.n, g.m, o.k, 1, sum(len(x) for x in o.levels[1:]),
                       o.total_size, "", bound, o.total_size / bound, "fail" if problems else "ok")
    _emit(render_csv([row]), a.out)
    return OK if row.verify_verdict == "ok" else FAILED


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _bench_cell(cell, a) -> list[BenchRow]:
    family, n, seed = cell
    m = 2 * n if family.startswith("random") else None
    if m is not None:
        m = max(n - 1, min(m, n * (n - 1) // 2))
    spec = GeneratorSpec(family, n, m, a.wmin, a.wmax, seed)
    g = generate(spec)
    gid = spec.graph_id()
    row, bs = bundle_row(g, gid, None, a.p, verify=a.verify, timing=a.timing, seed=seed)
    rows = [row]
    h, _ = make_constant_degree(g)
    rows += baseline_rows(h, gid, bs.r, seed, a.timing)
    for k in a.ks:
        rows.append(tz_row(g, gid, k, verify=a.verify, timing=a.timing, seed=seed)[0])
    return rows


def cmd_bench(a) -> int:
    for fam in a.families:
        if fam not in FAMILIES:
            raise UsageError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    cells = [(f, n, s) for f in a.families for n in a.sizes for s in a.seeds]
    if a.jobs > 1:
        with ThreadPoolExecutor(max_workers=a.jobs) as pool:
            results = list(pool.map(lambda c: _bench_cell(c, a), cells))
    else:
        results = [_bench_cell(c, a) for c in cells]
    rows = [row for chunk in results for row in chunk]
    _emit(render_csv(rows), a.out)
    return FAILED if any(r.verify_verdict == "fail" for r in rows) else OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hitballs", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="count", default=0, help="more logging on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="write a seeded graph in edge-list format")
    s.add_argument("--family", required=True, choices=FAMILIES)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, help="edge count for random families")
    s.add_argument("--wmin", type=int, default=1)
    s.add_argument("--wmax", type=int, default=1)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("sssp-bundles", help="deterministic bundle construction on the degree-3 split graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--r", type=int, help="center budget (default m sqrt(loglog n / log n))")
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--verify", action="store_true", help="check every ball against a full Dijkstra")
    s.add_argument("--dump", help="write the bundle dump here")
    s.add_argument("--out")
    s.add_argument("--timing", action="store_true", help="fill elapsed_ms (output is then not reproducible)")
    s.set_defaults(func=cmd_sssp_bundles)

    s = sub.add_parser("tz-build", help="build a distance oracle snapshot")
    s.add_argument("--graph", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out", required=True, help="snapshot path")
    s.add_argument("--csv", help="CSV path (default stdout)")
    s.add_argument("--verify", action="store_true", help="also check stretch on all pairs")
    s.add_argument("--timing", action="store_true")
    s.set_defaults(func=cmd_tz_build)

    s = sub.add_parser("tz-query", help="answer distance queries from a snapshot")
    s.add_argument("--oracle", required=True)
    s.add_argument("--pairs", default="all", help="'all' or a file of 'u v' lines")
    s.add_argument("--check-stretch", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_tz_query)

    s = sub.add_parser("verify", help="check a bundle dump or an oracle snapshot")
    s.add_argument("--graph")
    s.add_argument("--bundles")
    s.add_argument("--oracle")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", help="bundles, baselines and oracles over a grid of generated graphs")
    s.add_argument("--families", type=lambda t: t.split(","), default=["path", "grid", "random-gnm"])
    s.add_argument("--sizes", type=_int_list, default=[64, 128])
    s.add_argument("--seeds", type=_int_list, default=[1, 2, 3])
    s.add_argument("--ks", type=_int_list, default=[2, 3])
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--wmin", type=int, default=1)
    s.add_argument("--wmax", type=int, default=10)
    s.add_argument("--jobs", type=int, default=1, help="worker threads, one cell each")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--timing", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(message)s",
                        level=logging.WARNING - 10 * min(a.verbose, 2))
    try:
        return a.func(a)
    except (UsageError, GraphFormatError, SnapshotError, FileNotFoundError, ValueError) as exc:
        log.error("%s", exc)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
