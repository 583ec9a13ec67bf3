"""CSV rows shared by every CLI subcommand."""
from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields


@dataclass
class BenchRow:
    command: str
    graph_id: str
    n: int
    m: int
    k_or_r: int
    p: int | str = ""
    centers_used: int | str = ""
    sum_ball_size: int | str = ""
    sum_xlogx_cost: float | str = ""
    bound_value: float | str = ""
    bound_slack_ratio: float | str = ""
    verify_verdict: str = ""
    elapsed_ms: float | str = ""
    seed: int | str = ""


FIELDS = tuple(f.name for f in fields(BenchRow))


def _cell(x) -> str:
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def render_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for row in rows:
        w.writerow([_cell(x) for x in astuple(row)])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
