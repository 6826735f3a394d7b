"""Lifetime sweeps over the dimensionless well depth and their serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import LifetimeError
from .moments import lifetime
from .quadcore import FDConfig, QuadratureConfig
from .spectral import PotentialSpec

__all__ = ["SweepRow", "RunManifest", "CSV_COLUMNS", "sweep_grid", "compute_row", "run_sweep", "to_csv", "to_json", "to_svg"]

CSV_COLUMNS = ("v0a2", "e_mean", "tau_bar", "t2_mean", "t_bar", "deficit", "bound_state", "num", "den", "tail_flag", "status")


@dataclass
class SweepRow:
    v0a2: float
    e_mean: float
    tau_bar: float = math.nan
    t2_mean: float = math.nan
    t_bar: float = math.nan
    deficit: float = math.nan
    bound_state: bool = False
    num: float = math.nan
    den: float = math.nan
    tail_flag: bool = False
    status: str = "ok"
    num_error: float = math.nan
    den_error: float = math.nan
    fd_error: float = math.nan
    wall_time: float = 0.0

    def record(self) -> dict:
        return {c: getattr(self, c) for c in CSV_COLUMNS}


@dataclass
class RunManifest:
    a: float
    v0a2_values: list[float]
    quadrature: dict
    fd: dict
    extra: dict = field(default_factory=dict)
    version: str = __version__
    timestamp: str = ""

    def __post_init__(self):
        if not self.timestamp:
            epoch = os.environ.get("SOURCE_DATE_EPOCH")
            when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
            self.timestamp = when.isoformat(timespec="seconds")


def sweep_grid(lo: float = -12.0, hi: float = 0.0, step: float = 0.25) -> list[float]:
    """Inclusive grid ``lo, lo+step, ..., hi`` (values rounded to kill float drift)."""
    if not step > 0 or not hi >= lo:
        raise ValueError("need step > 0 and hi >= lo")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 12) for i in range(n + 1)]


def compute_row(v0a2: float, a: float = 1.0, cfg: QuadratureConfig = QuadratureConfig(), fd: FDConfig = FDConfig()) -> SweepRow:
    """One sweep point; numerical failures are recorded in ``status``."""
    spec = PotentialSpec.from_v0a2(v0a2, a)
    start = time.perf_counter()
    row = SweepRow(v0a2=v0a2, e_mean=math.pi**2 / 2 + v0a2)
    try:
        res = lifetime(spec, cfg, fd)
    except LifetimeError as exc:
        row.status = f"{type(exc).__name__}: {exc}".replace("\n", " ")
    else:
        row.tau_bar = res.tau_bar
        row.t2_mean = res.t2_mean
        row.t_bar = res.t_bar
        row.deficit = res.deficit
        row.bound_state = res.bound_state
        row.num = res.numerator
        row.den = res.denominator
        row.tail_flag = res.tail_flag
        row.num_error = res.num_error
        row.den_error = res.den_error
        row.fd_error = res.fd_error
    row.wall_time = time.perf_counter() - start
    return row


def _row_job(args):
    return compute_row(*args)


def run_sweep(
    values: list[float],
    a: float = 1.0,
    cfg: QuadratureConfig = QuadratureConfig(),
    fd: FDConfig = FDConfig(),
    workers: int = 1,
) -> list[SweepRow]:
    """Evaluate every grid point independently; rows come back ordered by ``v0a2``."""
    values = sorted(values)
    jobs = [(v, a, cfg, fd) for v in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_row_job, jobs))
    return [_row_job(j) for j in jobs]


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(v) for v in r.record().values()])
    return buf.getvalue()


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def to_json(rows: list[SweepRow], manifest: RunManifest) -> str:
    payload = {
        "manifest": asdict(manifest),
        "rows": [{k: _json_safe(v) for k, v in r.record().items()} for r in rows],
    }
    return json.dumps(payload, indent=2, sort_keys=False)


def to_svg(rows: list[SweepRow], width: int = 640, height: int = 400) -> str:
    """Line chart of ``tau_bar`` (log scale) against ``e_mean`` with the bound-state onset marked."""
    good = [r for r in rows if r.status == "ok" and r.tau_bar > 0]
    if not good:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"/>'
    e = np.array([r.e_mean for r in good])
    y = np.log10([r.tau_bar for r in good])
    pad = 50
    ex = (e.min(), e.max() if e.max() > e.min() else e.min() + 1)
    yx = (y.min(), y.max() if y.max() > y.min() else y.min() + 1)

    def sx(v):
        return pad + (v - ex[0]) / (ex[1] - ex[0]) * (width - 2 * pad)

    def sy(v):
        return height - pad - (v - yx[0]) / (yx[1] - yx[0]) * (height - 2 * pad)

    pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(e, y))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<polyline fill="none" stroke="black" stroke-width="1.5" points="{pts}"/>',
    ]
    for a_, b_ in zip(e, y):
        parts.append(f'<circle cx="{sx(a_):.2f}" cy="{sy(b_):.2f}" r="2.5" fill="black"/>')
    bound = [r for r in good if r.bound_state]
    if bound:
        onset = max(bound, key=lambda r: r.v0a2)
        x0 = sx(onset.e_mean)
        parts.append(f'<line x1="{x0:.2f}" y1="{pad}" x2="{x0:.2f}" y2="{height - pad}" stroke="red" stroke-dasharray="4,3"/>')
    parts.append(f'<text x="{width / 2:.0f}" y="{height - 12}" text-anchor="middle" font-size="12">mean energy / barrier height</text>')
    parts.append(f'<text x="14" y="{height / 2:.0f}" font-size="12" transform="rotate(-90 14 {height / 2:.0f})" text-anchor="middle">log10 tau_bar</text>')
    parts.append("</svg>")
    return "\n".join(parts)
