"""Cross-section sweeps over ka or mu0, with CSV/JSON output."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .partial_wave import (
    ScatteringPoint,
    Statistics,
    TruncationError,
    TruncationPolicy,
    total_cross_section,
)

CSV_FIELDS = ("ka", "mu0", "statistics", "sigma_over_a", "sigma_over_4a", "m_used", "tail_bound", "flags")

FLAG_TRUNCATION = "truncation_failure"
FLAG_TAIL = "tail_above_tol"
POISON_FLAGS = frozenset({FLAG_TRUNCATION, "evaluation_error"})


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class SweepGrid:
    """One swept axis; the other of (ka, mu0) is held at ``ka`` or ``mu0``."""

    axis: str
    start: float
    stop: float
    points: int
    spacing: str = "linear"
    ka: float | None = None
    mu0: float | None = None
    statistics: Statistics = Statistics.DISTINGUISHABLE
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        if self.axis not in ("ka", "mu0"):
            raise GridError(f"axis must be 'ka' or 'mu0', got {self.axis!r}")
        if self.spacing not in ("linear", "log"):
            raise GridError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if int(self.points) < 2:
            raise GridError("a sweep needs at least 2 points")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or not self.start < self.stop:
            raise GridError(f"need finite start < stop, got {self.start!r} .. {self.stop!r}")
        if self.spacing == "log" and self.start <= 0.0:
            raise GridError("log spacing requires start > 0")
        if self.axis == "ka":
            if self.start <= 0.0:
                raise GridError("ka must stay positive")
            if self.mu0 is None:
                raise GridError("a ka sweep needs a fixed mu0")
        elif self.ka is None or not self.ka > 0.0:
            raise GridError("a mu0 sweep needs a fixed positive ka")
        object.__setattr__(self, "statistics", Statistics(self.statistics))

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, int(self.points))
        return np.linspace(self.start, self.stop, int(self.points))

    def coordinates(self) -> list[tuple[float, float]]:
        if self.axis == "ka":
            return [(float(v), float(self.mu0)) for v in self.values()]
        return [(float(self.ka), float(v)) for v in self.values()]


@dataclass(frozen=True)
class SweepRow:
    ka: float
    mu0: float
    statistics: str
    sigma_over_a: float
    sigma_over_4a: float
    m_used: int
    tail_bound: float
    flags: tuple = ()

    @property
    def poisoned(self) -> bool:
        return any(f in POISON_FLAGS for f in self.flags)


def evaluate_point(ka: float, mu0: float, statistics=Statistics.DISTINGUISHABLE,
                   truncation: TruncationPolicy | None = None) -> SweepRow:
    """Single grid point; failures become a flagged row instead of an exception."""
    truncation = truncation or TruncationPolicy()
    stats = Statistics(statistics)
    try:
        res = total_cross_section(ScatteringPoint(ka, mu0, stats, truncation))
    except TruncationError:
        return SweepRow(ka, mu0, stats.value, math.nan, math.nan, 0, math.inf, (FLAG_TRUNCATION,))
    except (ArithmeticError, ValueError):
        return SweepRow(ka, mu0, stats.value, math.nan, math.nan, 0, math.inf, ("evaluation_error",))
    flags = (FLAG_TAIL,) if res.tail_bound > truncation.tail_tol else ()
    return SweepRow(ka, mu0, stats.value, res.sigma_t, res.normalized, res.m_used, res.tail_bound, flags)


def _evaluate(args):
    return evaluate_point(*args)


def run_sweep(grid: SweepGrid, workers: int = 1) -> list[SweepRow]:
    """Rows in grid order.  Points are independent, so workers > 1 only changes wall time."""
    jobs = [(ka, mu0, grid.statistics, grid.truncation) for ka, mu0 in grid.coordinates()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_evaluate(j) for j in jobs]


def run_sweeps(grids, workers: int = 1) -> list[SweepRow]:
    rows: list[SweepRow] = []
    for g in grids:
        rows.extend(run_sweep(g, workers))
    return rows


# ---------------------------------------------------------------------------
# presets

PRESET_MU0 = (0.0, 0.1, 0.25, 0.5, 0.75, 1.0)
PRESET_KA = (0.1, 0.3, 0.5)
PRESET_STATS = {
    "fig1": Statistics.DISTINGUISHABLE, "fig2": Statistics.DISTINGUISHABLE,
    "fig3": Statistics.BOSON, "fig4": Statistics.BOSON,
    "fig5": Statistics.FERMION, "fig6": Statistics.FERMION,
}
PRESETS = tuple(PRESET_STATS)


def preset_grids(name: str, truncation: TruncationPolicy | None = None,
                 ka_points: int = 200, mu0_points: int = 241) -> list[SweepGrid]:
    """fig1/3/5: log ka sweeps on [0.01, 20] at several mu0.
    fig2/4/6: linear mu0 sweeps on [-3, 3] at ka in {0.1, 0.3, 0.5}.
    The default 241 mu0 points put every integer and half-integer on the grid.
    """
    if name not in PRESET_STATS:
        raise GridError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    truncation = truncation or TruncationPolicy()
    stats = PRESET_STATS[name]
    if name in ("fig1", "fig3", "fig5"):
        return [SweepGrid("ka", 0.01, 20.0, ka_points, "log", mu0=mu0, statistics=stats,
                          truncation=truncation) for mu0 in PRESET_MU0]
    return [SweepGrid("mu0", -3.0, 3.0, mu0_points, "linear", ka=ka, statistics=stats,
                      truncation=truncation) for ka in PRESET_KA]


# ---------------------------------------------------------------------------
# output


def format_number(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".15e")


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([format_number(r.ka), format_number(r.mu0), r.statistics, format_number(r.sigma_over_a),
                    format_number(r.sigma_over_4a), str(r.m_used), format_number(r.tail_bound), ";".join(r.flags)])
    return buf.getvalue()


def _json_num(x: float):
    return x if math.isfinite(x) else None


def row_to_dict(r: SweepRow) -> dict:
    return {
        "ka": r.ka,
        "mu0": r.mu0,
        "statistics": r.statistics,
        "sigma_over_a": _json_num(r.sigma_over_a),
        "sigma_over_4a": _json_num(r.sigma_over_4a),
        "m_used": r.m_used,
        "tail_bound": _json_num(r.tail_bound),
        "flags": ";".join(r.flags),
    }


def rows_to_json(rows) -> str:
    return json.dumps([row_to_dict(r) for r in rows], indent=1) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory and rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
