"""Seeded Monte Carlo sweeps over (n, k, lambda) and their outputs.

Every trial draws its own generator from ``trial_seed(master, grid, trial)``
so results do not depend on how trials are spread over worker processes;
aggregation always walks trials in index order.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .branching import core_fraction_prediction
from .graph_core import array_to_set
from .oracle import DEFAULT_CAP_FACTOR, DEFAULT_CAP_MATCHING, enumerate_k_factors, overlap_histogram
from .planted import ModelParams, plant, trial_rng, trial_seed
from .pruning import array_risk, core_planted_fraction, degree_estimator_edges, iterative_prune

MODES = ("core_fraction", "recovery", "exact", "posterior_toy")
WORKERS_ENV = "KFACTOR_WORKERS"


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    w = int(raw)
    if w < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer")
    return w


def oracle_cap(k: int) -> int:
    return DEFAULT_CAP_MATCHING if k == 1 else DEFAULT_CAP_FACTOR


@dataclass(frozen=True)
class SweepConfig:
    grid: tuple  # of (n, k, lam)
    trials: int
    master_seed: int = 0
    workers: int = 1
    out: str | None = None
    mode: str = "core_fraction"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.grid:
            raise ValueError("grid must be nonempty")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        grid = tuple((int(n), int(k), float(lam)) for n, k, lam in self.grid)
        for n, k, lam in grid:
            ModelParams(n, k, lam)
            if self.mode == "posterior_toy" and n > oracle_cap(k):
                raise ValueError(f"posterior_toy needs n <= {oracle_cap(k)} for k={k}")
        object.__setattr__(self, "grid", grid)

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        grid = [(p["n"], p["k"], p["lambda"] if "lambda" in p else p["lam"]) if isinstance(p, dict) else tuple(p) for p in d["grid"]]
        workers = d.get("workers")
        return cls(
            grid=tuple(grid),
            trials=int(d["trials"]),
            master_seed=int(d.get("master_seed", d.get("seed", 0))),
            workers=default_workers() if workers is None else int(workers),
            out=d.get("out"),
            mode=d.get("mode", "core_fraction"),
        )

    @classmethod
    def load(cls, path) -> "SweepConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class TrialRecord:
    grid_index: int
    n: int
    k: int
    lam: float
    trial: int
    seed: int  # first 64-bit word of the trial's SeedSequence state
    ok: bool = True
    error: str = ""
    core_fraction: float = math.nan
    pruning_error: float = math.nan
    degree_error: float = math.nan
    core_empty: bool = False
    recovered: bool = False  # identified planted set equals H*
    catalog_size: int = -1  # -1 when the oracle was not run
    distance_mass: dict = field(default_factory=dict)  # t -> share of k-factors at distance 2t
    wall_time: float = 0.0

    def check_ranges(self) -> None:
        if not self.ok:
            return
        if not 0 <= self.core_fraction <= 1:
            raise AssertionError(f"core fraction {self.core_fraction} outside [0, 1]")
        for v in (self.pruning_error, self.degree_error):
            if not 0 <= v <= 2:
                raise AssertionError(f"error {v} outside [0, 2]")


def derived_seed(master: int, grid_index: int, trial: int) -> int:
    return int(trial_seed(master, grid_index, trial).generate_state(1, np.uint64)[0])


def run_trial(mode: str, master: int, grid_index: int, n: int, k: int, lam: float, trial: int) -> TrialRecord:
    """One planted instance through pruning and the degree estimator.

    Exceptions are captured into a failure record, never raised.
    """
    rec = TrialRecord(grid_index, n, k, lam, trial, derived_seed(master, grid_index, trial))
    t0 = time.perf_counter()
    try:
        rng = trial_rng(master, grid_index, trial)
        g, h_star = plant(ModelParams(n, k, lam), rng)
        out = iterative_prune(g, k)
        rec.core_fraction = float(core_planted_fraction(out, h_star))
        found = out.edges[out.status == 1]
        rec.pruning_error = float(array_risk(h_star, found, n))
        rec.degree_error = float(array_risk(h_star, degree_estimator_edges(g, k), n))
        rec.core_empty = out.core_is_empty
        rec.recovered = rec.pruning_error == 0.0
        if mode in ("exact", "posterior_toy") and n <= oracle_cap(k):
            catalog = enumerate_k_factors(g, k)
            rec.catalog_size = len(catalog)
            if mode == "posterior_toy":
                hist = overlap_histogram(catalog, array_to_set(h_star))
                rec.distance_mass = {t: float(f) for t, f in hist.normalized_distance().items()}
        rec.check_ranges()
    except Exception as exc:  # isolate any per-trial failure
        rec.ok = False
        rec.error = f"{type(exc).__name__}: {exc}"
        rec.error += " | " + traceback.format_exc(limit=1).strip().splitlines()[-1]
    rec.wall_time = time.perf_counter() - t0
    return rec


def _task(args) -> TrialRecord:
    return run_trial(*args)


@dataclass
class SweepResult:
    config: SweepConfig
    records: list  # TrialRecord, ordered by (grid_index, trial)
    table: list  # one dict per grid point, see TABLE_COLUMNS

    @property
    def failures(self) -> int:
        return sum(not r.ok for r in self.records)

    @property
    def all_ok(self) -> bool:
        return self.failures == 0


TABLE_COLUMNS = (
    "n",
    "k",
    "lambda",
    "trials",
    "failures",
    "core_fraction_mean",
    "core_fraction_stderr",
    "theory_core_fraction",
    "pruning_error_mean",
    "pruning_error_stderr",
    "degree_error_mean",
    "degree_error_stderr",
    "empty_core_rate",
    "recovered_rate",
    "unique_factor_rate",
    "exact_violations",
)
INT_COLUMNS = frozenset({"n", "k", "trials", "failures", "exact_violations"})


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def _mean_stderr(xs: list[float]) -> tuple[float, float]:
    if not xs:
        return math.nan, math.nan
    a = np.asarray(xs, dtype=np.float64)
    if len(a) < 2:
        return float(a.mean()), math.nan
    return float(a.mean()), float(a.std(ddof=1) / math.sqrt(len(a)))


def aggregate(grid_index: int, n: int, k: int, lam: float, records: list) -> dict:
    """Per-point row.  Failed trials are counted, not averaged."""
    good = [r for r in records if r.ok]
    row: dict = {"n": n, "k": k, "lambda": lam, "trials": len(records), "failures": len(records) - len(good)}
    for name in ("core_fraction", "pruning_error", "degree_error"):
        m, s = _mean_stderr([getattr(r, name) for r in good])
        row[f"{name}_mean"], row[f"{name}_stderr"] = m, s
    row["theory_core_fraction"] = core_fraction_prediction(lam, k)
    row["empty_core_rate"] = _mean_stderr([float(r.core_empty) for r in good])[0]
    row["recovered_rate"] = _mean_stderr([float(r.recovered) for r in good])[0]
    oracle = [r for r in good if r.catalog_size >= 0]
    row["unique_factor_rate"] = _mean_stderr([float(r.catalog_size == 1) for r in oracle])[0]
    # empty core must imply pruning returned H*, and (oracle) H* is the only factor
    row["exact_violations"] = sum(r.core_empty and (not r.recovered or r.catalog_size > 1) for r in good)
    return {c: (row[c] if c in INT_COLUMNS else _sig12(row[c])) for c in TABLE_COLUMNS}


def run_sweep(config: SweepConfig) -> SweepResult:
    tasks = [
        (config.mode, config.master_seed, gi, n, k, lam, t)
        for gi, (n, k, lam) in enumerate(config.grid)
        for t in range(config.trials)
    ]
    if config.workers == 1:
        records = [_task(a) for a in tasks]
    else:
        chunk = max(1, len(tasks) // (8 * config.workers))
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_task, tasks, chunksize=chunk))
    records.sort(key=lambda r: (r.grid_index, r.trial))
    table = []
    for gi, (n, k, lam) in enumerate(config.grid):
        table.append(aggregate(gi, n, k, lam, [r for r in records if r.grid_index == gi]))
    return SweepResult(config, records, table)


def exact_recovery_rate(config: SweepConfig) -> list[dict]:
    """Empty-core frequency per grid point, plus the oracle cross-check
    (unique k-factor frequency and implication violations) when n is small."""
    cfg = SweepConfig(config.grid, config.trials, config.master_seed, config.workers, config.out, "exact")
    res = run_sweep(cfg)
    keys = ("n", "k", "lambda", "trials", "failures", "empty_core_rate", "unique_factor_rate", "exact_violations")
    return [{c: row[c] for c in keys} for row in res.table]


def posterior_toy_sweep(config: SweepConfig) -> list[dict]:
    """Average normalized distance histogram of the posterior for each grid
    point (n must be within the oracle cap).  ``mass[t]`` is the average
    share of k-factors H of G with ``|H ^ H*| = 2t``."""
    cfg = SweepConfig(config.grid, config.trials, config.master_seed, config.workers, config.out, "posterior_toy")
    res = run_sweep(cfg)
    failed = [r for r in res.records if not r.ok]
    if failed:
        raise RuntimeError(f"{len(failed)} oracle trials failed, first: {failed[0].error}")
    out = []
    for gi, (n, k, lam) in enumerate(cfg.grid):
        recs = [r for r in res.records if r.grid_index == gi]
        tmax = max(max(r.distance_mass) for r in recs)
        mass = {t: sum(r.distance_mass.get(t, 0.0) for r in recs) / len(recs) for t in range(tmax + 1)}
        out.append({"n": n, "k": k, "lambda": lam, "trials": len(recs), "mass": mass})
    return out


# ---------------------------------------------------------------------------
# outputs


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return f"{float(v):.12g}"


def table_to_csv(table: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for row in table:
        w.writerow([_fmt(row[c]) for c in TABLE_COLUMNS])
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != TABLE_COLUMNS:
        raise ValueError("unexpected CSV header")
    return [{c: (int(v) if c in INT_COLUMNS else float(v)) for c, v in zip(TABLE_COLUMNS, r)} for r in rows[1:]]


def table_to_json(table: list[dict]) -> str:
    def clean(v):
        return None if isinstance(v, float) and math.isnan(v) else v

    return json.dumps([{c: clean(row[c]) for c in TABLE_COLUMNS} for row in table], indent=2)


PLOT_METRICS = (
    ("core_fraction_mean", "core_fraction_stderr", "#1f77b4"),
    ("theory_core_fraction", None, "#d62728"),
    ("pruning_error_mean", "pruning_error_stderr", "#2ca02c"),
    ("degree_error_mean", "degree_error_stderr", "#9467bd"),
)


def table_to_svg(table: list[dict], width: int = 640, height: int = 420) -> str:
    """Line plot against lambda: one polyline per metric and per k, with
    vertical error bars of one standard error."""
    pad = 50
    lams = [row["lambda"] for row in table]
    x_lo, x_hi = min(lams), max(lams)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    y_hi = 2.0 if any(row["pruning_error_mean"] > 1 or row["degree_error_mean"] > 1 for row in table) else 1.0

    def sx(x):
        return pad + (x - x_lo) / (x_hi - x_lo) * (width - 2 * pad)

    def sy(y):
        return height - pad - y / y_hi * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">lambda</text>',
        f'<text x="{pad - 8}" y="{sy(y_hi):.1f}" text-anchor="end" font-size="10">{y_hi:g}</text>',
        f'<text x="{pad - 8}" y="{sy(0):.1f}" text-anchor="end" font-size="10">0</text>',
    ]
    dashes = ["", ' stroke-dasharray="6 3"', ' stroke-dasharray="2 2"', ' stroke-dasharray="8 2 2 2"']
    for ki, k in enumerate(sorted({row["k"] for row in table})):
        rows = sorted((r for r in table if r["k"] == k), key=lambda r: (r["lambda"], r["n"]))
        for metric, err, color in PLOT_METRICS:
            pts = [(r["lambda"], r[metric], r[err] if err else math.nan) for r in rows if not math.isnan(r[metric])]
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y, _ in pts)
            parts.append(
                f'<polyline data-metric="{metric}" data-k="{k}" points="{coords}" fill="none" '
                f'stroke="{color}"{dashes[ki % len(dashes)]}/>'
            )
            for x, y, s in pts:
                if not math.isnan(s) and s > 0:
                    parts.append(
                        f'<line class="errorbar" x1="{sx(x):.2f}" y1="{sy(y - s):.2f}" '
                        f'x2="{sx(x):.2f}" y2="{sy(y + s):.2f}" stroke="{color}"/>'
                    )
    for i, (metric, _, color) in enumerate(PLOT_METRICS):
        parts.append(f'<text x="{width - pad}" y="{pad + 14 * i}" text-anchor="end" font-size="10" fill="{color}">{metric}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_outputs(table: list[dict], out_dir, formats=("csv",), stem: str = "sweep") -> list[Path]:
    """Write the table as ``stem.csv`` / ``stem.json`` / ``stem.svg``."""
    if not table:
        raise ValueError("cannot emit an empty table")
    writers = {"csv": table_to_csv, "json": table_to_json, "svg": table_to_svg}
    bad = [f for f in formats if f not in writers]
    if bad:
        raise ValueError(f"unknown formats {bad}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for f in formats:
        p = out / f"{stem}.{f}"
        p.write_text(writers[f](table))
        paths.append(p)
    return paths


def records_to_json(records: list[TrialRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=1, default=float)
