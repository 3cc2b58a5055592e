"""Seeded trials and scaling studies with CSV / JSON-lines output."""

from __future__ import annotations

import csv
import io as _io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .embedder import PlacementParams, run_pipeline
from .errors import SaturationError, SpecError, ThickEmbedError
from .families import generate_family, parse_family_spec

SCHEMA_VERSION = 1


@dataclass
class TrialRecord:
    complex_id: str
    V: int
    k: Optional[int]
    n: int
    seed: int
    status: str = "ok"
    error: Optional[str] = None
    alpha0_final: Optional[float] = None
    t_subdiv: Optional[int] = None
    tau: Optional[float] = None
    R_pre: Optional[float] = None
    R_final: Optional[float] = None
    gg_thickness_pre: Optional[float] = None
    gg_thickness_post: Optional[float] = None
    min_link_thickness: Optional[float] = None
    max_crossing: Optional[int] = None
    per_color_max_crossing: Optional[list] = None
    wall_time: Optional[float] = field(default=None, compare=False)
    schema_version: int = SCHEMA_VERSION


# wall time varies between runs, so the CSV leaves it out and stays byte-stable
CSV_FIELDS = [f.name for f in fields(TrialRecord) if f.name != "wall_time"]


def run_trial(spec: str, n: int, seed: int, alpha0: float = 0.25, t_subdiv="auto",
              piece_length: float = 4.0, auto_alpha: bool = True, max_resample_rounds: int = 2000,
              **pipeline_kwargs) -> TrialRecord:
    """One pipeline run; library errors are captured in the record."""
    t0 = time.perf_counter()
    rec = TrialRecord(complex_id=spec, V=0, k=None, n=n, seed=seed)
    try:
        X, _ = generate_family(spec, seed)
        rec.V, rec.k = X.n_vertices, X.top_dim
        params = PlacementParams(ambient_dim=n, alpha0=alpha0, rng_seed=seed, auto_alpha=auto_alpha,
                                 max_resample_rounds=max_resample_rounds)
        res = run_pipeline(X, n, params, t_subdiv=t_subdiv, piece_length=piece_length, **pipeline_kwargs)
        rec.alpha0_final = res.params["alpha0_final"]
        rec.t_subdiv = res.params["t_subdiv"]
        rec.tau = res.params["tau"]
        rec.R_pre = res.radius_pre
        rec.R_final = res.radius_final
        rec.gg_thickness_pre = res.report_pre.gg_thickness
        rec.gg_thickness_post = res.report_post.gg_thickness
        rec.min_link_thickness = res.report_final.min_link_thickness
        if res.crossings is not None:
            rec.max_crossing = res.crossings.max_count
            rec.per_color_max_crossing = res.crossings.per_color_max
    except SaturationError as exc:
        rec.status, rec.error = "saturated", str(exc)
    except ThickEmbedError as exc:
        rec.status, rec.error = "failed", f"{type(exc).__name__}: {exc}"
    rec.wall_time = time.perf_counter() - t0
    return rec


def records_to_csv(records) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        row = []
        for name in CSV_FIELDS:
            v = getattr(r, name)
            if v is None:
                row.append("")
            elif isinstance(v, list):
                row.append(";".join(str(x) for x in v))
            elif isinstance(v, float):
                row.append(repr(v))
            else:
                row.append(str(v))
        w.writerow(row)
    return buf.getvalue()


def records_to_jsonl(records) -> str:
    return "".join(json.dumps(asdict(r), sort_keys=True) + "\n" for r in records)


def records_from_jsonl(text: str) -> list:
    return [TrialRecord(**json.loads(line)) for line in text.splitlines() if line.strip()]


@dataclass
class LinearFit:
    slope: Optional[float]
    intercept: Optional[float]
    r2: Optional[float]
    residuals: list = field(default_factory=list)


def linear_fit(x, y) -> LinearFit:
    """Least-squares line ``y = intercept + slope * x`` with R squared."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or np.unique(x).size < 2:
        return LinearFit(None, None, None)
    A = np.stack([np.ones_like(x), x], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(res**2)) / ss_tot if ss_tot > 0 else 1.0
    return LinearFit(float(coef[1]), float(coef[0]), r2, res.tolist())


class StudyAborted(ThickEmbedError, RuntimeError):
    def __init__(self, message, diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass
class ScalingStudy:
    spec: str
    n: int
    V_grid: list
    seeds: list
    records: list
    status: str
    radius_fit: LinearFit
    crossing_fit: LinearFit
    crossing_fit_medians: LinearFit
    median_R_final: dict
    median_max_crossing: dict
    failures: dict

    def summary(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION, "spec": self.spec, "n": self.n,
            "V_grid": self.V_grid, "seeds": self.seeds, "status": self.status,
            "radius_fit": asdict(self.radius_fit), "crossing_fit": asdict(self.crossing_fit),
            "crossing_fit_medians": asdict(self.crossing_fit_medians),
            "median_R_final": {str(k): v for k, v in self.median_R_final.items()},
            "median_max_crossing": {str(k): v for k, v in self.median_max_crossing.items()},
            "failures": {str(k): v for k, v in self.failures.items()},
        }

    @property
    def monotone_medians(self) -> bool:
        vals = [self.median_R_final[V] for V in sorted(self.median_R_final)]
        return all(b > a for a, b in zip(vals, vals[1:]))


def _job(args):
    spec, n, seed, kw = args
    return run_trial(spec, n, seed, **kw)


def run_scaling_study(spec: str, n: int, V_grid, seeds, out_dir=None, workers: int = 1,
                      **trial_kwargs) -> ScalingStudy:
    """Run every (V, seed) trial, persist the records and fit the scaling laws.

    ``spec`` is a family template with a ``{V}`` placeholder, for example
    ``"random-regular-graph({V},3)"``.  Failed trials are kept as records and
    left out of the fits.  More than half failing at any ``V`` aborts the
    study with :class:`StudyAborted` (records are still written).
    """
    V_grid = sorted(int(v) for v in V_grid)
    seeds = [int(s) for s in seeds]
    if not V_grid or not seeds:
        raise SpecError("a study needs at least one V and one seed")
    for V in V_grid:
        parse_family_spec(spec.format(V=V))
    generate_family(spec.format(V=V_grid[0]), seeds[0])  # bad arguments fail here, not per trial
    jobs = [(spec.format(V=V), n, s, trial_kwargs) for V in V_grid for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_job, jobs))  # map keeps submission order
    else:
        records = [_job(j) for j in jobs]
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "trials.csv").write_text(records_to_csv(records))
        (out / "trials.jsonl").write_text(records_to_jsonl(records))

    by_V = {}
    for V, rec in zip([V for V in V_grid for _ in seeds], records):
        by_V.setdefault(V, []).append(rec)
    failures = {V: sum(r.status != "ok" for r in rs) for V, rs in by_V.items()}
    bad = {V: f for V, f in failures.items() if f > len(seeds) / 2}
    if bad:
        diag = {V: [r.error for r in by_V[V] if r.status != "ok"][:5] for V in bad}
        raise StudyAborted(f"more than half of the trials failed at V={sorted(bad)}", diag)

    ok = [(V, r) for V, rs in by_V.items() for r in rs if r.status == "ok"]
    med_R = {V: float(np.median([r.R_final for r in rs if r.status == "ok"])) for V, rs in by_V.items()}
    med_c = {}
    for V, rs in by_V.items():
        cs = [r.max_crossing for r in rs if r.status == "ok" and r.max_crossing is not None]
        if cs:
            med_c[V] = float(np.median(cs))
    if len(V_grid) < 2:
        status = "insufficient grid"
        rfit = cfit = cfit_med = LinearFit(None, None, None)
    else:
        status = "ok"
        rfit = linear_fit([math.log(V) for V, _ in ok], [math.log(r.R_final) for _, r in ok])
        pts = [(math.log(V), r.max_crossing) for V, r in ok if r.max_crossing is not None]
        cfit = linear_fit([p[0] for p in pts], [p[1] for p in pts])
        cfit_med = linear_fit([math.log(V) for V in sorted(med_c)], [med_c[V] for V in sorted(med_c)])
    study = ScalingStudy(spec, n, V_grid, seeds, records, status, rfit, cfit, cfit_med,
                         med_R, med_c, failures)
    if out_dir is not None:
        (Path(out_dir) / "study.json").write_text(json.dumps(study.summary(), sort_keys=True, indent=1) + "\n")
    return study
