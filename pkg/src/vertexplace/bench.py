"""Benchmark grid over topology family x size x parameter x algorithm x seed.

Each cell generates one topology, times the solver call alone, and scores the
returned cover. Results go to CSV and to per-family SVG line plots (median
over seeds against vertex count).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import statistics
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from . import gnosis
from .netmodel import simulate_distribution
from .objective import DEFAULT_IMAGE_MB, CoverSolution, cost_function
from .solvers import DEGREE, GaConfig, approx_cover, genetic_cover, greedy_cover
from .topology import TopologySpec, generate, parse_param_label

log = logging.getLogger(__name__)

ALGORITHMS = ("approx", "greedy", "genetic", "gnosis")
METRICS = {"ext_s": "Execution time (s)", "cf": "Cost function", "vcs": "Vertex cover size"}
CSV_COLUMNS = ["family", "n", "param", "algorithm", "seed", "ext_s", "cf", "vcs", "edges"]

DEFAULT_FAMILIES = {
    "er": [{"p": 0.2}, {"p": 0.5}, {"p": 0.7}],
    "sw": [{"k": 2, "p": 0.5}, {"k": 4, "p": 0.5}, {"k": 7, "p": 0.5}],
    "ba": [{"m": 1}, {"m": 3}, {"m": 8}],
}
DEFAULT_SIZES = [64, 128, 256, 512]


@dataclass
class BenchRecord:
    family: str
    n: int
    param: str
    algorithm: str
    seed: int
    ext_s: float
    cf: float
    vcs: int
    edges: int
    error: str | None = None

    @property
    def key(self):
        return (self.family, self.n, self.param, self.algorithm, self.seed)


@dataclass
class SuiteConfig:
    families: dict = field(default_factory=lambda: json.loads(json.dumps(DEFAULT_FAMILIES)))
    sizes: list = field(default_factory=lambda: list(DEFAULT_SIZES))
    algorithms: list = field(default_factory=lambda: list(ALGORITHMS))
    repetitions: int = 10
    base_seed: int = 0
    image_size: float = DEFAULT_IMAGE_MB
    wifi_ratio: float = 0.75
    greedy_variant: str = DEGREE
    cf_shared: bool = False
    ga: dict = field(default_factory=dict)
    gnosis_train: dict = field(default_factory=dict)
    gnosis_train_n: int | None = None
    gnosis_models: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}")

    @classmethod
    def from_json(cls, text: str) -> "SuiteConfig":
        doc = json.loads(text)
        names = {f.name for f in fields(cls)}
        extra = set(doc) - names
        if extra:
            raise ValueError(f"unknown suite config keys {sorted(extra)}")
        return cls(**doc)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def specs(self):
        for family, variants in self.families.items():
            for n in self.sizes:
                for params in variants:
                    yield TopologySpec(family, n, wifi_ratio=self.wifi_ratio, **params)


def _cf(t, cover: CoverSolution, image_size: float, shared: bool) -> float:
    if not shared:
        return cost_function(t, cover, image_size).cf
    delays = simulate_distribution(t, cover, image_size)
    total = 0.0
    for d in delays.values():
        total += d
    return len(cover) + total


def solve(t, algorithm: str, seed: int, image_size: float = DEFAULT_IMAGE_MB,
          model: gnosis.GnosisParams | None = None, greedy_variant: str = DEGREE,
          ga: GaConfig | None = None) -> CoverSolution:
    if algorithm == "approx":
        return approx_cover(t, seed)
    if algorithm == "greedy":
        return greedy_cover(t, greedy_variant, seed)
    if algorithm == "genetic":
        return genetic_cover(t, ga or GaConfig(), image_size, seed)
    if algorithm == "gnosis":
        if model is None:
            raise ValueError("gnosis needs a trained model")
        return replace(gnosis.infer_cover(model, t), seed=seed)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_cell(spec: TopologySpec, algorithm: str, image_size: float = DEFAULT_IMAGE_MB,
             seed: int | None = None, model: gnosis.GnosisParams | None = None,
             greedy_variant: str = DEGREE, ga: GaConfig | None = None,
             cf_shared: bool = False) -> BenchRecord:
    """One benchmark cell. Only the solver call is inside the timer."""
    seed = spec.seed if seed is None else seed
    t = generate(spec)
    try:
        start = time.perf_counter()
        cover = solve(t, algorithm, seed, image_size, model, greedy_variant, ga)
        elapsed = time.perf_counter() - start
        cf = _cf(t, cover, image_size, cf_shared)
    except Exception as exc:
        raise RuntimeError(
            f"cell ({spec.family}, n={spec.n}, {spec.param_label}, {algorithm}, seed={seed}) failed: {exc}"
        ) from exc
    return BenchRecord(spec.family, spec.n, spec.param_label, algorithm, seed,
                       elapsed, cf, len(cover), t.num_edges)


def _cell_job(args):
    spec, algorithm, cfg_dict, model_doc = args
    cfg = SuiteConfig(**cfg_dict)
    model = gnosis.GnosisParams.from_dict(model_doc) if model_doc else None
    try:
        return run_cell(spec, algorithm, cfg.image_size, spec.seed, model,
                        cfg.greedy_variant, GaConfig(**cfg.ga), cfg.cf_shared)
    except Exception as exc:
        log.warning("%s", exc)
        return BenchRecord(spec.family, spec.n, spec.param_label, algorithm, spec.seed,
                           math.nan, math.nan, -1, -1, error="".join(traceback.format_exception_only(exc)).strip())


def train_models(cfg: SuiteConfig, training_log: list | None = None) -> dict:
    """One model per (family, n), trained on the family's first parameter variant.

    ``training_log`` receives one entry per trained model with its wall-clock
    training time and per-episode returns.
    """
    models = {}
    for family, variants in cfg.families.items():
        for n in cfg.sizes:
            key = f"{family}:{n}"
            if key in cfg.gnosis_models:
                models[key] = gnosis.GnosisParams.load(cfg.gnosis_models[key])
                continue
            tspec = TopologySpec(family, cfg.gnosis_train_n or n, wifi_ratio=cfg.wifi_ratio, **variants[0])
            tcfg = gnosis.TrainConfig(**{"seed": cfg.base_seed, **cfg.gnosis_train})
            returns: list[float] = []
            start = time.perf_counter()
            models[key] = gnosis.train(tspec, tcfg, returns)
            elapsed = time.perf_counter() - start
            log.info("trained gnosis model %s in %.1fs", key, elapsed)
            if training_log is not None:
                training_log.append({"family": family, "n": n, "train_n": tspec.n,
                                     "param": tspec.param_label, "episodes": tcfg.episodes,
                                     "train_s": elapsed, "returns": returns})
    return models


def run_suite(cfg: SuiteConfig, training_log: list | None = None,
              models: dict | None = None) -> list[BenchRecord]:
    """Every (family, size, parameter, algorithm, repetition) cell, sorted.

    Repetition ``r`` uses seed ``base_seed + r`` for both the topology and the
    solver, so all algorithms in a repetition face the same graph. Failed
    cells come back with ``error`` set instead of aborting the suite.
    """
    if "gnosis" in cfg.algorithms and models is None:
        models = train_models(cfg, training_log)
    models = models or {}
    jobs = []
    cfg_dict = asdict(cfg)
    for base in cfg.specs():
        for algorithm in cfg.algorithms:
            model = models.get(f"{base.family}:{base.n}") if algorithm == "gnosis" else None
            model_doc = model.to_dict() if model is not None else None
            for r in range(cfg.repetitions):
                jobs.append((base.with_seed(cfg.base_seed + r), algorithm, cfg_dict, model_doc))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_cell_job, jobs))
    else:
        records = [_cell_job(j) for j in jobs]
    return sorted(records, key=lambda r: r.key)


def emit_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        if r.error:
            continue
        w.writerow([r.family, r.n, r.param, r.algorithm, r.seed, repr(r.ext_s), repr(r.cf), r.vcs, r.edges])
    return buf.getvalue()


def parse_csv(text: str) -> list[BenchRecord]:
    rows = csv.DictReader(io.StringIO(text))
    if rows.fieldnames != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {rows.fieldnames}")
    return [
        BenchRecord(row["family"], int(row["n"]), row["param"], row["algorithm"], int(row["seed"]),
                    float(row["ext_s"]), float(row["cf"]), int(row["vcs"]), int(row["edges"]))
        for row in rows
    ]


def medians(records, metric: str) -> dict:
    """``{(family, n, param, algorithm): median metric}`` over seeds, failed cells skipped."""
    groups: dict = {}
    for r in records:
        if r.error:
            continue
        groups.setdefault((r.family, r.n, r.param, r.algorithm), []).append(getattr(r, metric))
    return {k: statistics.median(v) for k, v in sorted(groups.items())}


def plot_series(records, metric: str, family: str, param: str | None = None) -> dict:
    """``{algorithm: (sizes, medians)}`` for one family and parameter variant.

    ``param`` defaults to the first variant present in sorted order.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    rows = [r for r in records if r.family == family and not r.error]
    if not rows:
        raise ValueError(f"no records for family {family!r}")
    if param is None:
        param = sorted({r.param for r in rows})[0]
    out = {}
    for (fam, n, prm, algo), val in medians(rows, metric).items():
        if prm != param:
            continue
        xs, ys = out.setdefault(algo, ([], []))
        xs.append(n)
        ys.append(val)
    return out


def emit_plot(records, metric: str, family: str | None = None, param: str | None = None) -> str:
    """SVG line plot of median ``metric`` against vertex count, one line per algorithm."""
    records = list(records)
    if not records:
        raise ValueError("cannot plot an empty record set")
    family = family or records[0].family
    series = plot_series(records, metric, family, param)

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for algo, (xs, ys) in sorted(series.items()):
        ax.plot(xs, ys, marker="o", label=algo)
    ax.set_xlabel("Vertices")
    ax.set_ylabel(METRICS[metric])
    ax.set_title(f"{family.upper()} {param or ''}".strip())
    ax.legend()
    fig.tight_layout()
    buf = io.StringIO()
    fig.savefig(buf, format="svg")
    plt.close(fig)
    return buf.getvalue()


def write_plots(records, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for family in sorted({r.family for r in records if not r.error}):
        for metric in METRICS:
            path = outdir / f"{family}_{metric}.svg"
            path.write_text(emit_plot(records, metric, family))
            written.append(path)
    return written


def spec_from_record(r: BenchRecord, wifi_ratio: float = 0.75) -> TopologySpec:
    return TopologySpec(r.family, r.n, seed=r.seed, wifi_ratio=wifi_ratio,
                        **parse_param_label(r.family, r.param))
