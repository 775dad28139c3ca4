"""Runtime scaling and quality-vs-cluster-count experiments on synthetic data."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import median

import numpy as np
from scipy.stats import linregress

from . import art1
from .baselines import KMeansParams, SomParams, kmeans_train, som_train
from .features import PatternMatrix
from .quality import evaluate
from .synth import gen_planted

TIMING_HEADER = ("algorithm", "hosts", "rep", "seconds")
QUALITY_HEADER = ("algorithm", "param", "clusters", "avg_inter", "avg_intra", "cmp", "sep", "ocq")
ALGORITHMS = ("art1", "kmeans", "som")


def rho_range(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic range, rounded so 0.3..0.5 by 0.05 gives 5 values."""
    if step <= 0 or stop < start:
        raise ValueError("need step > 0 and stop >= start")
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 10) for i in range(count)]


@dataclass
class BenchConfig:
    host_counts: list[int] = field(default_factory=lambda: [100, 250, 500, 1000])
    rho_values: list[float] = field(default_factory=lambda: rho_range(0.3, 0.5, 0.05))
    k_values: list[int] | None = None  # None -> the cluster counts ART1 produced
    repetitions: int = 5
    seed: int = 0
    # synthetic instance
    n_features: int = 64
    planted: int = 5
    density: float = 0.25
    noise: float = 0.02
    quality_hosts: int = 500
    # pinned training configs
    timing_rho: float = 0.5
    kmeans_max_iters: int = 100
    som_iters_per_host: int = 10

    def __post_init__(self):
        if not self.host_counts or not self.rho_values or self.k_values == []:
            raise ValueError("host_counts, rho_values and k_values must be non-empty")
        if min(self.host_counts) < self.planted:
            raise ValueError("every host count must be at least the planted cluster count")
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")
        if any(not 0 <= r <= 1 for r in self.rho_values):
            raise ValueError("rho values must lie in [0, 1]")
        if self.k_values and min(self.k_values) < 1:
            raise ValueError("k values must be positive")


@dataclass
class TimingRow:
    algorithm: str
    hosts: int
    median_seconds: float
    timings: list[float]


def bench_instance(config: BenchConfig, hosts: int, seed: int | None = None) -> PatternMatrix:
    """The pinned synthetic matrix for a host count (planted clusters of near-equal size)."""
    k = config.planted
    sizes = np.full(k, hosts // k)
    sizes[: hosts % k] += 1
    return gen_planted(config.n_features, k, sizes, config.density, config.noise,
                       config.seed if seed is None else seed)


def som_shape(k: int) -> tuple[int, int]:
    """Most nearly square grid with exactly ``k`` nodes."""
    h = max(d for d in range(1, int(k ** 0.5) + 1) if k % d == 0)
    return k // h, h


def run_algorithm(algo: str, matrix: PatternMatrix, param, seed: int = 0, config: BenchConfig | None = None):
    """Train one algorithm; ``param`` is rho for art1 and k for the baselines."""
    config = config or BenchConfig()
    if algo == "art1":
        return art1.train(matrix, art1.Art1Params(rho=param))[1]
    if algo == "kmeans":
        return kmeans_train(matrix, KMeansParams(param, config.kmeans_max_iters, seed))
    if algo == "som":
        w, h = som_shape(param)
        return som_train(matrix, SomParams(w, h, iters=config.som_iters_per_host * matrix.m, seed=seed))
    raise ValueError(f"unknown algorithm {algo!r}")


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return time.perf_counter() - t0, out


def run_timing(config: BenchConfig) -> list[TimingRow]:
    """Wall-clock train() for each algorithm and host count, serially.

    K-Means and SOM get the cluster count ART1 produced at ``timing_rho``.
    Matrix generation is outside the timed region.
    """
    rows = []
    for hosts in config.host_counts:
        matrix = bench_instance(config, hosts)
        k = run_algorithm("art1", matrix, config.timing_rho, config=config).n_clusters
        k = min(k, matrix.m)
        params = {"art1": config.timing_rho, "kmeans": k, "som": k}
        times = {a: [] for a in ALGORITHMS}
        for rep in range(config.repetitions):
            for algo in ALGORITHMS:
                dt, _ = _timed(lambda: run_algorithm(algo, matrix, params[algo], config.seed, config))
                times[algo].append(dt)
        rows.extend(TimingRow(a, hosts, median(times[a]), times[a]) for a in ALGORITHMS)
    return rows


def fit_scaling(rows: list[TimingRow]) -> dict[str, tuple[float, float]]:
    """Per algorithm: (slope, r^2) of log(median seconds) against log(hosts)."""
    out = {}
    for algo in dict.fromkeys(r.algorithm for r in rows):
        pts = sorted((r.hosts, r.median_seconds) for r in rows if r.algorithm == algo)
        if len({h for h, _ in pts}) < 3:
            raise ValueError(f"{algo}: need at least 3 host counts to fit scaling")
        fit = linregress(np.log([h for h, _ in pts]), np.log([t for _, t in pts]))
        out[algo] = (float(fit.slope), float(fit.rvalue ** 2))
    return out


def _quality_job(args):
    algo, param, config, matrix = args
    if matrix is None:
        matrix = bench_instance(config, config.quality_hosts)
    if algo != "art1" and param > matrix.m:
        return None
    clustering = run_algorithm(algo, matrix, param, config.seed, config)
    return evaluate(clustering, matrix, param=str(param), truth=matrix.ground_truth)


def run_quality_curves(config: BenchConfig, algorithms=ALGORITHMS, jobs: int = 1,
                       matrix: PatternMatrix | None = None):
    """QualityReports for ART1 over ``rho_values`` and the baselines over ``k_values``.

    All runs share one matrix: ``matrix`` if given, else the pinned
    ``quality_hosts`` instance. Without explicit ``k_values`` the baselines are
    run at each cluster count ART1 produced over ``rho_values``.
    """
    art = _map(_quality_job, [("art1", rho, config, matrix) for rho in config.rho_values], jobs) \
        if "art1" in algorithms or config.k_values is None else []
    ks = config.k_values or sorted({r.num_clusters for r in art})
    reports = art if "art1" in algorithms else []
    base_jobs = [(a, k, config, matrix) for a in algorithms if a != "art1" for k in ks]
    reports += [r for r in _map(_quality_job, base_jobs, jobs) if r is not None]
    return reports


def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(it) for it in items]


def timings_csv(rows: list[TimingRow]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TIMING_HEADER)
    for r in rows:
        for rep, t in enumerate(r.timings):
            w.writerow([r.algorithm, r.hosts, rep, repr(t)])
    return out.getvalue()


def quality_csv(reports) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(QUALITY_HEADER)
    for rep in reports:
        w.writerow(rep.csv_row()[: len(QUALITY_HEADER)])
    return out.getvalue()
