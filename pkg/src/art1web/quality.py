"""Cluster quality measures.

Distances are Euclidean between a member's binary vector and its cluster's
prototype (binary for ART1, a real centroid for the baselines). Compactness,
separation and overall quality follow the usual construction (lower is
better for all three):

* ``cmp = mean_c dev(c) / dev(X)`` with ``dev`` the RMS distance of a set's
  members to the set's mean vector;
* ``sep = mean_{i<j} exp(-d(proto_i, proto_j)^2 / (2 sigma^2))``;
* ``ocq = beta * cmp + (1 - beta) * sep``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .clustering import Clustering
from .errors import DataError, QualityError
from .features import PatternMatrix

QUALITY_FORMULAS = "cmp=mean(rms_c)/rms_X; sep=mean exp(-d^2/(2 sigma^2)); ocq=beta*cmp+(1-beta)*sep"


def _labels(clustering: Clustering, matrix: PatternMatrix) -> np.ndarray:
    try:
        return clustering.labels(matrix.hosts)
    except KeyError as exc:
        raise DataError(f"host {exc} has no cluster assignment") from None


def avg_inter_cluster_distance(clustering: Clustering, matrix: PatternMatrix | None = None) -> float:
    """Mean distance over all unordered pairs of prototypes."""
    if clustering.n_clusters < 2:
        raise QualityError("inter-cluster distance undefined for fewer than 2 clusters")
    return float(pdist(clustering.prototypes).mean())


def avg_intra_cluster_distance(clustering: Clustering, matrix: PatternMatrix) -> float:
    """Mean over clusters of the mean member-to-prototype distance."""
    labels = _labels(clustering, matrix)
    X = matrix.bits.astype(np.float64)
    d = np.linalg.norm(X - clustering.prototypes[labels], axis=1)
    per_cluster = np.bincount(labels, weights=d) / np.bincount(labels)
    return float(per_cluster.mean())


def _rms_dev(X: np.ndarray) -> float:
    return float(np.sqrt(((X - X.mean(axis=0)) ** 2).sum(axis=1).mean()))


def cluster_compactness(clustering: Clustering, matrix: PatternMatrix) -> float:
    labels = _labels(clustering, matrix)
    X = matrix.bits.astype(np.float64)
    total = _rms_dev(X)
    if total == 0.0:
        raise QualityError("degenerate dataset: all patterns identical")
    devs = [_rms_dev(X[labels == c]) for c in range(clustering.n_clusters)]
    return float(np.mean(devs) / total)


def cluster_separation(clustering: Clustering, matrix: PatternMatrix | None = None, sigma: float = 1.0) -> float:
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if clustering.n_clusters < 2:
        raise QualityError("separation undefined for fewer than 2 clusters")
    d = pdist(clustering.prototypes)
    return float(np.exp(-(d ** 2) / (2.0 * sigma * sigma)).mean())


def overall_quality(cmp: float, sep: float, beta: float = 0.5) -> float:
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    return beta * cmp + (1.0 - beta) * sep


def rand_index(assignments: dict, truth: dict) -> float:
    """Fraction of host pairs on which two partitions agree (together/apart)."""
    if set(assignments) != set(truth):
        raise DataError("partitions cover different host sets")
    hosts = list(assignments)
    n = len(hosts)
    if n < 2:
        return 1.0
    a = np.unique([assignments[h] for h in hosts], return_inverse=True)[1]
    b = np.unique([truth[h] for h in hosts], return_inverse=True)[1]

    def together(counts):
        counts = np.asarray(counts, dtype=np.int64)
        return int((counts * (counts - 1) // 2).sum())

    table = np.zeros((a.max() + 1, b.max() + 1), dtype=np.int64)
    np.add.at(table, (a, b), 1)
    both = together(table)
    ta, tb = together(table.sum(1)), together(table.sum(0))
    pairs = n * (n - 1) // 2
    disagree = ta + tb - 2 * both
    return (pairs - disagree) / pairs


@dataclass
class QualityReport:
    algorithm: str
    param: str
    num_clusters: int
    avg_inter: float | None
    avg_intra: float
    cmp: float
    sep: float | None
    ocq: float | None
    rand_index: float | None = None

    CSV_HEADER = ("algorithm", "param", "clusters", "avg_inter", "avg_intra", "cmp", "sep", "ocq", "rand_index")

    def csv_row(self) -> list:
        def fmt(x):
            return "" if x is None else repr(float(x))
        return [self.algorithm, self.param, self.num_clusters, fmt(self.avg_inter),
                fmt(self.avg_intra), fmt(self.cmp), fmt(self.sep), fmt(self.ocq),
                fmt(self.rand_index)]

    def to_csv(self, header=True) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        if header:
            w.writerow(self.CSV_HEADER)
        w.writerow(self.csv_row())
        return out.getvalue()

    def to_json(self) -> str:
        return json.dumps({**asdict(self), "formulas": QUALITY_FORMULAS})


def evaluate(
    clustering: Clustering,
    matrix: PatternMatrix,
    sigma: float = 1.0,
    beta: float = 0.5,
    truth: dict | None = None,
    param: str = "",
) -> QualityReport:
    """Compute every measure; inter/sep/ocq are None for a single cluster.

    ``rand_index`` is filled only when ``truth`` (host -> cluster id) is given.
    """
    intra = avg_intra_cluster_distance(clustering, matrix)
    cmp = cluster_compactness(clustering, matrix)
    inter = sep = ocq = None
    if clustering.n_clusters >= 2:
        inter = avg_inter_cluster_distance(clustering, matrix)
        sep = cluster_separation(clustering, matrix, sigma)
        ocq = overall_quality(cmp, sep, beta)
    ri = None
    if truth is not None:
        ri = rand_index({h: clustering.assignments[h] for h in matrix.hosts}, truth)
    return QualityReport(clustering.algorithm, param, clustering.n_clusters,
                         inter, intra, cmp, sep, ocq, ri)


