"""Common clustering result shared by ART1 and the baselines."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError


@dataclass(eq=False)
class Clustering:
    """Host -> cluster assignment plus one prototype row per cluster.

    Cluster ids are ``0..k-1`` and every cluster has at least one member.
    Prototypes are binary for ART1 and real-valued centroids for the baselines.
    """

    assignments: dict[str, int]
    prototypes: np.ndarray
    algorithm: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.prototypes = np.atleast_2d(np.asarray(self.prototypes, dtype=np.float64))
        used = set(self.assignments.values())
        if used != set(range(len(self.prototypes))):
            raise DataError("every cluster needs a prototype and at least one member")

    @classmethod
    def from_labels(cls, hosts, labels, prototypes, algorithm="", params=None) -> Clustering:
        """Build from per-host labels, dropping empty clusters and compacting ids
        while preserving their relative order."""
        labels = np.asarray(labels)
        prototypes = np.asarray(prototypes, dtype=np.float64)
        used = np.unique(labels)
        remap = {int(old): new for new, old in enumerate(used)}
        assignments = {h: remap[int(lab)] for h, lab in zip(hosts, labels)}
        return cls(assignments, prototypes[used], algorithm, dict(params or {}))

    @property
    def n_clusters(self) -> int:
        return len(self.prototypes)

    def labels(self, hosts) -> np.ndarray:
        return np.array([self.assignments[h] for h in hosts], dtype=np.int64)

    def sizes(self) -> np.ndarray:
        return np.bincount(list(self.assignments.values()), minlength=self.n_clusters)


def dumps_assignments(clustering: Clustering) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["host", "cluster"])
    for h, c in clustering.assignments.items():
        w.writerow([h, c])
    return out.getvalue()


def write_assignments(clustering: Clustering, path) -> None:
    Path(path).write_text(dumps_assignments(clustering), encoding="utf-8")


def read_assignments(path) -> dict[str, int]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"host", "cluster"} <= set(reader.fieldnames):
            raise DataError(f"{path}: expected header 'host,cluster'")
        out = {}
        for row in reader:
            try:
                out[row["host"]] = int(row["cluster"])
            except (TypeError, ValueError):
                raise DataError(f"{path}:{reader.line_num}: bad cluster id") from None
    return out


def clustering_from_assignments(assignments: dict[str, int], matrix) -> Clustering:
    """Rebuild a Clustering whose prototypes are the member centroids.

    Used when only a host,cluster CSV is available (no model file).
    """
    missing = set(matrix.hosts) - set(assignments)
    if missing:
        raise DataError(f"{len(missing)} matrix host(s) have no assignment")
    labels = np.array([assignments[h] for h in matrix.hosts])
    ids = np.unique(labels)
    protos = np.vstack([matrix.bits[labels == c].mean(axis=0) for c in ids])
    lab = np.searchsorted(ids, labels)
    return Clustering.from_labels(matrix.hosts, lab, protos, "unknown")
