"""ART1 clustering of binary pattern vectors.

The network keeps one committed F2 node per cluster. Each node carries a binary
top-down prototype ``v`` and a real bottom-up weight row ``w``; with fast
learning the two stay coupled as ``w = v / (0.5 + |v|)``. A pattern is matched
against every committed node plus one uncommitted node (``w = 2/(1+n)``,
``v = 1``). Nodes are tried in decreasing order of bottom-up score; the first
whose prototype covers at least a fraction ``rho`` of the pattern's bits
resonates and learns ``v <- v AND p``. The uncommitted node always passes, so
a pattern nothing else accepts founds a new cluster.

Prototypes are held as Python-int bitsets (bit ``i`` <-> feature ``i``), which
keeps the per-pattern search to a handful of AND/popcount operations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .clustering import Clustering
from .errors import ClusterBudgetError, DataError
from .features import PatternMatrix


@dataclass(frozen=True)
class Art1Params:
    rho: float = 0.5
    max_epochs: int = 100
    max_clusters: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be positive")
        if self.max_clusters is not None and self.max_clusters < 1:
            raise ValueError("max_clusters must be positive or None")


def to_bitset(p) -> int:
    p = np.asarray(p, dtype=np.uint8)
    return int.from_bytes(np.packbits(p, bitorder="little").tobytes(), "little")


def from_bitset(x: int, n: int) -> np.ndarray:
    raw = np.frombuffer(x.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, count=n, bitorder="little")


def uncommitted_weights(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Initial (bottom_up, top_down) rows of a node that has learned nothing."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.full(n, 2.0 / (1 + n)), np.ones(n, dtype=np.uint8)


def _bottom_up_row(v: int, size: int, n: int) -> np.ndarray:
    return from_bitset(v, n) / (0.5 + size)


class Art1Model:
    """Committed F2 nodes of an ART1 network over ``n`` features."""

    def __init__(self, n: int, params: Art1Params | None = None):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.params = params or Art1Params()
        self._v: list[int] = []
        self._size: list[int] = []
        self._w: list[np.ndarray] = []
        self.epochs = 0
        self.converged = False

    @property
    def n_clusters(self) -> int:
        return len(self._v)

    @property
    def top_down(self) -> np.ndarray:
        if not self._v:
            return np.zeros((0, self.n), dtype=np.uint8)
        return np.vstack([from_bitset(v, self.n) for v in self._v])

    @property
    def bottom_up(self) -> np.ndarray:
        if not self._w:
            return np.zeros((0, self.n))
        return np.vstack(self._w)

    prototypes = top_down

    def cluster(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """(bottom_up, top_down) rows of committed node ``j``."""
        return self._w[j], from_bitset(self._v[j], self.n)

    def bitset(self, j: int) -> int:
        return self._v[j]

    def copy(self) -> Art1Model:
        other = Art1Model(self.n, self.params)
        other._v = list(self._v)
        other._size = list(self._size)
        other._w = [w.copy() for w in self._w]
        other.epochs, other.converged = self.epochs, self.converged
        return other

    def keep(self, ids) -> None:
        """Retain only the given clusters, renumbered in their original order."""
        ids = sorted(set(ids))
        self._v = [self._v[j] for j in ids]
        self._size = [self._size[j] for j in ids]
        self._w = [self._w[j] for j in ids]

    def _commit(self, p: int, size: int) -> int:
        if self.params.max_clusters is not None and len(self._v) >= self.params.max_clusters:
            raise ClusterBudgetError("cluster budget exhausted")
        self._v.append(p)
        self._size.append(size)
        self._w.append(_bottom_up_row(p, size, self.n))
        return len(self._v) - 1

    def _learn(self, j: int, p: int) -> bool:
        v = self._v[j] & p
        if v == self._v[j]:
            return False
        size = v.bit_count()
        self._v[j], self._size[j] = v, size
        self._w[j] = _bottom_up_row(v, size, self.n)
        return True

    def _ranked(self, p: int, psize: int):
        """Committed nodes in search order, plus the uncommitted node's key.

        Keys are ``2|v&p| / (1 + 2|v|)``, i.e. the bottom-up score ``sum_i w_i p_i``
        evaluated as one correctly rounded division. Equal rationals therefore
        give equal floats and exact ties fall to the lowest index.
        """
        overlaps = [(v & p).bit_count() for v in self._v]
        keys = [2 * o / (1 + 2 * s) for o, s in zip(overlaps, self._size)]
        return overlaps, keys, 2 * psize / (1 + self.n)

    def _search(self, p: int, psize: int, learn: bool):
        rho = self.params.rho
        overlaps, keys, fresh_key = self._ranked(p, psize)
        if keys:
            best = max(range(len(keys)), key=keys.__getitem__)
            if keys[best] >= fresh_key and overlaps[best] / psize >= rho:
                return best
            order = sorted(range(len(keys)), key=lambda j: -keys[j])
        else:
            order = []
        for j in order:
            # learning: the uncommitted node outranks j and always resonates
            if learn and keys[j] < fresh_key:
                return None
            if overlaps[j] / psize >= rho:
                return j
        return None

    def present(self, p: int, psize: int) -> tuple[int, bool]:
        """One learning presentation of bitset ``p``; returns (cluster id, weights changed)."""
        j = self._search(p, psize, learn=True)
        if j is None:
            return self._commit(p, psize), True
        return j, self._learn(j, p)

    def to_dict(self) -> dict:
        return {
            "rho": self.params.rho,
            "n": self.n,
            "max_epochs": self.params.max_epochs,
            "max_clusters": self.params.max_clusters,
            "epochs": self.epochs,
            "converged": self.converged,
            "clusters": [
                {"top_down": from_bitset(v, self.n).tolist(), "bottom_up": w.tolist()}
                for v, w in zip(self._v, self._w)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Art1Model:
        try:
            params = Art1Params(d["rho"], d.get("max_epochs", 100), d.get("max_clusters"))
            model = cls(int(d["n"]), params)
            for c in d["clusters"]:
                td = np.asarray(c["top_down"], dtype=np.int64)
                bu = np.asarray(c["bottom_up"], dtype=np.float64)
                if td.shape != (model.n,) or bu.shape != (model.n,) or not np.isin(td, (0, 1)).all():
                    raise DataError("cluster weight rows must have length n and binary top_down")
                v = to_bitset(td)
                if v == 0:
                    raise DataError("all-zero top_down prototype")
                model._v.append(v)
                model._size.append(v.bit_count())
                model._w.append(bu)
        except (KeyError, TypeError) as exc:
            raise DataError(f"malformed ART1 model: {exc}") from None
        model.epochs = int(d.get("epochs", 0))
        model.converged = bool(d.get("converged", False))
        return model


def _check_pattern(model: Art1Model, p) -> tuple[int, int]:
    p = np.asarray(p)
    if p.shape != (model.n,):
        raise ValueError(f"pattern length {p.shape} does not match n={model.n}")
    b = to_bitset(p)
    size = b.bit_count()
    if size == 0:
        raise ValueError("pattern must have at least one bit set")
    return b, size


def match_scores(model: Art1Model, p) -> np.ndarray:
    """Bottom-up scores of every committed node, then the uncommitted node."""
    _check_pattern(model, p)
    p = np.asarray(p, dtype=np.float64)
    fresh, _ = uncommitted_weights(model.n)
    return np.append(model.bottom_up @ p, fresh @ p)


def vigilance_test(top_down, p, rho: float) -> tuple[bool, float]:
    v = np.asarray(top_down, dtype=bool)
    p = np.asarray(p, dtype=bool)
    norm = int(p.sum())
    if norm == 0:
        raise ValueError("pattern must have at least one bit set")
    ratio = int((v & p).sum()) / norm
    return ratio >= rho, ratio


def resonate(model: Art1Model, j: int, p) -> int:
    """Apply the fast-learning update to node ``j``.

    ``j == model.n_clusters`` addresses the uncommitted node, which becomes a
    new cluster. Returns the id of the node that learned.
    """
    b, size = _check_pattern(model, p)
    if j == model.n_clusters:
        return model._commit(b, size)
    if not 0 <= j < model.n_clusters:
        raise IndexError(j)
    model._learn(j, b)
    return j


def present_pattern(model: Art1Model, p) -> int:
    """Run the full search/reset/resonance cycle for ``p``, updating ``model`` in place."""
    b, size = _check_pattern(model, p)
    return model.present(b, size)[0]


def assign(model: Art1Model, p) -> int | None:
    """Classify ``p`` without learning; None when no committed node passes vigilance."""
    b, size = _check_pattern(model, p)
    return model._search(b, size, learn=False)


def train(matrix: PatternMatrix, params: Art1Params | None = None, callback=None) -> tuple[Art1Model, Clustering]:
    """Present the patterns in row order, epoch after epoch, until an epoch
    changes neither an assignment nor a weight (or ``max_epochs`` runs out).

    Clusters left without members in the final epoch are removed.
    ``callback(model, epoch, row, cluster)`` is called after every presentation.
    """
    params = params or Art1Params()
    model = Art1Model(matrix.n, params)
    pats = [(b, b.bit_count()) for b in map(to_bitset, matrix.bits)]
    labels = [-1] * len(pats)
    for epoch in range(1, params.max_epochs + 1):
        changed = False
        for idx, (b, size) in enumerate(pats):
            j, moved = model.present(b, size)
            if moved or j != labels[idx]:
                changed = True
            labels[idx] = j
            if callback is not None:
                callback(model, epoch, idx, j)
        model.epochs = epoch
        if not changed:
            model.converged = True
            break
    used = sorted(set(labels))
    remap = {old: new for new, old in enumerate(used)}
    model.keep(used)
    assignments = {h: remap[j] for h, j in zip(matrix.hosts, labels)}
    clustering = Clustering(
        assignments, model.top_down, "art1", {"rho": params.rho, "epochs": model.epochs}
    )
    return model, clustering


def save_model(model: Art1Model, path) -> None:
    Path(path).write_text(json.dumps({"algorithm": "art1", **model.to_dict()}, indent=1))


def load_model(path) -> Art1Model:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: {exc}") from None
    return Art1Model.from_dict(d)


__all__ = [
    "Art1Params", "Art1Model", "uncommitted_weights", "match_scores", "vigilance_test",
    "resonate", "present_pattern", "assign", "train", "save_model", "load_model",
    "to_bitset", "from_bitset",
]
