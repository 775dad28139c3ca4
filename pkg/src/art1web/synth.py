"""Synthetic data with planted clusters: pattern matrices and CLF logs."""

from __future__ import annotations

import datetime as dt
from itertools import combinations

import numpy as np

from .errors import DataError
from .features import PatternMatrix


def jaccard(a, b) -> float:
    a, b = np.asarray(a, bool), np.asarray(b, bool)
    union = np.count_nonzero(a | b)
    return np.count_nonzero(a & b) / union if union else 0.0


def planted_prototypes(n, k, proto_density, rng, max_overlap=0.2, max_retries=1000):
    """``k`` random binary prototypes with pairwise Jaccard below ``max_overlap``.

    Each prototype is drawn bit-wise with probability ``proto_density`` and
    redrawn until it is nonempty and clears the overlap bound against the ones
    already accepted.
    """
    protos = []
    retries = 0
    while len(protos) < k:
        cand = (rng.random(n) < proto_density).astype(np.uint8)
        if cand.any() and all(jaccard(cand, q) < max_overlap for q in protos):
            protos.append(cand)
            continue
        retries += 1
        if retries > max_retries:
            raise DataError(
                f"could not draw {k} prototypes with overlap < {max_overlap} "
                f"in {max_retries} retries"
            )
    return np.array(protos, dtype=np.uint8)


def _cover(protos, rng):
    # Give each feature no prototype uses to one random prototype. Adding a bit
    # outside every other prototype can only lower pairwise Jaccard overlap.
    unused = np.flatnonzero(~protos.any(axis=0))
    owners = rng.integers(len(protos), size=len(unused))
    protos[owners, unused] = 1
    return protos


def gen_planted(
    n: int,
    k: int,
    per_cluster,
    proto_density: float = 0.25,
    noise: float = 0.0,
    seed: int = 0,
    max_overlap: float = 0.2,
    max_retries: int = 1000,
    cover_features: bool = False,
) -> PatternMatrix:
    """Planted-cluster pattern matrix with ground truth.

    ``per_cluster`` is a member count per cluster (int or one int per cluster).
    Members are their prototype with each bit flipped independently with
    probability ``noise``; all-zero members are redrawn. Rows are shuffled so
    clusters are interleaved, and hosts are named so that lexicographic order
    matches row order. With ``cover_features`` every feature is set in some
    prototype, so at ``noise=0`` no column of the matrix is empty.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    if not 0.0 < proto_density < 1.0:
        raise ValueError("proto_density must lie in (0, 1)")
    if not 0.0 <= noise < 0.5:
        raise ValueError("noise must lie in [0, 0.5)")
    if k * proto_density * n < 1 and not cover_features:
        raise ValueError("k * proto_density * n must be >= 1")
    sizes = np.broadcast_to(np.asarray(per_cluster, dtype=np.int64), (k,))
    if (sizes < 1).any():
        raise ValueError("every cluster needs at least one member")

    rng = np.random.default_rng(seed)
    protos = planted_prototypes(n, k, proto_density, rng, max_overlap, max_retries)
    if cover_features:
        protos = _cover(protos, rng)

    truth = np.repeat(np.arange(k), sizes)
    rng.shuffle(truth)
    rows = np.empty((len(truth), n), dtype=np.uint8)
    for r, c in enumerate(truth):
        while True:
            flips = rng.random(n) < noise
            row = protos[c] ^ flips
            if row.any():
                break
        rows[r] = row

    width = max(4, len(str(len(truth) - 1)))
    hosts = [f"host{r:0{width}d}" for r in range(len(truth))]
    uwidth = max(4, len(str(n - 1)))
    urls = [f"/page{i:0{uwidth}d}.html" for i in range(n)]
    gt = {h: int(c) for h, c in zip(hosts, truth)}
    return PatternMatrix(urls, hosts, rows, gt)


_MONTHS = "Jan Feb Mar Apr May Jun Jul Aug Sep Oct Nov Dec".split()


def _clf_time(t: dt.datetime) -> str:
    return f"{t.day:02d}/{_MONTHS[t.month - 1]}/{t.year}:{t:%H:%M:%S} +0000"


def gen_log(
    hosts: int,
    urls: int,
    k: int,
    noise: float = 0.0,
    seed: int = 0,
    proto_density: float = 0.25,
    max_repeats: int = 3,
) -> tuple[str, PatternMatrix]:
    """CLF log text realizing a planted matrix, and that matrix.

    Each host requests each URL of its pattern between 1 and ``max_repeats``
    times; lines are shuffled. Parsing, aggregating and binarizing with
    ``tau=1`` recovers the returned matrix exactly when ``noise == 0``.
    """
    if hosts < k:
        raise ValueError("need at least one host per planted cluster")
    sizes = np.full(k, hosts // k)
    sizes[: hosts % k] += 1
    matrix = gen_planted(
        urls, k, sizes, proto_density, noise, seed, cover_features=True
    )
    rng = np.random.default_rng([seed, 1])
    hits = []
    for h, row in zip(matrix.hosts, matrix.bits):
        for i in np.flatnonzero(row):
            hits.extend([(h, matrix.urls[i])] * int(rng.integers(1, max_repeats + 1)))
    order = rng.permutation(len(hits))
    start = dt.datetime(2000, 10, 10, 13, 55, 36)
    lines = []
    for step, idx in enumerate(order):
        h, u = hits[idx]
        t = start + dt.timedelta(seconds=step)
        size = int(rng.integers(200, 20000))
        lines.append(f'{h} - - [{_clf_time(t)}] "GET {u} HTTP/1.0" 200 {size}')
    return "\n".join(lines) + "\n", matrix


def min_pairwise_jaccard_ok(protos, max_overlap=0.2) -> bool:
    return all(jaccard(a, b) < max_overlap for a, b in combinations(protos, 2))
