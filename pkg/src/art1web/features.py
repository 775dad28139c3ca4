"""Feature extraction: URL vocabulary and per-host binary pattern vectors."""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FeatureError, MatrixFormatError
from .logparse import AccessCounts

log = logging.getLogger(__name__)

BaseVector = tuple[str, ...]


@dataclass(frozen=True, eq=False)
class PatternMatrix:
    """Binary host x URL access matrix.

    ``bits[j, i] == 1`` iff host ``hosts[j]`` accessed ``urls[i]``. Every row has
    at least one bit set. ``ground_truth`` maps host -> planted cluster id and is
    only present for synthetic data.
    """

    urls: BaseVector
    hosts: tuple[str, ...]
    bits: np.ndarray
    ground_truth: dict[str, int] | None = None

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        object.__setattr__(self, "urls", tuple(self.urls))
        object.__setattr__(self, "hosts", tuple(self.hosts))
        object.__setattr__(self, "bits", bits)
        bits.setflags(write=False)
        if not self.urls:
            raise FeatureError("base vector is empty")
        if len(set(self.urls)) != len(self.urls):
            raise FeatureError("duplicate URL in base vector")
        if len(set(self.hosts)) != len(self.hosts):
            raise FeatureError("duplicate host label")
        if bits.ndim != 2 or bits.shape != (len(self.hosts), len(self.urls)):
            raise FeatureError(
                f"bits shape {bits.shape} does not match {len(self.hosts)} hosts x {len(self.urls)} urls"
            )
        if bits.shape[0] == 0:
            raise FeatureError("no nonzero pattern vectors")
        if bits.max(initial=0) > 1:
            raise FeatureError("pattern bits must be 0/1")
        if not bits.any(axis=1).all():
            raise FeatureError("all-zero pattern vector")
        if self.ground_truth is not None and set(self.ground_truth) != set(self.hosts):
            raise FeatureError("ground truth must label exactly the matrix hosts")

    @property
    def n(self) -> int:
        return len(self.urls)

    @property
    def m(self) -> int:
        return len(self.hosts)

    def truth_labels(self) -> np.ndarray | None:
        if self.ground_truth is None:
            return None
        return np.array([self.ground_truth[h] for h in self.hosts])

    def subset(self, rows) -> PatternMatrix:
        rows = np.asarray(rows)
        hosts = [self.hosts[r] for r in rows]
        truth = None
        if self.ground_truth is not None:
            truth = {h: self.ground_truth[h] for h in hosts}
        return PatternMatrix(self.urls, hosts, self.bits[rows], truth)

    def __eq__(self, other):
        if not isinstance(other, PatternMatrix):
            return NotImplemented
        return (
            self.urls == other.urls
            and self.hosts == other.hosts
            and np.array_equal(self.bits, other.bits)
            and self.ground_truth == other.ground_truth
        )

    def __repr__(self):
        return f"PatternMatrix(m={self.m}, n={self.n}, truth={self.ground_truth is not None})"


def build_base_vector(counts: AccessCounts, min_url_support: int = 1) -> BaseVector:
    """URLs accessed by at least ``min_url_support`` distinct hosts, sorted."""
    if not counts.counts:
        raise FeatureError("access counts are empty")
    if min_url_support < 0:
        raise ValueError("min_url_support must be >= 0")
    support = counts.hosts_per_url()
    urls = tuple(sorted(u for u in counts.urls if support[u] >= min_url_support))
    if not urls:
        raise FeatureError("no URLs meet support threshold")
    return urls


def binarize(counts: AccessCounts, base: BaseVector, tau: int = 1) -> tuple[PatternMatrix, list[str]]:
    """Threshold access counts into pattern vectors.

    Bit ``i`` of a host's vector is set iff it accessed ``base[i]`` at least
    ``tau`` times. Hosts left with an all-zero vector are dropped; their labels
    are returned alongside the matrix.
    """
    if tau < 1:
        raise ValueError("tau must be a positive integer")
    col = {u: i for i, u in enumerate(base)}
    row = {h: j for j, h in enumerate(counts.hosts)}
    bits = np.zeros((len(counts.hosts), len(base)), dtype=np.uint8)
    for (h, u), c in counts.counts.items():
        i = col.get(u)
        if i is not None and c >= tau:
            bits[row[h], i] = 1
    keep = bits.any(axis=1)
    dropped = [h for h, k in zip(counts.hosts, keep) if not k]
    if dropped:
        log.info("dropped %d host(s) with all-zero pattern vectors", len(dropped))
    if not keep.any():
        raise FeatureError("no nonzero pattern vectors")
    hosts = [h for h, k in zip(counts.hosts, keep) if k]
    return PatternMatrix(base, hosts, bits[keep]), dropped


def _check_label(s, what):
    if not s or any(ch in s for ch in "\t\r\n"):
        raise FeatureError(f"{what} {s!r} cannot be written: empty or contains tab/newline")


def dumps_matrix(matrix: PatternMatrix) -> str:
    out = io.StringIO()
    out.write(f"{matrix.n} {matrix.m}\n")
    for u in matrix.urls:
        _check_label(u, "url")
    out.write("\t".join(matrix.urls) + "\n")
    for h, row in zip(matrix.hosts, matrix.bits):
        _check_label(h, "host")
        out.write(h + "\t" + "".join("1" if b else "0" for b in row) + "\n")
    if matrix.ground_truth is not None:
        out.write("#truth\n")
        for h in matrix.hosts:
            out.write(f"{h}\t{matrix.ground_truth[h]}\n")
    return out.getvalue()


def loads_matrix(text: str) -> PatternMatrix:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MatrixFormatError("empty file", 1)
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise MatrixFormatError("header must be two integers 'n m'", 1) from None
    if n < 1 or m < 0:
        raise MatrixFormatError("header counts out of range", 1)
    if len(lines) < 2:
        raise MatrixFormatError("missing URL line", 2)
    urls = lines[1].split("\t")
    if len(urls) != n:
        raise MatrixFormatError(f"expected {n} URLs, found {len(urls)}", 2)
    if m == 0:
        raise MatrixFormatError("no nonzero pattern vectors", 3)

    hosts, rows = [], []
    k = 2
    while k < len(lines) and lines[k] != "#truth":
        lineno = k + 1
        parts = lines[k].split("\t")
        if len(parts) != 2:
            raise MatrixFormatError("expected 'host<TAB>bits'", lineno)
        host, b = parts
        if len(b) != n:
            raise MatrixFormatError(f"row width {len(b)} does not match n={n}", lineno)
        if b.strip("01"):
            raise MatrixFormatError("bits must be 0/1 characters", lineno)
        if "1" not in b:
            raise MatrixFormatError("all-zero pattern vector", lineno)
        hosts.append(host)
        rows.append(np.frombuffer(b.encode("ascii"), dtype=np.uint8) - ord("0"))
        k += 1
    if not rows:
        raise MatrixFormatError("no nonzero pattern vectors", k + 1)
    if len(rows) != m:
        raise MatrixFormatError(f"header says {m} patterns, found {len(rows)}", k + 1)

    truth = None
    if k < len(lines):
        truth = {}
        for k in range(k + 1, len(lines)):
            parts = lines[k].split("\t")
            if len(parts) != 2:
                raise MatrixFormatError("expected 'host<TAB>cluster-id'", k + 1)
            try:
                truth[parts[0]] = int(parts[1])
            except ValueError:
                raise MatrixFormatError("cluster id must be an integer", k + 1) from None
    try:
        return PatternMatrix(urls, hosts, np.vstack(rows), truth)
    except FeatureError as exc:
        raise MatrixFormatError(str(exc)) from None


def write_matrix(matrix: PatternMatrix, path) -> None:
    Path(path).write_text(dumps_matrix(matrix), encoding="utf-8")


def read_matrix(path) -> PatternMatrix:
    return loads_matrix(Path(path).read_text(encoding="utf-8"))
