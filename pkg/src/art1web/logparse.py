"""Common Log Format parsing and per-host URL access aggregation."""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import EmptyLogError

log = logging.getLogger(__name__)

# host ident authuser [timestamp] "METHOD url [PROTO]" status bytes [combined-format trailer]
_CLF = re.compile(
    r'^(?P<host>\S+) \S+ \S+ \[(?P<ts>[^\]]*)\] '
    r'"(?P<method>[A-Za-z]+) (?P<url>\S+)(?: [^"\s]+)?" '
    r'(?P<status>\d{3}) (?P<bytes>\d+|-)(?:\s.*)?$'
)


@dataclass(frozen=True)
class LogRecord:
    host: str
    timestamp: str
    method: str
    url: str
    status: int
    bytes: int | None = None


def parse_log_line(line: str | bytes) -> LogRecord | None:
    """Parse one CLF line; returns None for anything malformed."""
    if isinstance(line, (bytes, bytearray)):
        line = line.decode("utf-8", errors="replace")
    m = _CLF.match(line.rstrip("\r\n"))
    if m is None:
        return None
    status = int(m["status"])
    if not 100 <= status <= 599:
        return None
    url = m["url"].split("?", 1)[0].split("#", 1)[0]
    if not url:
        return None
    nbytes = None if m["bytes"] == "-" else int(m["bytes"])
    return LogRecord(m["host"], m["ts"], m["method"], url, status, nbytes)


@dataclass
class ParseStats:
    read: int = 0
    parsed: int = 0
    skipped: int = 0

    def __str__(self):
        return f"lines read={self.read} parsed={self.parsed} skipped={self.skipped}"


def iter_records(lines: Iterable[str | bytes], stats: ParseStats | None = None) -> Iterator[LogRecord]:
    """Yield parsed records, counting skips in ``stats`` instead of failing."""
    if stats is None:
        stats = ParseStats()
    for line in lines:
        stats.read += 1
        rec = parse_log_line(line)
        if rec is None:
            stats.skipped += 1
        else:
            stats.parsed += 1
            yield rec


def read_log(path) -> tuple[list[LogRecord], ParseStats]:
    stats = ParseStats()
    with open(path, "rb") as fh:
        records = list(iter_records(fh, stats))
    log.info("%s: %s", path, stats)
    return records, stats


@dataclass(frozen=True)
class RecordFilter:
    """Which parsed records count as page accesses.

    Defaults keep successful-ish (status <= 399) GET requests. ``ext_blocklist``
    drops URLs by suffix, e.g. ``(".gif", ".css")``; matching is case-insensitive.
    """

    methods: frozenset[str] = frozenset({"GET"})
    status_max: int = 399
    ext_blocklist: tuple[str, ...] = ()

    def __call__(self, rec: LogRecord) -> bool:
        if self.methods and rec.method.upper() not in self.methods:
            return False
        if rec.status > self.status_max:
            return False
        if self.ext_blocklist and rec.url.lower().endswith(
            tuple(e.lower() for e in self.ext_blocklist)
        ):
            return False
        return True


@dataclass(frozen=True)
class AccessCounts:
    counts: dict[tuple[str, str], int]
    hosts: tuple[str, ...] = field(default=())
    urls: tuple[str, ...] = field(default=())

    @classmethod
    def from_counter(cls, counter) -> AccessCounts:
        counts = {key: int(c) for key, c in sorted(counter.items()) if c > 0}
        hosts = tuple(sorted({h for h, _ in counts}))
        urls = tuple(sorted({u for _, u in counts}))
        return cls(counts, hosts, urls)

    def merge(self, other: AccessCounts) -> AccessCounts:
        """Pointwise sum, for combining counts from separately parsed chunks."""
        c = Counter(self.counts)
        c.update(other.counts)
        return AccessCounts.from_counter(c)

    def total(self) -> int:
        return sum(self.counts.values())

    def hosts_per_url(self) -> Counter:
        return Counter(u for _, u in self.counts)


def aggregate(records: Iterable[LogRecord], filter: RecordFilter | None = None) -> AccessCounts:
    keep = filter or RecordFilter()
    counter = Counter((r.host, r.url) for r in records if keep(r))
    if not counter:
        raise EmptyLogError("empty log after filtering")
    return AccessCounts.from_counter(counter)
