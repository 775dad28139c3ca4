import numpy as np
import pytest

from art1web.features import PatternMatrix


def make_matrix(rows, truth=None):
    rows = np.asarray(rows, dtype=np.uint8)
    hosts = [f"h{j:03d}" for j in range(rows.shape[0])]
    urls = [f"/u{i:03d}" for i in range(rows.shape[1])]
    gt = None if truth is None else dict(zip(hosts, truth))
    return PatternMatrix(urls, hosts, rows, gt)


def random_rows(rng, n, m):
    """``m`` random nonzero binary rows of length ``n``."""
    density = rng.uniform(0.15, 0.85)
    rows = (rng.random((m, n)) < density).astype(np.uint8)
    for r in rows:
        while not r.any():
            r[:] = rng.random(n) < density
    return rows


def brute_rand(a, b):
    hosts = list(a)
    agree = total = 0
    for i in range(len(hosts)):
        for j in range(i + 1, len(hosts)):
            x, y = hosts[i], hosts[j]
            agree += (a[x] == a[y]) == (b[x] == b[y])
            total += 1
    return agree / total


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
