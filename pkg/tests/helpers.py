"""Instance generators shared by tests and the acceptance module."""
from __future__ import annotations

from rigicount.certify import certify_count
from rigicount.randgraph import sample_gnm


def certified_small_instances(count: int, max_n: int = 12):
    """Yield (graph, d, certificate) for seeded random graphs that certify."""
    i = found = 0
    while found < count:
        d = 1 + i % 3
        n = min(max_n, d + 3 + (i // 3) % (max_n - d - 2))
        M = min(int((d + 1) * n / 2 + (i % 5) * n / 4), n * (n - 1) // 2)
        g = sample_gnm(n, M, i)
        i += 1
        cert = certify_count(g, d, i)
        if cert.certified:
            found += 1
            yield g, d, cert
        if i > 50 * count:
            raise RuntimeError("too few certified instances")


# (criterion number, passed, summary line) collected by tests/test_acceptance.py
ACCEPTANCE: list[tuple[int, bool, str]] = []
