"""Seeded Monte Carlo sweeps: sample G(n, M, sigma), certify, write a CSV.

Sample i of a block uses seed base_seed + i for both the edge ordering and
the certificate, so any row can be reproduced on its own.  Rows are written
in sample order whatever the worker count.
"""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

from .certify import (
    CERTIFIED_DETERMINISTIC,
    CERTIFIED_RANDOMIZED,
    INCONCLUSIVE,
    REFUTED,
    certify_count,
    core_size,
)
from .randgraph import graph_at, min_degree_threshold, sample_edge_ordering

SCHEMA = 1
COLUMNS = ["index", "n", "M", "d", "seed", "core_d1", "core_dd1", "exponent",
           "status", "evidence", "failed", "wall_time"]


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep description; ``m_rule`` is "hitting", "hitting+K" or "fixed:M"."""

    n: tuple[int, ...] = (100,)
    d: int = 2
    samples: int = 50
    seed: int = 0
    m_rule: str = "hitting"
    output: str = ""
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if isinstance(self.n, int):
            object.__setattr__(self, "n", (self.n,))
        if self.d < 1 or self.samples < 0 or self.workers < 1:
            raise ValueError("need d >= 1, samples >= 0, workers >= 1")
        if any(n < self.d + 1 for n in self.n):
            raise ValueError("every n must exceed d")
        self.m_for  # validates the rule

    @property
    def m_for(self):
        rule = self.m_rule.strip()
        if rule == "hitting":
            return lambda sigma: min_degree_threshold(sigma, self.d)
        if rule.startswith("hitting+"):
            off = int(rule[len("hitting+"):])
            return lambda sigma: min(min_degree_threshold(sigma, self.d) + off, len(sigma.rank))
        if rule.startswith("fixed:"):
            M = int(rule[len("fixed:"):])
            return lambda sigma: M
        raise ValueError(f"unknown M rule {self.m_rule!r}")

    def to_text(self) -> str:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "n":
                v = ",".join(str(x) for x in v)
            elif isinstance(v, bool):
                v = str(v).lower()
            out.append(f"{f.name}={v}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        kw: dict = {}
        known = {f.name for f in fields(cls)}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            key, val = key.strip().replace("-", "_"), val.strip()
            if not sep or key not in known:
                raise ValueError(f"bad config line: {line!r}")
            kw[key] = val
        return cls.from_mapping(kw)

    @classmethod
    def from_mapping(cls, kw: dict) -> "ExperimentConfig":
        conv = dict(kw)
        if "n" in conv and isinstance(conv["n"], str):
            conv["n"] = tuple(int(x) for x in conv["n"].split(",") if x.strip())
        for key in ("d", "samples", "seed", "workers"):
            if key in conv:
                conv[key] = int(conv[key])
        if "timing" in conv and isinstance(conv["timing"], str):
            conv["timing"] = conv["timing"].lower() in ("1", "true", "yes")
        return cls(**conv)


def _run_sample(args) -> dict:
    cfg, n, index = args
    seed = cfg.seed + index
    row = {"index": index, "n": n, "M": "", "d": cfg.d, "seed": seed, "core_d1": "", "core_dd1": "",
           "exponent": "", "status": "", "evidence": "", "failed": "", "wall_time": ""}
    t0 = time.perf_counter()
    try:
        sigma = sample_edge_ordering(n, seed)
        M = cfg.m_for(sigma)
        g = graph_at(sigma, M)
        row["M"] = M
        row["core_d1"] = core_size(g, cfg.d + 1)
        row["core_dd1"] = core_size(g, cfg.d * (cfg.d + 1))
        cert = certify_count(g, cfg.d, seed)
        row["status"] = cert.status
        row["exponent"] = cert.exponent if cert.certified else ""
        row["evidence"] = ";".join(f"{c.route}/{c.name}={int(c.passed)}" for c in cert.evidence)
        row["failed"] = cert.failed or ""
    except Exception as exc:  # recorded, never aborts the sweep
        row["status"] = "error"
        row["failed"] = f"{type(exc).__name__}: {exc}"
    if cfg.timing:
        row["wall_time"] = f"{time.perf_counter() - t0:.6f}"
    return row


def run_rows(cfg: ExperimentConfig) -> list[dict]:
    jobs = [(cfg, n, i) for n in cfg.n for i in range(cfg.samples)]
    if cfg.workers == 1:
        return [_run_sample(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(_run_sample, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))


def aggregate(rows: list[dict]) -> list[dict]:
    out = []
    for n in sorted({r["n"] for r in rows}):
        block = [r for r in rows if r["n"] == n]
        cnt = {s: sum(r["status"] == s for r in block)
               for s in (CERTIFIED_DETERMINISTIC, CERTIFIED_RANDOMIZED, INCONCLUSIVE, REFUTED, "error")}
        cert = cnt[CERTIFIED_DETERMINISTIC] + cnt[CERTIFIED_RANDOMIZED]
        out.append({"n": n, "samples": len(block), "certified": cert,
                    "certified_fraction": cert / len(block) if block else 0.0, **cnt})
    return out


def render_csv(cfg: ExperimentConfig, rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"#schema={SCHEMA}\n")
    # only fields that determine the rows, so worker count and path do not change bytes
    keep = ("n", "d", "samples", "seed", "m_rule")
    line = [kv for kv in cfg.to_text().split() if kv.split("=", 1)[0] in keep]
    buf.write("#config " + " ".join(line) + "\n")
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    for agg in aggregate(rows):
        parts = [f"{k}={v:.6f}" if isinstance(v, float) else f"{k}={v}" for k, v in agg.items()]
        buf.write("#aggregate " + " ".join(parts) + "\n")
    return buf.getvalue()


def run_experiment(cfg: ExperimentConfig) -> str:
    """Run the sweep, write the CSV to cfg.output when set, and return its text."""
    text = render_csv(cfg, run_rows(cfg))
    if cfg.output:
        with open(cfg.output, "w", newline="\n") as fh:
            fh.write(text)
    return text


def parse_csv(text: str) -> tuple[list[dict], list[dict]]:
    """Data rows and aggregate footers of a CSV written by run_experiment."""
    lines = text.splitlines()
    data = [ln for ln in lines if not ln.startswith("#")]
    rows = list(csv.DictReader(data))
    aggs = []
    for ln in lines:
        if ln.startswith("#aggregate "):
            aggs.append(dict(p.split("=", 1) for p in ln[len("#aggregate "):].split()))
    return rows, aggs


__all__ = ["ExperimentConfig", "run_experiment", "parse_csv", "aggregate", "COLUMNS", "SCHEMA"]
