"""Monte Carlo campaign driver.

Simulates many tournaments under one format, measures each outcome's L1
discrepancy from a ground-truth ranking, and aggregates the empirical
distribution. Tournament k derives its random stream from (master_seed,
start_index + k), so results are bit-identical for a given spec regardless
of worker count, and a campaign may be split into sub-campaigns and merged.
"""

from __future__ import annotations

import io
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .errors import InvalidComparisonError, InvalidInputError
from .formats import FormatSpec, run_format
from .model import derive_rng
from .scoring import Ranking, l1_distance

WORKERS_ENV = "TOURNSIM_WORKERS"


@dataclass(frozen=True)
class CampaignSpec:
    format: FormatSpec
    sampler: object  # PoissonSampler or EmpiricalPoolSampler
    truth: Ranking
    n_tournaments: int
    master_seed: int
    start_index: int = 0

    def __post_init__(self):
        if self.n_tournaments < 1:
            raise InvalidInputError("n_tournaments must be >= 1")
        if set(self.truth.places) != set(self.sampler.names):
            raise InvalidInputError("truth ranking does not cover the model's teams")


@dataclass(frozen=True)
class DiscrepancyDistribution:
    """Empirical distribution of L1 distances from one campaign."""

    counts: Mapping[int, int]
    n_teams: int
    n_samples: int
    mean: float
    median: float
    quantiles: tuple[float, float, float, float]  # p5, p25, p75, p95

    @classmethod
    def from_counts(cls, counts: Mapping[int, int], n_teams: int) -> "DiscrepancyDistribution":
        bound = (n_teams * n_teams) // 2
        for v in counts:
            if v % 2 or not (0 <= v <= bound):
                raise InvalidInputError(f"impossible L1 value {v} for n={n_teams}")
        n = sum(counts.values())
        if n < 1:
            raise InvalidInputError("empty distribution")
        values = np.repeat(
            np.array(sorted(counts)), [counts[v] for v in sorted(counts)]
        )
        p5, p25, med, p75, p95 = np.percentile(values, [5, 25, 50, 75, 95])
        return cls(
            dict(sorted(counts.items())),
            n_teams,
            n,
            float(np.mean(values)),
            float(med),
            (float(p5), float(p25), float(p75), float(p95)),
        )

    @property
    def std_error(self) -> float:
        """Standard error of the mean."""
        var = (
            sum(c * (v - self.mean) ** 2 for v, c in self.counts.items())
            / self.n_samples
        )
        return (var / self.n_samples) ** 0.5

    def cdf(self, value: int) -> float:
        return sum(c for v, c in self.counts.items() if v <= value) / self.n_samples

    def to_text(self, header: Optional[Mapping[str, str]] = None) -> str:
        """Self-describing two-column histogram, byte-deterministic."""
        out = io.StringIO()
        out.write("# tournsim-histogram v1\n")
        for k, v in (header or {}).items():
            out.write(f"# {k}={v}\n")
        out.write(f"# n_teams={self.n_teams} n_samples={self.n_samples}\n")
        q = self.quantiles
        out.write(
            f"# mean={self.mean:.6f} median={self.median:.1f} "
            f"p5={q[0]:.1f} p25={q[1]:.1f} p75={q[2]:.1f} p95={q[3]:.1f}\n"
        )
        out.write("l1,count\n")
        for v in sorted(self.counts):
            out.write(f"{v},{self.counts[v]}\n")
        return out.getvalue()

    @classmethod
    def from_text(cls, text: str) -> "DiscrepancyDistribution":
        counts: dict[int, int] = {}
        n_teams = None
        for line in text.splitlines():
            line = line.strip()
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("n_teams="):
                        n_teams = int(tok.split("=", 1)[1])
                continue
            if not line or line.startswith("l1,"):
                continue
            v, c = line.split(",")
            counts[int(v)] = int(c)
        if n_teams is None:
            raise InvalidInputError("histogram file missing n_teams header")
        return cls.from_counts(counts, n_teams)


def merge_distributions(*dists: DiscrepancyDistribution) -> DiscrepancyDistribution:
    """Associative, commutative merge of count maps."""
    if not dists:
        raise InvalidInputError("nothing to merge")
    n_teams = dists[0].n_teams
    if any(d.n_teams != n_teams for d in dists):
        raise InvalidComparisonError("distributions over different team counts")
    total: Counter = Counter()
    for d in dists:
        total.update(d.counts)
    return DiscrepancyDistribution.from_counts(total, n_teams)


def _simulate_block(spec: CampaignSpec, lo: int, hi: int) -> Counter:
    counts: Counter = Counter()
    truth = spec.truth
    for k in range(lo, hi):
        rng = derive_rng(spec.master_seed, spec.start_index + k)
        try:
            outcome = run_format(spec.format, spec.sampler, rng, keep_games=False)
        except Exception as exc:
            raise type(exc)(f"tournament {spec.start_index + k}: {exc}") from exc
        counts[l1_distance(outcome.ranking, truth)] += 1
    return counts


def run_campaign(spec: CampaignSpec, workers: Optional[int] = None) -> DiscrepancyDistribution:
    """Simulate spec.n_tournaments independent format runs and aggregate
    their L1 discrepancies. Output is a pure function of the spec; worker
    count only affects wall-clock time."""
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    n = spec.n_tournaments
    if workers <= 1 or n < 2 * workers:
        counts = _simulate_block(spec, 0, n)
    else:
        bounds = np.linspace(0, n, workers + 1, dtype=int)
        counts = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_simulate_block, spec, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if hi > lo
            ]
            for f in futures:
                counts.update(f.result())
    return DiscrepancyDistribution.from_counts(counts, len(spec.sampler.names))


@dataclass(frozen=True)
class ComparisonSummary:
    """Formalized side-by-side of two discrepancy distributions; `a` is
    expected to be the better (smaller-L1) one."""

    mean_delta: float  # mean(b) - mean(a)
    median_delta: float
    dominance_holds: bool  # CDF_a(v) >= CDF_b(v) at every L1 value
    cdf_deltas: dict  # L1 value -> CDF_a(v) - CDF_b(v)


def compare_campaigns(
    a: DiscrepancyDistribution, b: DiscrepancyDistribution
) -> ComparisonSummary:
    if a.n_teams != b.n_teams:
        raise InvalidComparisonError("distributions over different team counts")
    support = sorted(set(a.counts) | set(b.counts))
    deltas = {v: a.cdf(v) - b.cdf(v) for v in support}
    return ComparisonSummary(
        mean_delta=b.mean - a.mean,
        median_delta=b.median - a.median,
        dominance_holds=all(d >= 0 for d in deltas.values()),
        cdf_deltas=deltas,
    )
