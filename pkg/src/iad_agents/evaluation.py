"""KS-based evaluation of the jamming index."""

from __future__ import annotations

import bisect
import math
import statistics
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .distributions import DistributionSpec, ReferenceDist, generate_counts
from .errors import EmptySample
from .srdr import JammingAction, SrdrConfig, classify_ntd, compute_ntd

# reference fits reported for each source family; gamma and laplace are
# listed under both readings of their second parameter
FAMILY_REFERENCES: dict[str, tuple[ReferenceDist, ...]] = {
    "normal": (ReferenceDist("studentt", (2.0,)),),
    "triangular": (
        ReferenceDist("gamma", (12.06, 0.08), "scale"),
        ReferenceDist("gamma", (12.06, 0.08), "rate"),
    ),
    "uniform": (
        ReferenceDist("gamma", (4.90, 0.22), "scale"),
        ReferenceDist("gamma", (4.90, 0.22), "rate"),
    ),
    "exponential": (
        ReferenceDist("laplace", (185.71, 1.0), "scale"),
        ReferenceDist("laplace", (185.71, 1.0), "rate"),
    ),
}

STUDENT_T2 = ReferenceDist("studentt", (2.0,))


def ntd_series(counts: Sequence[int]) -> list[float]:
    if len(counts) < 2:
        raise ValueError("need at least two counts for an NTD series")
    return [compute_ntd(a, b) for a, b in zip(counts, counts[1:])]


def ratio_series(counts: Sequence[int]) -> list[float]:
    """Consecutive count ratios ``n_next / n_t`` (the alternative reading of the index)."""
    if len(counts) < 2:
        raise ValueError("need at least two counts for a ratio series")
    if any(c == 0 for c in counts[:-1]):
        raise ValueError("ratio series needs non-zero counts")
    return [b / a for a, b in zip(counts, counts[1:])]


TRANSFORMS: dict[str, Callable[[Sequence[int]], list[float]]] = {
    "ntd": ntd_series,
    "ratio": ratio_series,
}


class EmpiricalDist:
    """Step CDF of a fixed sample, usable as a KS reference."""

    def __init__(self, sample: Iterable[float]):
        self._xs = sorted(sample)
        if not self._xs:
            raise EmptySample("empirical distribution needs data")

    def cdf(self, x: float) -> float:
        return bisect.bisect_right(self._xs, x) / len(self._xs)

    def cdf_left(self, x: float) -> float:
        return bisect.bisect_left(self._xs, x) / len(self._xs)


def fitted_normal(sample: Sequence[float]) -> ReferenceDist:
    """Normal reference with the sample's mean and (population) standard deviation."""
    return ReferenceDist("normal", (statistics.fmean(sample), statistics.pstdev(sample)))


def ks_critical(n: int, alpha: float = 0.05) -> float:
    """Asymptotic one-sample critical value ``sqrt(-ln(alpha/2)/2) / sqrt(n)``."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return math.sqrt(-0.5 * math.log(alpha / 2.0)) / math.sqrt(n)


@dataclass(frozen=True)
class KsResult:
    d_stat: float
    n: int
    alpha: float
    critical: float

    @property
    def reject(self) -> bool:
        return self.d_stat > self.critical


def ks_statistic(sample: Sequence[float], dist, alpha: float = 0.05) -> KsResult:
    """One-sample KS distance between ``sample`` and ``dist``.

    ``dist`` is anything with a ``cdf`` method (optionally ``cdf_left`` for
    references with jumps) or a bare CDF callable. The empirical and
    reference CDFs are compared at both one-sided limits of every distinct
    sample point.
    """
    if not sample:
        raise EmptySample("KS statistic needs a non-empty sample")
    cdf = dist.cdf if hasattr(dist, "cdf") else dist
    cdf_left = getattr(dist, "cdf_left", cdf)
    xs = sorted(sample)
    n = len(xs)
    d = 0.0
    i = 0
    while i < n:
        x = xs[i]
        j = bisect.bisect_right(xs, x, lo=i)
        d = max(d, abs(j / n - cdf(x)), abs(i / n - cdf_left(x)))
        i = j
    return KsResult(min(d, 1.0), n, alpha, ks_critical(n, alpha))


def ks_table(sample: Sequence[float], dist) -> list[tuple[float, float, float]]:
    """(x, empirical CDF, reference CDF) at each distinct sample point, for plotting."""
    cdf = dist.cdf if hasattr(dist, "cdf") else dist
    emp = EmpiricalDist(sample)
    return [(x, emp.cdf(x), cdf(x)) for x in sorted(set(sample))]


@dataclass(frozen=True)
class Tally:
    total: int
    fh_count: int
    off_count: int

    @property
    def jamming_count(self) -> int:
        return self.fh_count + self.off_count


def tally_actions(ntds: Iterable[float], cfg: SrdrConfig = SrdrConfig()) -> Tally:
    counts = {a: 0 for a in JammingAction}
    for v in ntds:
        counts[classify_ntd(v, cfg)] += 1
    return Tally(sum(counts.values()), counts[JammingAction.FREQUENCY_HOPPING],
                 counts[JammingAction.SWITCH_OFF])


@dataclass
class ExperimentReport:
    source: str
    seed: int
    total: int
    jamming_count: int
    fh_count: int
    off_count: int
    transform: str = "ntd"
    ks_against: dict[str, float] = field(default_factory=dict)
    alpha: float = 0.05

    def __post_init__(self):
        if self.jamming_count != self.fh_count + self.off_count:
            raise ValueError("jamming count must equal frequency-hopping plus switch-off counts")
        if self.jamming_count > self.total:
            raise ValueError("more jamming samples than samples")

    @classmethod
    def from_tally(cls, source: str, seed: int, tally: Tally, **kw) -> "ExperimentReport":
        return cls(source, seed, tally.total, tally.jamming_count, tally.fh_count, tally.off_count, **kw)

    def fraction(self, count: int) -> float:
        return count / self.total if self.total else 0.0

    @property
    def jamming_fraction(self) -> float:
        return self.fraction(self.jamming_count)

    @property
    def critical(self) -> float:
        return ks_critical(self.total, self.alpha) if self.total else math.nan

    def to_lines(self) -> list[str]:
        lines = [
            f"source={self.source}",
            f"seed={self.seed}",
            f"transform={self.transform}",
            f"total={self.total}",
            f"jamming_count={self.jamming_count}",
            f"fh_count={self.fh_count}",
            f"off_count={self.off_count}",
            f"jamming_fraction={self.jamming_fraction:.6f}",
            f"fh_fraction={self.fraction(self.fh_count):.6f}",
            f"off_fraction={self.fraction(self.off_count):.6f}",
            f"alpha={self.alpha:g}",
            f"critical={self.critical:.6f}",
        ]
        for label, d in self.ks_against.items():
            verdict = "reject" if d > self.critical else "accept"
            lines.append(f"ks[{label}]={d:.6f}")
            lines.append(f"ks_decision[{label}]={verdict}")
        return lines

    def to_text(self) -> str:
        return "\n".join(self.to_lines()) + "\n"


def ks_distances(series: Sequence[float], references: Iterable[ReferenceDist]) -> dict[str, float]:
    """KS distance of ``series`` to each reference, plus a moment-fitted normal."""
    out = {}
    for ref in references:
        out[ref.label] = ks_statistic(series, ref).d_stat
    if len(series) > 1 and statistics.pstdev(series) > 0:
        out["normal(fit)"] = ks_statistic(series, fitted_normal(series)).d_stat
    return out


def run_ntd_experiment(
    spec: DistributionSpec,
    n: int,
    seed: int,
    cfg: SrdrConfig = SrdrConfig(),
    transform: str = "ntd",
    alpha: float = 0.05,
) -> ExperimentReport:
    """Generate counts, turn them into the index series, classify and KS-test it.

    Jamming decisions always use the NTD series; ``transform`` only picks the
    series handed to the KS comparisons.
    """
    if transform not in TRANSFORMS:
        raise ValueError(f"unknown transform {transform!r}")
    counts = generate_counts(spec, n, seed)
    ntds = ntd_series(counts)
    series = TRANSFORMS[transform](counts)
    refs = [STUDENT_T2, *(r for r in FAMILY_REFERENCES[spec.family] if r != STUDENT_T2)]
    return ExperimentReport.from_tally(
        str(spec), seed, tally_actions(ntds, cfg),
        transform=transform, ks_against=ks_distances(series, refs), alpha=alpha,
    )
