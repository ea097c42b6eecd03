"""Exact and empirical distributions and the comparisons the test suite relies on.

Everything that claims *perfect* equality is done with :class:`fractions.Fraction`.
Floating point only enters through the chi-square path and the binomial
confidence half-widths.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

from scipy.stats import chi2

from .errors import InsufficientSample


@dataclass(frozen=True)
class ExactDistribution:
    """Outcome key -> exact probability.  Probabilities are positive and sum to 1."""

    outcomes: Mapping[Hashable, Fraction]

    def __post_init__(self):
        cleaned = {k: Fraction(v) for k, v in self.outcomes.items()}
        if any(v <= 0 for v in cleaned.values()):
            raise ValueError("probabilities must be positive")
        if sum(cleaned.values()) != 1:
            raise ValueError(f"probabilities sum to {sum(cleaned.values())}, not 1")
        object.__setattr__(self, "outcomes", cleaned)

    @classmethod
    def from_weights(cls, weights: Mapping[Hashable, Fraction | int]) -> "ExactDistribution":
        """Normalize nonnegative weights; zero-weight outcomes are dropped."""
        total = sum(Fraction(w) for w in weights.values())
        if total <= 0:
            raise ValueError("weights must have positive total")
        return cls({k: Fraction(w) / total for k, w in weights.items() if w})

    @classmethod
    def uniform(cls, keys: Iterable[Hashable]) -> "ExactDistribution":
        keys = set(keys)
        return cls({k: Fraction(1, len(keys)) for k in keys})

    def __getitem__(self, key) -> Fraction:
        return self.outcomes.get(key, Fraction(0))

    def __len__(self):
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def items(self):
        return self.outcomes.items()

    def support(self) -> set:
        return set(self.outcomes)

    def map(self, f: Callable[[Hashable], Hashable]) -> "ExactDistribution":
        """Push the distribution forward through ``f``."""
        out: dict = {}
        for k, p in self.outcomes.items():
            key = f(k)
            out[key] = out.get(key, Fraction(0)) + p
        return ExactDistribution(out)


@dataclass
class EmpiricalSample:
    counts: Counter = field(default_factory=Counter)
    total: int = 0

    @classmethod
    def of(cls, outcomes: Iterable[Hashable]) -> "EmpiricalSample":
        counts = Counter(outcomes)
        return cls(counts, sum(counts.values()))

    def add(self, outcome: Hashable, n: int = 1) -> None:
        self.counts[outcome] += n
        self.total += n

    def merge(self, other: "EmpiricalSample") -> "EmpiricalSample":
        return EmpiricalSample(self.counts + other.counts, self.total + other.total)

    def frequency(self, outcome: Hashable) -> float:
        return self.counts.get(outcome, 0) / self.total if self.total else 0.0

    def as_distribution(self) -> ExactDistribution:
        """The empirical measure, exactly (counts over total)."""
        return ExactDistribution({k: Fraction(c, self.total) for k, c in self.counts.items() if c})


def _as_exact(d) -> Mapping[Hashable, Fraction]:
    if isinstance(d, ExactDistribution):
        return d.outcomes
    if isinstance(d, EmpiricalSample):
        return d.as_distribution().outcomes
    return {k: Fraction(v) for k, v in d.items()}


def tv_distance(p, q) -> Fraction:
    """Half the L1 distance, exactly.  Accepts exact distributions or samples."""
    p, q = _as_exact(p), _as_exact(q)
    return sum((abs(p.get(k, 0) - q.get(k, 0)) for k in p.keys() | q.keys()), Fraction(0)) / 2


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    critical: float
    dof: int
    alpha: float

    @property
    def rejected(self) -> bool:
        return self.statistic > self.critical


def chi_square_uniform(sample: EmpiricalSample, cells: int, alpha: float = 0.001) -> ChiSquareResult:
    """Pearson test of ``sample`` against the uniform law on ``cells`` outcomes.

    Outcomes never observed count as empty cells, so ``sample`` may not hold
    more than ``cells`` distinct keys.
    """
    if cells < 2:
        raise ValueError("need at least two cells")
    if len(sample.counts) > cells:
        raise ValueError(f"sample has {len(sample.counts)} distinct outcomes, more than {cells} cells")
    expected = sample.total / cells
    if expected < 5:
        raise InsufficientSample(f"expected count {expected:.2f} per cell is below 5")
    observed = list(sample.counts.values()) + [0] * (cells - len(sample.counts))
    stat = sum((o - expected) ** 2 for o in observed) / expected
    return ChiSquareResult(stat, float(chi2.ppf(1 - alpha, cells - 1)), cells - 1, alpha)


@dataclass(frozen=True)
class AcceptanceRate:
    accepted: int
    trials: int

    @property
    def rate(self) -> float:
        return self.accepted / self.trials

    @property
    def half_width(self) -> float:
        """Three binomial standard errors at the observed rate."""
        p = self.rate
        return 3 * math.sqrt(p * (1 - p) / self.trials)

    def covers(self, p: float) -> bool:
        """Whether ``p`` is within 3 sigma of the observed rate, sigma taken at ``p``."""
        return abs(self.rate - p) <= 3 * math.sqrt(p * (1 - p) / self.trials)


def acceptance_rate(session: Callable[[int], bool], trials: int) -> AcceptanceRate:
    """Run ``session(i)`` for ``i < trials`` and count acceptances."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    return AcceptanceRate(sum(1 for i in range(trials) if session(i)), trials)


def consistency_violations(
    sample: EmpiricalSample, exact: ExactDistribution, sigmas: float = 5.0
) -> list[tuple[Hashable, float, Fraction]]:
    """Outcomes whose empirical frequency is more than ``sigmas`` standard errors off.

    Outcomes outside the exact support are violations whenever they appear.
    """
    bad = []
    n = sample.total
    for key in set(sample.counts) | set(exact.outcomes):
        p = exact[key]
        f = sample.frequency(key)
        if p == 0:
            if f:
                bad.append((key, f, p))
            continue
        if abs(f - float(p)) > sigmas * math.sqrt(float(p) * (1 - float(p)) / n):
            bad.append((key, f, p))
    return bad


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_tv(x: Fraction) -> str:
    return f"TV={format_fraction(x)}"


def _key_text(key) -> str:
    return key.hex() if isinstance(key, (bytes, bytearray)) else repr(key)


def report_table(first, second=None, sample: EmpiricalSample | None = None) -> str:
    """Plain-text table sorted by outcome key: key in hex, exact fraction(s), empirical frequency."""
    first = _as_exact(first)
    cols = [first]
    if second is not None:
        cols.append(_as_exact(second))
    keys = set().union(*cols)
    if sample is not None:
        keys |= set(sample.counts)
    lines = []
    for key in sorted(keys, key=_key_text):
        row = [_key_text(key)] + [format_fraction(Fraction(c.get(key, 0))) for c in cols]
        if sample is not None:
            row.append(f"{sample.frequency(key):.6f}")
        lines.append("  ".join(row))
    return "\n".join(lines)
