"""Correlation, rank coherence, two-sample rank tests and rank-size fits."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .survey import ContractViolation

STRONG_CORRELATION = 0.75
ALPHA = 0.05


class UndefinedStatisticError(ArithmeticError):
    """The statistic has no value for this input (e.g. a constant series)."""


class DomainError(ValueError):
    """Input lies outside the domain of the requested model."""


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    strong: bool


@dataclass(frozen=True)
class RankCoherence:
    tau_b: float
    n: int
    concordant: int
    discordant: int
    ties_x: int  # tied in x only
    ties_y: int  # tied in y only
    ties_both: int


@dataclass(frozen=True)
class GroupTestResult:
    u_statistic: float
    z: float
    p_two_sided: float
    significant: bool
    n1: int
    n2: int


class FitModel(enum.Enum):
    POWER = "power"
    LINEAR = "linear"


@dataclass(frozen=True)
class RankSizeFit:
    """Least-squares fit of values against their descending rank.

    ``params`` is (amplitude, exponent) for POWER, y = a * r**b, and
    (intercept, slope) for LINEAR, y = c + d * r. ``r_squared`` is measured
    in the space the fit was done in (log-log for POWER).
    """

    model: FitModel
    params: tuple[float, float]
    r_squared: float
    ranks: tuple[int, ...]
    ranked_values: tuple[float, ...]
    labels: tuple[str, ...] = ()

    def predict(self, rank):
        r = np.asarray(rank, dtype=float)
        a, b = self.params
        if self.model is FitModel.POWER:
            return a * r**b
        return a + b * r


def _paired(x, y, min_n: int) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.ndim != 1 or xa.shape != ya.shape:
        raise ContractViolation(f"series lengths differ: {xa.shape} vs {ya.shape}")
    if xa.size < min_n:
        raise ContractViolation(f"need at least {min_n} paired values, got {xa.size}")
    return xa, ya


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Product-moment correlation; ``strong`` means r >= 0.75 (signed)."""
    xa, ya = _paired(x, y, 3)
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise UndefinedStatisticError("correlation is undefined for a constant series")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    return CorrelationResult(r=r, n=int(xa.size), strong=r >= STRONG_CORRELATION)


def kendall_tau_b(x: Sequence[float], y: Sequence[float]) -> RankCoherence:
    """Kendall tau-b with tie correction, from explicit pair counts."""
    xa, ya = _paired(x, y, 2)
    n = xa.size
    i, j = np.triu_indices(n, k=1)
    sx = np.sign(xa[j] - xa[i])
    sy = np.sign(ya[j] - ya[i])
    prod = sx * sy
    concordant = int(np.count_nonzero(prod > 0))
    discordant = int(np.count_nonzero(prod < 0))
    ties_both = int(np.count_nonzero((sx == 0) & (sy == 0)))
    ties_x = int(np.count_nonzero((sx == 0) & (sy != 0)))
    ties_y = int(np.count_nonzero((sx != 0) & (sy == 0)))
    n0 = n * (n - 1) // 2
    denom = (n0 - ties_x - ties_both) * (n0 - ties_y - ties_both)
    if denom == 0:
        raise UndefinedStatisticError("tau-b is undefined when one series is entirely tied")
    return RankCoherence(
        tau_b=(concordant - discordant) / math.sqrt(denom),
        n=int(n),
        concordant=concordant,
        discordant=discordant,
        ties_x=ties_x,
        ties_y=ties_y,
        ties_both=ties_both,
    )


def midranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with tied values sharing the mean of their positions."""
    arr = np.asarray(values, dtype=float)
    order = np.argsort(arr, kind="mergesort")
    ranks = np.empty(arr.size, dtype=float)
    sorted_vals = arr[order]
    start = 0
    while start < arr.size:
        stop = start
        while stop + 1 < arr.size and sorted_vals[stop + 1] == sorted_vals[start]:
            stop += 1
        ranks[order[start:stop + 1]] = (start + stop) / 2 + 1
        start = stop + 1
    return ranks


def mann_whitney_u(a: Sequence[float], b: Sequence[float], alpha: float = ALPHA) -> GroupTestResult:
    """Two-sided Mann-Whitney U test.

    U is the statistic of the first sample. The p-value uses the normal
    approximation with tie-corrected variance and a 0.5 continuity
    correction, whatever the sample sizes.
    """
    xa = np.asarray(a, dtype=float)
    xb = np.asarray(b, dtype=float)
    n1, n2 = xa.size, xb.size
    if n1 == 0 or n2 == 0:
        raise ContractViolation("both samples need at least one value")
    ranks = midranks(np.concatenate([xa, xb]))
    u = float(ranks[:n1].sum()) - n1 * (n1 + 1) / 2
    n = n1 + n2
    _, counts = np.unique(ranks, return_counts=True)
    tie_term = float(np.sum(counts**3 - counts))
    variance = n1 * n2 / 12 * ((n + 1) - tie_term / (n * (n - 1))) if n > 1 else 0.0
    mu = n1 * n2 / 2
    if variance <= 0:
        z, p = 0.0, 1.0
    else:
        shift = max(abs(u - mu) - 0.5, 0.0)
        z = math.copysign(shift / math.sqrt(variance), u - mu)
        p = min(1.0, math.erfc(abs(z) / math.sqrt(2)))
    return GroupTestResult(
        u_statistic=u, z=z, p_two_sided=p, significant=p < alpha, n1=int(n1), n2=int(n2)
    )


def compare_groups(
    groups: Mapping[str, Sequence[float]], alpha: float = ALPHA
) -> dict[tuple[str, str], GroupTestResult]:
    """Mann-Whitney test for every unordered pair of named groups."""
    if len(groups) < 2:
        raise ContractViolation("group comparison needs at least two groups")
    for name, values in groups.items():
        if len(values) == 0:
            raise ContractViolation(f"group {name!r} is empty")
    return {
        (ga, gb): mann_whitney_u(groups[ga], groups[gb], alpha)
        for ga, gb in itertools.combinations(groups, 2)
    }


def _r_squared(y: np.ndarray, fitted: np.ndarray) -> float:
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    scale = max(1.0, float(np.sum(y**2)))
    if ss_tot <= 1e-24 * scale:
        # zero-variance target: a zero-residual fit counts as perfect
        return 1.0 if ss_res <= 1e-20 * scale else 0.0
    return min(1.0, max(0.0, 1.0 - ss_res / ss_tot))


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    design = np.column_stack([np.ones_like(x), x])
    (intercept, slope), *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(intercept), float(slope)


def rank_size_fit(
    values: Sequence[float],
    model: FitModel | str,
    labels: Optional[Sequence[str]] = None,
) -> RankSizeFit:
    """Sort values in descending order and fit them against rank 1..n.

    Equal values are ordered by label when labels are given, otherwise they
    keep their input order.
    """
    model = FitModel(model.lower()) if isinstance(model, str) else model
    vals = [float(v) for v in values]
    if len(vals) < 3:
        raise ContractViolation(f"rank-size fit needs at least 3 values, got {len(vals)}")
    labs = [str(s) for s in labels] if labels is not None else [""] * len(vals)
    if len(labs) != len(vals):
        raise ContractViolation("labels and values differ in length")
    order = sorted(range(len(vals)), key=lambda k: (-vals[k], labs[k]))
    y = np.array([vals[k] for k in order])
    ranks = np.arange(1, y.size + 1, dtype=float)
    if model is FitModel.LINEAR:
        intercept, slope = _ols(ranks, y)
        params = (intercept, slope)
        r2 = _r_squared(y, intercept + slope * ranks)
    else:
        if np.any(y <= 0):
            raise DomainError("power-law fit requires strictly positive values")
        log_r, log_y = np.log(ranks), np.log(y)
        log_a, exponent = _ols(log_r, log_y)
        params = (math.exp(log_a), exponent)
        r2 = _r_squared(log_y, log_a + exponent * log_r)
    return RankSizeFit(
        model=model,
        params=params,
        r_squared=r2,
        ranks=tuple(int(r) for r in ranks),
        ranked_values=tuple(float(v) for v in y),
        labels=tuple(labs[k] for k in order) if labels is not None else (),
    )
