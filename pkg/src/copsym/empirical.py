"""Empirical copulas, plug-in estimates and bootstrap intervals for data.

Workflow: :func:`read_csv` -> :func:`pseudo_observations` ->
:func:`estimate_report` / :func:`bootstrap`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np
from scipy import stats

from . import measures as ms
from . import quadrature as quad
from .copulas import Copula, grid_copula
from .measures import Entry, MeasureReport
from .quadrature import QuadratureConfig
from .sampling import SampleSet, make_rng

MAX_KNOTS = 256
BIAS_WARNING_N = 10_000
# resampled statistics use one grid matching the largest knot grid
BOOTSTRAP_GRID_N = 256


class DataError(ValueError):
    """Input data cannot be used for estimation."""


@dataclass(frozen=True)
class BootstrapSummary:
    functional: str
    estimate: float
    resamples: int
    ci_low: float
    ci_high: float
    level: float

    def to_dict(self) -> dict:
        return {
            "functional": self.functional,
            "estimate": self.estimate,
            "resamples": self.resamples,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "level": self.level,
        }


def read_csv(path: str | Path) -> SampleSet:
    """Read two numeric comma-separated columns.

    A first row that is not numeric is taken as a header. Blank lines are
    skipped; any other non-numeric cell raises :class:`DataError` naming the
    line.
    """
    rows = []
    seen_first = False
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            cells = [cell.strip() for cell in row]
            if not any(cells):
                continue
            if len(cells) != 2:
                raise DataError(f"line {lineno}: expected 2 columns, found {len(cells)}")
            try:
                x, y = float(cells[0]), float(cells[1])
            except ValueError:
                if not seen_first:
                    seen_first = True
                    continue
                raise DataError(f"line {lineno}: non-numeric value in {row!r}") from None
            seen_first = True
            if not (math.isfinite(x) and math.isfinite(y)):
                raise DataError(f"line {lineno}: non-finite value in {row!r}")
            rows.append((x, y))
    if not rows:
        return SampleSet(np.empty((0, 2)))
    return SampleSet(np.array(rows))


def pseudo_observations(raw: SampleSet) -> SampleSet:
    """Rank-transform each column to ``rank / (n + 1)``, ties by average rank."""
    n = len(raw)
    if n < 2:
        raise DataError(f"need at least 2 observations, got {n}")
    ranks = stats.rankdata(raw.pairs, method="average", axis=0)
    return SampleSet(ranks / (n + 1.0), kind="pseudo")


def empirical_copula(pseudo: SampleSet) -> Copula:
    """Empirical copula tabulated at knots ``(i/m, j/m)``, ``m = min(n, 256)``,
    and interpolated bilinearly in between."""
    if pseudo.kind != "pseudo":
        raise DataError("empirical_copula needs pseudo-observations; call pseudo_observations first")
    n = len(pseudo)
    if n < 2:
        raise DataError(f"need at least 2 observations, got {n}")
    for name, col in (("first", pseudo.u), ("second", pseudo.v)):
        if np.unique(col).size < 2:
            raise DataError(f"{name} column is constant; need at least 2 distinct values")
    m = min(n, MAX_KNOTS)
    # U <= i/m  <=>  ceil(U m) <= i
    iu = np.ceil(pseudo.u * m).astype(np.intp)
    iv = np.ceil(pseudo.v * m).astype(np.intp)
    counts = np.zeros((m + 1, m + 1))
    np.add.at(counts, (iu, iv), 1.0)
    knots = counts.cumsum(axis=0).cumsum(axis=1) / n
    return grid_copula(knots)


def _sample_tau(pseudo: SampleSet) -> float:
    return float(stats.kendalltau(pseudo.u, pseudo.v).statistic)


def _sample_rho(pseudo: SampleSet) -> float:
    return float(np.corrcoef(pseudo.u, pseudo.v)[0, 1])


def _tail_secant(pseudo: SampleSet) -> tuple[float, float]:
    """Secant estimates ``C_n(t,t)/t`` and ``(1-2s+C_n(s,s))/(1-s)`` at
    ``t = 1 - s = 1/sqrt(n)``."""
    n = len(pseudo)
    k = max(1, int(math.sqrt(n)))
    t = k / n
    u, v = pseudo.u, pseudo.v
    lower = np.count_nonzero((u <= t) & (v <= t)) / n / t
    s = 1.0 - t
    upper = np.count_nonzero((u > s) & (v > s)) / n / t
    return float(lower), float(upper)


def estimate_functional(pseudo: SampleSet, name: str, grid_n: int = BOOTSTRAP_GRID_N) -> float:
    """One plug-in statistic by name: rho, tau, beta, sigma or mu_<p>.

    Integrals use a single midpoint grid of resolution ``grid_n`` (no
    refinement gap), which is what resampling loops need.
    """
    if name == "rho":
        return _sample_rho(pseudo)
    if name == "tau":
        return _sample_tau(pseudo)
    if name not in ("beta", "sigma") and not name.startswith("mu_"):
        raise ValueError(f"unknown functional {name!r}; expected rho, tau, beta, sigma or mu_<p>")
    cop = empirical_copula(pseudo)
    if name == "beta":
        return ms.blomqvist_beta(cop).value
    p = None if name == "sigma" else ms.parse_p(name[3:])
    if p is not None and math.isinf(p):
        return cop.closed_forms["mu_inf"]
    values = quad.tabulate(cop.evaluator, grid_n).values
    return ms.sigma_from_grid(values) if p is None else ms.mu_from_grid(values, p)


def estimate_report(
    pseudo: SampleSet,
    p_list: Iterable = (1, 2, math.inf),
    cfg: QuadratureConfig | None = None,
) -> MeasureReport:
    """Plug-in estimates of every functional.

    Rank-based tau and rho are computed from the pairs directly; beta, sigma
    and mu_p go through the empirical copula and the quadrature engine.
    """
    if pseudo.kind != "pseudo":
        raise DataError("estimate_report needs pseudo-observations; call pseudo_observations first")
    cfg = cfg or QuadratureConfig()
    n = len(pseudo)
    cop = empirical_copula(pseudo)
    mus = {}
    for p in p_list:
        entry = ms.mu(cop, p, cfg)
        mus[entry.p] = entry
    sigma = ms.schweizer_wolff_sigma(cop, cfg)
    lower, upper = _tail_secant(pseudo)
    se = 1.0 / math.sqrt(n)
    report = MeasureReport(
        label=f"empirical(n={n})",
        rho=Entry(_sample_rho(pseudo), "monte_carlo", se),
        tau=Entry(_sample_tau(pseudo), "monte_carlo", se),
        beta=Entry(ms.blomqvist_beta(cop).value, "monte_carlo", se),
        sigma=Entry(sigma.value, "quadrature", sigma.gap, sigma.converged),
        mu=mus,
        lambda_lower=Entry(lower, "monte_carlo", se),
        lambda_upper=Entry(upper, "monte_carlo", se),
    )
    if n < BIAS_WARNING_N and any(math.isinf(p) for p in mus):
        report.warnings.append(f"mu_inf: biased low for n < {BIAS_WARNING_N} (n = {n})")
    report.warnings.append("lambda: secant estimates at t = 1/sqrt(n), not limits")
    return report


def _resample(pseudo: SampleSet, rng: np.random.Generator) -> SampleSet:
    idx = rng.integers(0, len(pseudo), len(pseudo))
    return pseudo_observations(SampleSet(pseudo.pairs[idx]))


def bootstrap(
    pseudo: SampleSet,
    functional: str,
    B: int = 500,
    level: float = 0.95,
    seed: int = 0,
    grid_n: int = BOOTSTRAP_GRID_N,
) -> BootstrapSummary:
    """Nonparametric percentile bootstrap.

    Pairs are resampled with replacement and re-ranked before the statistic
    is recomputed.
    """
    if B < 100:
        raise ValueError(f"need at least 100 resamples, got {B}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    estimate = estimate_functional(pseudo, functional, grid_n)
    rng = make_rng(seed)
    values = np.sort([estimate_functional(_resample(pseudo, rng), functional, grid_n) for _ in range(B)])
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(values, [alpha, 1.0 - alpha])
    return BootstrapSummary(functional, estimate, B, float(lo), float(hi), level)


def swap_null_quantile(
    pseudo: SampleSet,
    functional: str = "mu_1",
    R: int = 200,
    q: float = 0.95,
    seed: int = 0,
    grid_n: int = BOOTSTRAP_GRID_N,
) -> float:
    """Quantile of a non-exchangeability statistic when each pair's
    coordinates are swapped at random, which leaves an exchangeable
    distribution unchanged."""
    rng = make_rng(seed)
    pairs = pseudo.pairs
    values = []
    for _ in range(R):
        flip = rng.random(len(pairs)) < 0.5
        swapped = np.where(flip[:, None], pairs[:, ::-1], pairs)
        values.append(estimate_functional(pseudo_observations(SampleSet(swapped)), functional, grid_n))
    return float(np.quantile(values, q))

