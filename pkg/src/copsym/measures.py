"""Dependence and non-exchangeability functionals of bivariate copulas.

Each functional returns an :class:`Entry` carrying the value, the route used
to obtain it (``closed_form``, ``quadrature`` or ``monte_carlo``) and an error
indicator: the refinement gap for quadrature, the standard error for
Monte-Carlo and zero for closed forms. Passing ``closed_forms=False`` forces
the numerical route, which is how the verification suite audits the
declared values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import quadrature as quad
from .copulas import Copula, MThetaParams, mu_key
from .quadrature import QuadratureConfig
from .sampling import drawer_for, make_rng

METHODS = ("closed_form", "quadrature", "monte_carlo")
DEFAULT_MC_PAIRS = 200_000


class MeasureError(RuntimeError):
    """No route is available to compute the requested functional."""


@dataclass(frozen=True)
class Entry:
    value: float
    method: str
    gap: float = 0.0
    converged: bool = True
    error: str | None = None

    def __float__(self):
        return self.value

    def to_dict(self) -> dict:
        out = {"value": self.value, "method": self.method, "gap": self.gap, "converged": self.converged}
        if self.error:
            out["error"] = self.error
        return out


@dataclass(frozen=True)
class MuEntry:
    p: float
    raw: float
    normalized: float
    method: str
    gap: float = 0.0
    converged: bool = True
    error: str | None = None

    def to_dict(self) -> dict:
        out = {
            "p": p_label(self.p),
            "raw": self.raw,
            "normalized": self.normalized,
            "method": self.method,
            "gap": self.gap,
            "converged": self.converged,
        }
        if self.error:
            out["error"] = self.error
        return out


@dataclass(frozen=True)
class TailCoefficients:
    lambda_lower: Entry
    lambda_upper: Entry


@dataclass
class MeasureReport:
    label: str
    rho: Entry
    tau: Entry
    beta: Entry
    sigma: Entry
    mu: dict[float, MuEntry]
    lambda_lower: Entry
    lambda_upper: Entry
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "copula": self.label,
            "rho": self.rho.to_dict(),
            "tau": self.tau.to_dict(),
            "beta": self.beta.to_dict(),
            "sigma": self.sigma.to_dict(),
            "mu": [m.to_dict() for m in self.mu.values()],
            "lambda_lower": self.lambda_lower.to_dict(),
            "lambda_upper": self.lambda_upper.to_dict(),
            "warnings": list(self.warnings),
        }


# --- exponents -------------------------------------------------------------


def parse_p(p) -> float:
    """Validate an exponent; accepts numbers and the strings 'inf'/'infinity'."""
    if isinstance(p, str):
        text = p.strip().lower()
        value = math.inf if text in ("inf", "infinity", "∞") else float(text)
    else:
        value = float(p)
    if math.isnan(value) or value < 1.0:
        raise ValueError(f"exponent p must be >= 1 or inf, got {p!r}")
    return value


def p_label(p: float) -> str:
    return "inf" if math.isinf(p) else f"{p:g}"


def mu_bound(p: float) -> float:
    """Largest value of ``mu_p`` over all copulas: 1/3 for ``p = inf``,
    ``(2 * 3^-p / ((p+1)(p+2)))^(1/p)`` otherwise."""
    p = parse_p(p)
    if math.isinf(p):
        return 1.0 / 3.0
    return (2.0 * 3.0 ** -p / ((p + 1.0) * (p + 2.0))) ** (1.0 / p)


# --- shared tabulation -----------------------------------------------------


@lru_cache(maxsize=4)
def _fields(c: Copula, cfg: QuadratureConfig) -> tuple[quad.GridField, ...]:
    return tuple(quad.tabulate(c.evaluator, n) for n in cfg.resolutions)


def _abs_pow(x: np.ndarray, p: float) -> np.ndarray:
    a = np.abs(x)
    if p == 1.0:
        return a
    if p == 2.0:
        return a * a
    # exp/log form with |x|^p = 0 at x = 0
    out = np.zeros_like(a)
    nz = a > 0.0
    out[nz] = np.exp(p * np.log(a[nz]))
    return out


def sigma_from_grid(values: np.ndarray) -> float:
    """Midpoint-rule sigma from a copula tabulated on the midpoint grid."""
    t = quad.midpoints(values.shape[0])
    return 12.0 * float(np.abs(values - np.outer(t, t)).mean())


def mu_from_grid(values: np.ndarray, p: float) -> float:
    """Midpoint-rule ``mu_p`` (finite ``p``) from a midpoint-grid tabulation."""
    return float(np.mean(_abs_pow(values - values.T, p))) ** (1.0 / p)


# --- functionals -----------------------------------------------------------


def spearman_rho(c: Copula, cfg: QuadratureConfig | None = None, *, closed_forms: bool = True) -> Entry:
    """``12 * integral(C) - 3``."""
    cf = c.closed_form("rho") if closed_forms else None
    if cf is not None:
        return Entry(cf, "closed_form")
    cfg = cfg or QuadratureConfig()
    res = quad.estimate_levels(_fields(c, cfg), lambda a: 12.0 * a.mean() - 3.0, 12.0 * cfg.tolerance)
    return Entry(res.value, "quadrature", res.gap, res.converged)


def blomqvist_beta(c: Copula) -> Entry:
    """``4 C(1/2, 1/2) - 1``: a single evaluation, always exact."""
    return Entry(4.0 * c(0.5, 0.5) - 1.0, "closed_form")


def schweizer_wolff_sigma(c: Copula, cfg: QuadratureConfig | None = None, *, closed_forms: bool = True) -> Entry:
    cf = c.closed_form("sigma") if closed_forms else None
    if cf is not None:
        return Entry(cf, "closed_form")
    cfg = cfg or QuadratureConfig()
    res = quad.estimate_levels(_fields(c, cfg), sigma_from_grid, 12.0 * cfg.tolerance)
    return Entry(res.value, "quadrature", res.gap, res.converged)


def kendall_tau_integral(c: Copula, n: int) -> float:
    """``1 - 4 * integral(d1 C * d2 C)`` with finite-difference partials."""
    d1 = quad.partial_derivative_field(c, "first", n).values
    d2 = quad.partial_derivative_field(c, "second", n).values
    return 1.0 - 4.0 * float(np.sum(d1 * d2) / d1.size)


def kendall_tau_monte_carlo(c: Copula, n_pairs: int = DEFAULT_MC_PAIRS, seed: int = 0) -> tuple[float, float]:
    """Concordance estimator from ``n_pairs`` independent pairs of draws.

    Returns the estimate and its standard error.
    """
    draws = drawer_for(c)(2 * n_pairs, make_rng(seed))
    a, b = draws[:n_pairs], draws[n_pairs:]
    signs = np.sign((a[:, 0] - b[:, 0]) * (a[:, 1] - b[:, 1]))
    est = float(signs.mean())
    se = float(signs.std() / math.sqrt(n_pairs))
    return est, se


def kendall_tau_support(params: MThetaParams, n: int = 1024) -> float:
    """Kendall's tau of M_theta by integrating C against its singular measure.

    The copula is evaluated along each support segment with the midpoint rule
    and weighted by the segment mass, so this is an independent numerical
    route for the closed form.
    """
    from .copulas import make_mtheta

    c = make_mtheta(params)
    t = quad.midpoints(n)
    total = 0.0
    for seg in params.segments:
        u, v = seg.point(t)
        total += seg.mass * float(np.mean(c(u, v)))
    return 4.0 * total - 1.0


def support_integral_oracle(theta: float) -> float:
    """``((1-theta)^2 + theta^2) / 2``, the value of ``integral(M_theta dM_theta)``."""
    return ((1.0 - theta) ** 2 + theta**2) / 2.0


def kendall_tau(
    c: Copula,
    cfg: QuadratureConfig | None = None,
    mc_samples: int | None = None,
    *,
    seed: int = 0,
    closed_forms: bool = True,
) -> Entry:
    """Kendall's tau by the first available route: closed form, the
    partial-derivative integral for absolutely continuous copulas, then the
    Monte-Carlo concordance estimator."""
    cf = c.closed_form("tau") if closed_forms else None
    if cf is not None:
        return Entry(cf, "closed_form")
    cfg = cfg or QuadratureConfig()
    if c.is_absolutely_continuous:
        coarse = kendall_tau_integral(c, cfg.n)
        fine = kendall_tau_integral(c, 2 * cfg.n)
        gap = abs(coarse - fine)
        return Entry(coarse, "quadrature", gap, gap <= 4.0 * cfg.tolerance)
    if c.has_sampler:
        est, se = kendall_tau_monte_carlo(c, mc_samples or DEFAULT_MC_PAIRS, seed)
        return Entry(est, "monte_carlo", se)
    raise MeasureError(f"no route to Kendall's tau for {c.label}: supply a closed form or a sampler")


def mu(c: Copula, p, cfg: QuadratureConfig | None = None, *, closed_forms: bool = True) -> MuEntry:
    """Non-exchangeability ``mu_p``: the L^p distance between C and its transpose.

    Both the raw value and the value divided by its largest possible value are
    returned.
    """
    p = parse_p(p)
    bound = mu_bound(p)
    cf = c.closed_form(mu_key(p)) if closed_forms else None
    if cf is not None:
        return MuEntry(p, cf, cf / bound, "closed_form")
    cfg = cfg or QuadratureConfig()
    fields = _fields(c, cfg)
    if math.isinf(p):
        base = fields[0].values
        diff = quad.GridField(cfg.n, np.abs(base - base.T))
        f = c.evaluator
        res = quad.sup_abs(lambda u, v: f(u, v) - f(v, u), cfg, field=diff)
        # grid error is at most 2/n for differences of copulas
        return MuEntry(p, res.value, res.value / bound, "quadrature", res.gap, res.gap <= 2.0 / cfg.n)

    res = quad.estimate_levels(fields, lambda a: mu_from_grid(a, p), cfg.tolerance)
    return MuEntry(p, res.value, res.value / bound, "quadrature", res.gap, res.converged)


def tail_coefficients(c: Copula, *, closed_forms: bool = True) -> TailCoefficients:
    """Lower and upper tail-dependence coefficients along the diagonal.

    Numerical limits that fail to settle are flagged through
    ``converged=False`` rather than raised.
    """
    entries = []
    for key, side, g in (
        ("lambda_lower", "zero_plus", lambda t: c(t, t) / t),
        ("lambda_upper", "one_minus", lambda t: (1.0 - 2.0 * t + c(t, t)) / (1.0 - t)),
    ):
        cf = c.closed_form(key) if closed_forms else None
        if cf is not None:
            entries.append(Entry(cf, "closed_form"))
            continue
        try:
            res = quad.diagonal_limit(g, side)
        except quad.QuadratureError as exc:
            entries.append(Entry(math.nan, "quadrature", math.nan, False, str(exc)))
            continue
        entries.append(Entry(res.value, "quadrature", res.gap, res.converged))
    return TailCoefficients(*entries)


def _guard(compute, method: str) -> Entry:
    try:
        return compute()
    except Exception as exc:  # partial reports carry per-entry error markers
        return Entry(math.nan, method, math.nan, False, f"{type(exc).__name__}: {exc}")


def full_report(
    c: Copula,
    p_list: Iterable = (1, 2, math.inf),
    cfg: QuadratureConfig | None = None,
    *,
    closed_forms: bool = True,
    mc_samples: int | None = None,
    seed: int = 0,
) -> MeasureReport:
    """Every functional for one copula, in a fixed entry order."""
    cfg = cfg or QuadratureConfig()
    mus = {}
    for p in p_list:
        p = parse_p(p)
        try:
            mus[p] = mu(c, p, cfg, closed_forms=closed_forms)
        except Exception as exc:
            mus[p] = MuEntry(p, math.nan, math.nan, "quadrature", math.nan, False, f"{type(exc).__name__}: {exc}")
    tails = tail_coefficients(c, closed_forms=closed_forms)
    report = MeasureReport(
        label=c.label,
        rho=_guard(lambda: spearman_rho(c, cfg, closed_forms=closed_forms), "quadrature"),
        tau=_guard(lambda: kendall_tau(c, cfg, mc_samples, seed=seed, closed_forms=closed_forms), "quadrature"),
        beta=_guard(lambda: blomqvist_beta(c), "closed_form"),
        sigma=_guard(lambda: schweizer_wolff_sigma(c, cfg, closed_forms=closed_forms), "quadrature"),
        mu=mus,
        lambda_lower=tails.lambda_lower,
        lambda_upper=tails.lambda_upper,
    )
    for name in ("rho", "tau", "sigma", "lambda_lower", "lambda_upper"):
        entry = getattr(report, name)
        if not entry.converged:
            report.warnings.append(f"{name}: not converged (gap {entry.gap:.3g})")
    for m in mus.values():
        if not m.converged:
            report.warnings.append(f"mu_{p_label(m.p)}: not converged (gap {m.gap:.3g})")
    return report
