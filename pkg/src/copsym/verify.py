"""Numerical checks of the symmetrization, lower-bound, M_theta, Blomqvist and
fixed-beta construction results over seeded pools of copulas.

The checks are selected by the keys of :data:`CHECKS`, which are also the
``copsym verify`` arguments.

Every check compares a computed quantity against a bound and records the
margin, so a failing run says by how much and for which copula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import measures as ms
from . import quadrature as quad
from .copulas import (
    Copula,
    MThetaParams,
    make_clayton,
    make_m,
    make_mtheta,
    make_pi,
    make_w,
    mixture,
    symmetrize,
    transpose,
)
from .quadrature import QuadratureConfig
from .sampling import make_rng

CHECKS = {
    "1": "symmetrization removes asymmetry and keeps rho",
    "2": "sigma >= 6 mu_1",
    "3": "M_theta closed forms",
    "4": "symmetrization keeps beta",
    "corollary": "fixed beta with zero or large mu_p",
}
VERIFY_CFG = QuadratureConfig(n=512, refine_levels=1)
THETA_GRID = (0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 1.0 / 3.0)
BETA0_GRID = (-0.3, 0.0, 0.5, 0.9)
ALPHA_GRID = (0.0, 0.25, 0.5, 1.0)
CLAYTON_DELTAS = (0.5, 1.0, 2.0)
P_CHECK = (1.0, 2.0, math.inf)

TOLERANCES = {
    "symmetrized mu_p": 1e-12,
    "rho(S) - rho(C)": 2e-4,
    "sigma - 6 mu_1": 5e-3,
    "rho quadrature vs closed form": 1e-3,
    "integral of M_theta": 1e-4,
    "tau support quadrature vs closed form": 1e-10,
    "tau Monte-Carlo vs closed form": 1e-2,
    "mu_inf vs theta": 2e-3,
    "tail coefficient": 5e-3,
    "beta(S) - beta(C)": 1e-15,
    "beta(C_s) - beta0": 1e-12,
    "mu_p(C_s)": 1e-12,
    "beta(M_theta*) - beta0": 1e-15,
    "mu_p(C_alpha) scaling": 2e-3,
}


@dataclass(frozen=True)
class Check:
    subject: str
    quantity: str
    value: float
    bound: float
    margin: float

    @property
    def passed(self) -> bool:
        return self.margin >= 0.0

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "quantity": self.quantity,
            "value": self.value,
            "bound": self.bound,
            "margin": self.margin,
            "passed": self.passed,
        }


@dataclass
class VerifyReport:
    prop: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def min_margin(self) -> float:
        return min((c.margin for c in self.checks), default=math.inf)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def at_most(self, subject: str, quantity: str, value: float, tol: float):
        """Record ``|value| <= tol``."""
        self.checks.append(Check(subject, quantity, value, tol, tol - abs(value)))

    def at_least(self, subject: str, quantity: str, value: float, floor: float):
        """Record ``value >= floor``."""
        self.checks.append(Check(subject, quantity, value, floor, value - floor))


# --- random pool -----------------------------------------------------------


def random_component(rng: np.random.Generator) -> Copula:
    kind = rng.choice(["mtheta", "mtheta", "clayton", "pi", "m", "w"])
    if kind == "mtheta":
        c = make_mtheta(rng.uniform(0.0, 1.0 / 3.0))
    elif kind == "clayton":
        c = make_clayton(rng.uniform(0.5, 5.0))
    else:
        c = {"pi": make_pi, "m": make_m, "w": make_w}[kind]()
    return transpose(c) if rng.random() < 0.5 else c


def random_copula(rng: np.random.Generator) -> Copula:
    """A mixture of two random components, transposed with probability 1/2."""
    lam = rng.uniform(0.0, 1.0)
    c = mixture(lam, random_component(rng), random_component(rng))
    return transpose(c) if rng.random() < 0.5 else c


def random_pool(trials: int, seed: int) -> list[Copula]:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = make_rng(seed)
    return [random_copula(rng) for _ in range(trials)]


# --- checks ---------------------------------------------------------------


def verify_symmetrization(pool: list[Copula], cfg: QuadratureConfig = VERIFY_CFG) -> VerifyReport:
    """The symmetrization has zero mu_p and the same Spearman rho."""
    report = VerifyReport("1")
    for c in pool:
        s = symmetrize(c)
        for p in P_CHECK:
            report.at_most(s.label, f"mu_{ms.p_label(p)}", ms.mu(s, p, cfg, closed_forms=False).raw, TOLERANCES["symmetrized mu_p"])
        diff = ms.spearman_rho(s, cfg, closed_forms=False).value - ms.spearman_rho(c, cfg, closed_forms=False).value
        report.at_most(c.label, "rho(S) - rho(C)", diff, TOLERANCES["rho(S) - rho(C)"])
    return report


def verify_lower_bound(pool: list[Copula], cfg: QuadratureConfig = VERIFY_CFG) -> VerifyReport:
    """``sigma(C) >= 6 mu_1(C)`` up to quadrature slack."""
    report = VerifyReport("2")
    for c in pool:
        sigma = ms.schweizer_wolff_sigma(c, cfg, closed_forms=False).value
        mu1 = ms.mu(c, 1, cfg, closed_forms=False).raw
        report.at_least(c.label, "sigma - 6 mu_1", sigma - 6.0 * mu1, -TOLERANCES["sigma - 6 mu_1"])
    return report


def verify_mtheta(
    thetas=THETA_GRID,
    cfg: QuadratureConfig = VERIFY_CFG,
    mc_pairs: int = ms.DEFAULT_MC_PAIRS,
    seed: int = 0,
) -> VerifyReport:
    """Closed forms for tau, rho, mu_inf and the tail coefficients of M_theta
    against quadrature, Monte-Carlo and diagonal-limit oracles."""
    report = VerifyReport("3")
    for th in thetas:
        c = make_mtheta(th)
        name = c.label
        rho_cf, tau_cf = c.closed_forms["rho"], c.closed_forms["tau"]
        integral = quad.integrate(c.evaluator, cfg).value
        report.at_most(name, "integral of M_theta", integral - (2.0 - 3.0 * th + 3.0 * th * th) / 6.0, TOLERANCES["integral of M_theta"])
        report.at_most(name, "rho quadrature", ms.spearman_rho(c, cfg, closed_forms=False).value - rho_cf, TOLERANCES["rho quadrature vs closed form"])
        report.at_most(name, "tau support quadrature", ms.kendall_tau_support(MThetaParams(th)) - tau_cf, TOLERANCES["tau support quadrature vs closed form"])
        tau_mc, _ = ms.kendall_tau_monte_carlo(c, mc_pairs, seed)
        report.at_most(name, "tau Monte-Carlo", tau_mc - tau_cf, TOLERANCES["tau Monte-Carlo vs closed form"])
        report.at_most(name, "mu_inf - theta", ms.mu(c, math.inf, cfg, closed_forms=False).raw - th, TOLERANCES["mu_inf vs theta"])
        tails = ms.tail_coefficients(c, closed_forms=False)
        tol = TOLERANCES["tail coefficient"]
        for key, entry in (("lambda_lower", tails.lambda_lower), ("lambda_upper", tails.lambda_upper)):
            if th == 0.0:
                report.at_least(name, key, entry.value, 1.0 - tol)
            else:
                report.at_most(name, key, entry.value, tol)
    for d in CLAYTON_DELTAS:
        c = make_clayton(d)
        tails = ms.tail_coefficients(c, closed_forms=False)
        report.at_most(c.label, "lambda_lower - 2^(-1/delta)", tails.lambda_lower.value - 2.0 ** (-1.0 / d), TOLERANCES["tail coefficient"])
        report.at_most(c.label, "lambda_upper", tails.lambda_upper.value, TOLERANCES["tail coefficient"])
    return report


def verify_beta(pool: list[Copula]) -> VerifyReport:
    """Blomqvist's beta is unchanged by symmetrization."""
    report = VerifyReport("4")
    for c in pool:
        diff = ms.blomqvist_beta(symmetrize(c)).value - ms.blomqvist_beta(c).value
        report.at_most(c.label, "beta(S) - beta(C)", diff, TOLERANCES["beta(S) - beta(C)"])
    return report


def symmetric_with_beta(beta0: float) -> Copula:
    """``beta0 M + (1-beta0) Pi`` for ``beta0 >= 0``, ``|beta0| W + (1-|beta0|) Pi`` otherwise."""
    if beta0 >= 0.0:
        return mixture(beta0, make_m(), make_pi())
    return mixture(-beta0, make_w(), make_pi())


def verify_fixed_beta(betas=BETA0_GRID, alphas=ALPHA_GRID, cfg: QuadratureConfig = VERIFY_CFG) -> VerifyReport:
    """Fixed beta is compatible with both zero and near-maximal mu_p."""
    report = VerifyReport("corollary")
    for b0 in betas:
        cs = symmetric_with_beta(b0)
        report.at_most(cs.label, "beta(C_s) - beta0", ms.blomqvist_beta(cs).value - b0, TOLERANCES["beta(C_s) - beta0"])
        for p in P_CHECK:
            report.at_most(cs.label, f"mu_{ms.p_label(p)}(C_s)", ms.mu(cs, p, cfg, closed_forms=False).raw, TOLERANCES["mu_p(C_s)"])
        theta = (1.0 - b0) / 4.0
        m = make_mtheta(theta)
        report.at_most(m.label, "beta(M_theta*) - beta0", ms.blomqvist_beta(m).value - b0, TOLERANCES["beta(M_theta*) - beta0"])
        report.at_most(m.label, "mu_inf(M_theta*) - theta*", ms.mu(m, math.inf, cfg, closed_forms=False).raw - theta, TOLERANCES["mu_inf vs theta"])
        base = {p: ms.mu(m, p, cfg, closed_forms=False).raw for p in P_CHECK}
        for a in alphas:
            ca = mixture(a, m, transpose(m))
            report.at_most(ca.label, "beta(C_alpha) - beta0", ms.blomqvist_beta(ca).value - b0, TOLERANCES["beta(M_theta*) - beta0"])
            for p in P_CHECK:
                got = ms.mu(ca, p, cfg, closed_forms=False).raw
                report.at_most(ca.label, f"mu_{ms.p_label(p)} scaling", got - abs(2.0 * a - 1.0) * base[p], TOLERANCES["mu_p(C_alpha) scaling"])
    return report


def run(prop: str, trials: int = 50, seed: int = 0, cfg: QuadratureConfig = VERIFY_CFG) -> VerifyReport:
    prop = str(prop).lower()
    if prop not in CHECKS:
        raise ValueError(f"unknown check {prop!r}; expected one of {', '.join(CHECKS)}")
    if prop == "3":
        return verify_mtheta(cfg=cfg, seed=seed)
    if prop == "corollary":
        return verify_fixed_beta(cfg=cfg)
    pool = random_pool(trials, seed)
    if prop == "1":
        return verify_symmetrization(pool, cfg)
    if prop == "2":
        return verify_lower_bound(pool, cfg)
    return verify_beta(pool)
