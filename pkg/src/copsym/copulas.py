"""Bivariate copulas and the operators acting on them.

A :class:`Copula` wraps a vectorized evaluator ``(u, v) -> C(u, v)`` together
with capability metadata: a declared symmetry flag, an absolute-continuity
flag and a table of closed-form values for the dependence functionals.
Downstream code trusts the metadata; the test suite audits it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


def mu_key(p: float) -> str:
    """Closed-form key for the non-exchangeability measure of order ``p``."""
    return "mu_inf" if math.isinf(p) else f"mu_{p:g}"


@dataclass(frozen=True)
class UnitPoint:
    u: float
    v: float

    def __post_init__(self):
        if not (0.0 <= self.u <= 1.0 and 0.0 <= self.v <= 1.0):
            raise ValueError(f"point ({self.u}, {self.v}) lies outside the unit square")


@dataclass(frozen=True)
class Segment:
    """A line segment of the unit square carrying uniformly spread mass."""

    start: tuple[float, float]
    end: tuple[float, float]
    mass: float

    def point(self, t):
        t = np.asarray(t, dtype=float)
        (u0, v0), (u1, v1) = self.start, self.end
        return u0 + t * (u1 - u0), v0 + t * (v1 - v0)


@dataclass(frozen=True)
class MThetaParams:
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= 1.0 / 3.0):
            raise ValueError(f"theta must lie in [0, 1/3], got {self.theta!r}")

    @property
    def segments(self) -> tuple[Segment, Segment]:
        """Support of M_theta: the long segment S1 and the short segment S2."""
        th = self.theta
        s1 = Segment((0.0, th), (1.0 - th, 1.0), 1.0 - th)
        s2 = Segment((1.0 - th, 0.0), (1.0, th), th)
        return s1, s2


@dataclass(frozen=True)
class ClaytonParams:
    delta: float

    def __post_init__(self):
        if not (self.delta > 0.0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be a finite positive number, got {self.delta!r}")


@dataclass(frozen=True, eq=False)
class Copula:
    """A bivariate copula with capability metadata.

    Instances are immutable and hash by identity, so they can key caches.
    Calling the copula evaluates it with numpy broadcasting; scalar inputs give
    a Python float back.
    """

    family: str
    evaluator: Evaluator = field(repr=False)
    is_symmetric: bool
    is_absolutely_continuous: bool
    closed_forms: Mapping[str, float] = field(default_factory=dict)
    params: tuple = ()
    parts: tuple["Copula", ...] = ()

    def __call__(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        out = self.evaluator(u, v)
        return float(out) if np.ndim(out) == 0 else out

    def evaluate(self, point: UnitPoint) -> float:
        return self(point.u, point.v)

    def closed_form(self, key: str) -> float | None:
        return self.closed_forms.get(key)

    @property
    def has_sampler(self) -> bool:
        if self.family == "grid":
            return False
        return all(part.has_sampler for part in self.parts)

    @property
    def label(self) -> str:
        if self.family == "pi":
            return "Pi"
        if self.family in ("m", "w"):
            return self.family.upper()
        if self.family == "mtheta":
            return f"MTheta({self.params[0]:.6g})"
        if self.family == "clayton":
            return f"Clayton({self.params[0]:.6g})"
        if self.family == "transpose":
            return f"Transpose({self.parts[0].label})"
        if self.family == "symmetrized":
            return f"Symmetrized({self.parts[0].label})"
        if self.family == "mixture":
            left, right = self.parts
            return f"Mixture({self.params[0]:.6g}, {left.label}, {right.label})"
        return "GridBacked"

    def __repr__(self) -> str:
        return f"<Copula {self.label}>"


# --- base families ---------------------------------------------------------


def _pi(u, v):
    return u * v


def _m(u, v):
    return np.minimum(u, v)


def _w(u, v):
    return np.maximum(u + v - 1.0, 0.0)


def make_pi() -> Copula:
    cf = dict(tau=0.0, rho=0.0, beta=0.0, sigma=0.0, lambda_lower=0.0, lambda_upper=0.0)
    return Copula("pi", _pi, True, True, cf)


def make_m() -> Copula:
    cf = dict(tau=1.0, rho=1.0, beta=1.0, sigma=1.0, lambda_lower=1.0, lambda_upper=1.0)
    return Copula("m", _m, True, False, cf)


def make_w() -> Copula:
    cf = dict(tau=-1.0, rho=-1.0, beta=-1.0, sigma=1.0, lambda_lower=0.0, lambda_upper=0.0)
    return Copula("w", _w, True, False, cf)


def make_mtheta(params: MThetaParams | float) -> Copula:
    """Two-segment shuffle of Min, ``min{u, v, (u-1+theta)^+ + (v-theta)^+}``."""
    if not isinstance(params, MThetaParams):
        params = MThetaParams(float(params))
    th = params.theta

    def evaluate(u, v):
        shifted = np.maximum(u - 1.0 + th, 0.0) + np.maximum(v - th, 0.0)
        return np.minimum(np.minimum(u, v), shifted)

    tail = 1.0 if th == 0.0 else 0.0
    cf = {
        "tau": (1.0 - 2.0 * th) ** 2,
        "rho": 1.0 - 6.0 * th + 6.0 * th * th,
        "beta": 1.0 - 4.0 * th,
        "mu_inf": th,
        "lambda_lower": tail,
        "lambda_upper": tail,
    }
    if th == 0.0:
        cf["sigma"] = 1.0  # M_0 is M
    return Copula("mtheta", evaluate, th == 0.0, False, cf, params=(th,))


def make_clayton(params: ClaytonParams | float) -> Copula:
    """Clayton copula ``(u^-d + v^-d - 1)^(-1/d)`` for ``d > 0``."""
    if not isinstance(params, ClaytonParams):
        params = ClaytonParams(float(params))
    d = params.delta

    def evaluate(u, v):
        inside = (u > 0.0) & (v > 0.0)
        # 0**-d is inf; mask the axes out before the power
        us = np.where(inside, u, 1.0)
        vs = np.where(inside, v, 1.0)
        with np.errstate(over="ignore"):
            val = (us ** -d + vs ** -d - 1.0) ** (-1.0 / d)
        return np.where(inside, val, 0.0)

    cf = {"lambda_lower": 2.0 ** (-1.0 / d), "lambda_upper": 0.0}
    return Copula("clayton", evaluate, True, True, cf, params=(d,))


# --- operators -------------------------------------------------------------

_TRANSPOSE_INVARIANT = ("tau", "rho", "beta", "sigma", "lambda_lower", "lambda_upper")


def transpose(c: Copula) -> Copula:
    """The copula ``(u, v) -> C(v, u)``."""
    inner = c.evaluator

    def evaluate(u, v):
        return inner(v, u)

    # |C^t - (C^t)^t| = |C - C^t| pointwise, so mu closed forms carry over as well
    cf = {k: val for k, val in c.closed_forms.items() if k in _TRANSPOSE_INVARIANT or k.startswith("mu_")}
    return Copula("transpose", evaluate, c.is_symmetric, c.is_absolutely_continuous, cf, parts=(c,))


def symmetrize(c: Copula) -> Copula:
    """The symmetrization ``(C + C^t) / 2``.

    The two evaluations are added before halving so that ``S(u, v)`` and
    ``S(v, u)`` are computed from the same floating-point sum.
    """
    inner = c.evaluator

    def evaluate(u, v):
        return 0.5 * (inner(u, v) + inner(v, u))

    # rho and beta are linear and transpose-invariant; the diagonal is unchanged
    cf = {k: c.closed_forms[k] for k in ("rho", "beta", "lambda_lower", "lambda_upper") if k in c.closed_forms}
    return Copula("symmetrized", evaluate, True, c.is_absolutely_continuous, cf, parts=(c,))


def mixture(lam: float, left: Copula, right: Copula) -> Copula:
    """Convex combination ``lam * left + (1 - lam) * right``."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixture weight must lie in [0, 1], got {lam!r}")
    f, g = left.evaluator, right.evaluator
    rest = 1.0 - lam

    def evaluate(u, v):
        return lam * f(u, v) + rest * g(u, v)

    cf = {}
    for key in ("rho", "beta", "lambda_lower", "lambda_upper"):
        a, b = left.closed_form(key), right.closed_form(key)
        if a is not None and b is not None:
            cf[key] = lam * a + rest * b
    return Copula(
        "mixture",
        evaluate,
        left.is_symmetric and right.is_symmetric,
        left.is_absolutely_continuous and right.is_absolutely_continuous,
        cf,
        params=(lam,),
        parts=(left, right),
    )


def grid_copula(knots: np.ndarray) -> Copula:
    """Copula interpolated bilinearly from values at knots ``(i/m, j/m)``.

    ``knots`` has shape ``(m + 1, m + 1)`` with ``knots[i, j] = C(i/m, j/m)``.
    Bilinear interpolation keeps every rectangle volume a nonnegative
    combination of the knot-cell volumes.
    """
    knots = np.array(knots, dtype=float)
    if knots.ndim != 2 or knots.shape[0] != knots.shape[1] or knots.shape[0] < 2:
        raise ValueError(f"knots must be a square array with at least 2 rows, got shape {knots.shape}")
    m = knots.shape[0] - 1
    knots.setflags(write=False)

    def evaluate(u, v):
        x = np.clip(u, 0.0, 1.0) * m
        y = np.clip(v, 0.0, 1.0) * m
        i = np.minimum(np.floor(x).astype(np.intp), m - 1)
        j = np.minimum(np.floor(y).astype(np.intp), m - 1)
        fx = x - i
        fy = y - j
        c00 = knots[i, j]
        c10 = knots[i + 1, j]
        c01 = knots[i, j + 1]
        c11 = knots[i + 1, j + 1]
        return (c00 * (1 - fx) + c10 * fx) * (1 - fy) + (c01 * (1 - fx) + c11 * fx) * fy

    symmetric = bool(np.array_equal(knots, knots.T))
    # C - C^t is bilinear on every cell, so its extremes sit on the knots
    cf = {"mu_inf": float(np.abs(knots - knots.T).max())}
    return Copula("grid", evaluate, symmetric, True, cf, params=(m,))


# --- axiom audit -----------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    boundary_error: float
    min_volume: float
    frechet_violation: float
    symmetry_gap: float

    def ok(self, tol: float = 1e-12) -> bool:
        return self.boundary_error <= tol and self.min_volume >= -tol and self.frechet_violation <= tol


def check_axioms(c: Copula, n: int = 64) -> AxiomReport:
    """Audit boundary conditions, 2-increasingness and the Frechet-Hoeffding
    envelope on the node grid ``i/n``.

    Every rectangle with corners on the grid is a union of grid cells, so
    checking the cell volumes covers all of them.
    """
    t = np.linspace(0.0, 1.0, n + 1)
    U, V = np.meshgrid(t, t, indexing="ij")
    C = np.asarray(c(U, V), dtype=float)
    boundary = max(
        np.abs(C[:, 0]).max(),
        np.abs(C[0, :]).max(),
        np.abs(C[:, -1] - t).max(),
        np.abs(C[-1, :] - t).max(),
    )
    volumes = C[1:, 1:] - C[1:, :-1] - C[:-1, 1:] + C[:-1, :-1]
    upper = np.minimum(U, V)
    lower = np.maximum(U + V - 1.0, 0.0)
    frechet = max((C - upper).max(), (lower - C).max(), 0.0)
    return AxiomReport(float(boundary), float(volumes.min()), float(frechet), float(np.abs(C - C.T).max()))
