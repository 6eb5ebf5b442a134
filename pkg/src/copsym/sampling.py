"""Random draws from the copula families.

All generators are numpy's PCG64 seeded with a 64-bit integer, which gives
bit-identical streams across platforms for a fixed numpy major version.
Draw kernels take ``(n, rng)`` and return an ``(n, 2)`` array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .copulas import ClaytonParams, Copula, MThetaParams

Drawer = Callable[[int, np.random.Generator], np.ndarray]


@dataclass(frozen=True)
class SampleSet:
    """Bivariate observations, either raw data or pseudo-observations.

    Pseudo-observations lie strictly inside the unit square.
    """

    pairs: np.ndarray
    kind: str = "raw"

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValueError(f"pairs must have shape (n, 2), got {pairs.shape}")
        if self.kind not in ("raw", "pseudo"):
            raise ValueError(f"kind must be 'raw' or 'pseudo', got {self.kind!r}")
        if self.kind == "pseudo" and not np.all((pairs > 0.0) & (pairs < 1.0)):
            raise ValueError("pseudo-observations must lie strictly inside (0, 1)")
        pairs.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return self.pairs.shape[0]

    @property
    def u(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.pairs[:, 1]

    def swapped(self) -> "SampleSet":
        return SampleSet(self.pairs[:, ::-1].copy(), self.kind)


def make_rng(seed: int) -> np.random.Generator:
    if not 0 <= int(seed) < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def _uniform_open(rng: np.random.Generator, n: int) -> np.ndarray:
    # (0, 1]: keeps negative powers finite in the Clayton inversion
    return 1.0 - rng.random(n)


def draw_pi(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.random((n, 2))


def draw_m(n: int, rng: np.random.Generator) -> np.ndarray:
    t = rng.random(n)
    return np.column_stack([t, t])


def draw_w(n: int, rng: np.random.Generator) -> np.ndarray:
    t = rng.random(n)
    return np.column_stack([t, 1.0 - t])


def draw_mtheta(theta: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform mass on the two support segments of M_theta.

    With probability ``1 - theta`` a point lands on the long segment
    ``(t(1-theta), theta + t(1-theta))``, otherwise on the short one
    ``((1-theta) + t*theta, t*theta)``. Both margins are uniform.
    """
    short = rng.random(n) < theta
    t = rng.random(n)
    u = np.where(short, (1.0 - theta) + t * theta, t * (1.0 - theta))
    v = np.where(short, t * theta, theta + t * (1.0 - theta))
    return np.column_stack([u, v])


def draw_clayton(delta: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Conditional inversion: ``V = ((W^(-d/(1+d)) - 1) U^-d + 1)^(-1/d)``."""
    u = _uniform_open(rng, n)
    w = _uniform_open(rng, n)
    with np.errstate(over="ignore"):
        v = ((w ** (-delta / (1.0 + delta)) - 1.0) * u ** -delta + 1.0) ** (-1.0 / delta)
    return np.column_stack([u, v])


def draw_mixture(lam: float, left: Drawer, right: Drawer, n: int, rng: np.random.Generator) -> np.ndarray:
    """Per-draw Bernoulli(lam) choice between the two component samplers."""
    pick_left = rng.random(n) < lam
    k = int(pick_left.sum())
    out = np.empty((n, 2))
    out[pick_left] = left(k, rng)
    out[~pick_left] = right(n - k, rng)
    return out


def _swap(draw: Drawer) -> Drawer:
    return lambda n, rng: draw(n, rng)[:, ::-1]


def drawer_for(c: Copula) -> Drawer:
    """Draw kernel for any copula built from the sampled families."""
    if c.family == "pi":
        return draw_pi
    if c.family == "m":
        return draw_m
    if c.family == "w":
        return draw_w
    if c.family == "mtheta":
        th = c.params[0]
        return lambda n, rng: draw_mtheta(th, n, rng)
    if c.family == "clayton":
        d = c.params[0]
        return lambda n, rng: draw_clayton(d, n, rng)
    if c.family == "transpose":
        return _swap(drawer_for(c.parts[0]))
    if c.family == "symmetrized":
        inner = drawer_for(c.parts[0])
        return lambda n, rng: draw_mixture(0.5, inner, _swap(inner), n, rng)
    if c.family == "mixture":
        lam = c.params[0]
        left, right = (drawer_for(p) for p in c.parts)
        return lambda n, rng: draw_mixture(lam, left, right, n, rng)
    raise ValueError(f"no sampler available for {c.label}")


def _check_n(n: int) -> int:
    if int(n) < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    return int(n)


def sample(c: Copula, n: int, seed: int) -> SampleSet:
    return SampleSet(drawer_for(c)(_check_n(n), make_rng(seed)))


def sample_mtheta(params: MThetaParams, n: int, seed: int) -> SampleSet:
    return SampleSet(draw_mtheta(params.theta, _check_n(n), make_rng(seed)))


def sample_clayton(params: ClaytonParams, n: int, seed: int) -> SampleSet:
    return SampleSet(draw_clayton(params.delta, _check_n(n), make_rng(seed)))


def sample_pi(n: int, seed: int) -> SampleSet:
    return SampleSet(draw_pi(_check_n(n), make_rng(seed)))


def sample_m(n: int, seed: int) -> SampleSet:
    return SampleSet(draw_m(_check_n(n), make_rng(seed)))


def sample_w(n: int, seed: int) -> SampleSet:
    return SampleSet(draw_w(_check_n(n), make_rng(seed)))


def sample_mixture(lam: float, left_sampler: Drawer, right_sampler: Drawer, n: int, seed: int) -> SampleSet:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixture weight must lie in [0, 1], got {lam!r}")
    return SampleSet(draw_mixture(lam, left_sampler, right_sampler, _check_n(n), make_rng(seed)))
