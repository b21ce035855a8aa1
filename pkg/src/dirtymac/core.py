"""Channel parameters and the scalar building blocks of every bound.

All internal arithmetic is in nats; every public rate is returned in bits
per channel use. Powers are linear SNR values with unit noise variance.
"""

from dataclasses import dataclass
from functools import lru_cache
import math
from typing import NamedTuple

import numpy as np

from ._optim import INV_PHI, golden_max

LN2 = math.log(2.0)
RHO_MIN = -1.0 + 1e-9
RHO_TOL = 1e-9

# log-spaced delta grid on [1e-16, 1] shared by the R1 bounds and the helper bound
F_GRID_POINTS = 1601


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


def _check_finite(name, value, lo=None, strict=False):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    if lo is not None and (value < lo or (strict and value == lo)):
        op = ">" if strict else ">="
        raise DomainError(f"{name} must be {op} {lo}, got {value!r}")


@dataclass(frozen=True)
class ChannelParams:
    """Powers ``(P1, P2, Q)`` of ``Y = X1 + X2 + S + Z`` with ``Z ~ N(0, 1)``."""

    p1: float
    p2: float
    q: float

    def __post_init__(self):
        _check_finite("p1", self.p1, 0.0)
        _check_finite("p2", self.p2, 0.0, strict=True)
        _check_finite("q", self.q, 0.0)

    def as_tuple(self):
        return (self.p1, self.p2, self.q)


@dataclass(frozen=True)
class RatePair:
    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise DomainError(f"rates must be nonnegative, got ({self.r1}, {self.r2})")


@dataclass(frozen=True)
class DpcParams:
    """Generalized dirty-paper coding: correlation ``rho`` and coefficient ``alpha``."""

    rho: float
    alpha: float

    def __post_init__(self):
        if not -1.0 <= self.rho <= 0.0:
            raise DomainError(f"rho must lie in [-1, 0], got {self.rho}")
        _check_finite("alpha", self.alpha)


@dataclass(frozen=True)
class CorrelationTriple:
    rho1: float
    rho2: float
    rhos: float

    def __post_init__(self):
        if not 0.0 <= self.rho1 <= 1.0:
            raise DomainError(f"rho1 must lie in [0, 1], got {self.rho1}")
        if not 0.0 <= self.rho2 <= 1.0:
            raise DomainError(f"rho2 must lie in [0, 1], got {self.rho2}")
        if not -1.0 <= self.rhos <= 0.0:
            raise DomainError(f"rhos must lie in [-1, 0], got {self.rhos}")
        if self.rho1**2 + self.rhos**2 > 1.0 + 1e-12:
            raise DomainError("rho1^2 + rhos^2 must not exceed 1")


class BoundConstants(NamedTuple):
    c1: float
    c2: float
    c3: float


def capacity_awgn(p):
    """Point-to-point AWGN capacity ``1/2 log2(1 + p)`` in bits."""
    if p < 0:
        raise DomainError(f"power must be nonnegative, got {p}")
    return 0.5 * math.log2(1.0 + p)


def c2_nats(params):
    return 0.5 * math.log1p(params.p2)


def f_objective(params, rho, delta):
    """The rho-objective whose maximum over ``[-1, 0]`` is ``f(delta)``, in nats.

    Broadcasts over ``rho`` and ``delta``.
    """
    p1, p2, q = params.as_tuple()
    rho = np.asarray(rho, float)
    delta = np.asarray(delta, float)
    shared = p1 + q + 2.0 * rho * math.sqrt(p1 * q)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 0.5 * (
            np.log((1.0 + p2 + shared) / (delta + shared))
            + np.log((delta + (1.0 - rho**2) * p1) / (1.0 + p2))
        )
    return out


def f_nats(params, deltas):
    """Vectorized ``f(delta)`` in nats with the maximizing rho."""
    deltas = np.asarray(deltas, float)
    if np.any((deltas < 0) | (deltas > 1)):
        raise DomainError("delta must lie in [0, 1]")
    lo = np.full(deltas.shape, RHO_MIN)
    hi = np.zeros(deltas.shape)
    rho, val = golden_max(lambda r: f_objective(params, r, deltas), lo, hi, tol=RHO_TOL)
    return val, rho


def f_delta(params, delta):
    """``f(delta)`` in bits and its maximizing ``rho``; may be negative or ``-inf``."""
    if not 0.0 <= delta <= 1.0:
        raise DomainError(f"delta must lie in [0, 1], got {delta}")
    val, rho = _f_scalar(params, float(delta))
    return val / LN2, rho


def bound_constants(params):
    """The constants ``c1``, ``c2``, ``c3`` with natural logs (``log e = 1``)."""
    sp1, sp2, sq = math.sqrt(params.p1), math.sqrt(params.p2), math.sqrt(params.q)
    scale = math.sqrt((1.0 + params.p2) / 2.0)
    c1 = (3.0 * math.sqrt(1.0 + (sp1 + sq) ** 2 + params.p2) + 4.0 * (sp1 + sq)) / scale
    radical = math.sqrt(1.0 + (sp1 + sp2 + sq) ** 2)
    c2 = (3.0 * radical + 4.0 * (sp1 + sq)) / scale
    c3 = math.sqrt(2.0 * (1.0 + params.p2)) * (3.0 * radical + 4.0 * (sp1 + sp2 + sq))
    return BoundConstants(c1, c2, c3)


def _gap_nats(params, r2):
    gap = c2_nats(params) - r2 * LN2
    if gap < 0:
        if gap > -1e-12:
            return 0.0
        raise DomainError(f"r2={r2} bits exceeds C2={c2_nats(params) / LN2} bits")
    if r2 < 0:
        raise DomainError(f"r2 must be nonnegative, got {r2}")
    return gap


def _penalty(c, gap):
    expo = 2.0 * c * math.sqrt(gap) + 2.0 * gap
    return math.inf if expo > 700 else math.expm1(expo)


def g_of_r2(params, r2):
    """Exponential penalty ``g(R2)``; zero at ``R2 = C2``, decreasing in ``R2`` (bits)."""
    return _penalty(bound_constants(params).c1, _gap_nats(params, r2))


def g_tilde_of_r2(params, r2):
    """Same as :func:`g_of_r2` with ``c2`` in place of ``c1``."""
    return _penalty(bound_constants(params).c2, _gap_nats(params, r2))


def _delta_term(params, deltas, g):
    p2 = params.p2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return 0.5 * np.log1p((1.0 + p2 - deltas) / (p2 * deltas) * g)


def _f_scalar(params, delta):
    """Pure-float ``f(delta)`` in nats for tight refinement loops."""
    p1, p2, q = params.as_tuple()
    cross = 2.0 * math.sqrt(p1 * q)

    def obj(rho):
        shared = p1 + q + cross * rho
        den = delta + shared
        tail = delta + (1.0 - rho * rho) * p1
        if den <= 0 or tail <= 0:
            return -math.inf
        return 0.5 * (math.log((1.0 + p2 + shared) / den) + math.log(tail / (1.0 + p2)))

    n = 64
    xs = [RHO_MIN + (0.0 - RHO_MIN) * i / (n - 1) for i in range(n)]
    vals = [obj(x) for x in xs]
    i = max(range(n), key=lambda j: (vals[j], j))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = obj(c), obj(d)
    while b - a > RHO_TOL:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = obj(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = obj(d)
    mid = 0.5 * (a + b)
    fm = obj(mid)
    if fm >= vals[i]:
        return fm, mid
    return vals[i], xs[i]


@lru_cache(maxsize=256)
def f_grid(params):
    """``f`` on a fixed log-spaced ``delta`` grid, cached per parameter set."""
    deltas = np.logspace(-16.0, 0.0, F_GRID_POINTS)
    vals, _ = f_nats(params, deltas)
    return deltas, vals


def delta_min_grid(params, g):
    """Grid-only version of :func:`delta_min_nats`, vectorized over ``g``.

    Slightly above the exact minimum; used for region sampling.
    """
    deltas, fv = f_grid(params)
    g = np.asarray(g, float)
    vals = _delta_term(params, deltas, g[..., None]) + fv
    vals = np.where(np.isnan(vals), np.inf, vals)
    out = vals.min(axis=-1)
    f0 = float(f_nats(params, 0.0)[0])
    return np.where(g == 0, np.minimum(out, f0), out)


def delta_min_nats(params, g):
    """``min over delta in (0, 1]`` of ``1/2 ln(1 + (1+P2-d)/(P2 d) g) + f(d)``.

    A scan over the cached log-spaced grid of :func:`f_grid` locates the best
    bracket, which is then refined by golden section in ``ln(delta)``. When ``g == 0`` the first term vanishes and the
    ``delta -> 0`` limit ``f(0)`` is included.

    Returns ``(value_nats, delta_star)``.
    """
    deltas, fv = f_grid(params)
    vals = _delta_term(params, deltas, g) + fv
    vals = np.where(np.isnan(vals), np.inf, vals)
    i = int(np.argmin(vals))
    best, best_delta = float(vals[i]), float(deltas[i])
    p2 = params.p2

    def objective(logd):
        d = math.exp(logd)
        term = 0.5 * math.log1p((1.0 + p2 - d) / (p2 * d) * g)
        return term + _f_scalar(params, d)[0]

    if math.isfinite(best):
        a = math.log(deltas[max(i - 1, 0)])
        b = math.log(deltas[min(i + 1, len(deltas) - 1)])
        c = b - INV_PHI * (b - a)
        d = a + INV_PHI * (b - a)
        fc, fd = objective(c), objective(d)
        while b - a > 1e-7:
            if fc <= fd:
                b, d, fd = d, c, fc
                c = b - INV_PHI * (b - a)
                fc = objective(c)
            else:
                a, c, fc = c, d, fd
                d = a + INV_PHI * (b - a)
                fd = objective(d)
        x = 0.5 * (a + b)
        v = objective(x)
        if v < best:
            best, best_delta = v, math.exp(x)
    if g == 0:
        f0 = _f_scalar(params, 0.0)[0]
        if f0 <= best:
            best, best_delta = f0, 0.0
    return best, best_delta
