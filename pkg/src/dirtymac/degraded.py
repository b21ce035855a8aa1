"""Bounds for the dirty MAC with degraded message sets.

Here the non-cognitive encoder knows both messages. The state-aware bound on
``R1`` picks up a linear penalty in ``C2 - R2``. The outer region is indexed
by three correlations and has no standalone ``R1`` cap.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import region as rg
from .core import (LN2, RHO_MIN, DomainError,
                   bound_constants, c2_nats, capacity_awgn, delta_min_grid,
                   delta_min_nats, g_tilde_of_r2, _gap_nats)
from .gaussian import GaussianVectorSystem, build_dpc_system, cond_mi
from .nondegraded import _disk, _g_array, default_r2_grid, r1_curve_region

DEG_LABELS = ("U1", "U2", "X1", "X2", "S", "Y")
TRIPLE_SAMPLES = 64


@dataclass(frozen=True)
class DegradedBoundPoint:
    r2_cap_a: float
    r2_cap_b: float
    sum_cap: float

    def __post_init__(self):
        if min(self.r2_cap_a, self.r2_cap_b, self.sum_cap) < 0:
            raise DomainError("degraded bound caps must be nonnegative")


def thm4_r1_bound(params, r2):
    g = g_tilde_of_r2(params, r2)
    k = bound_constants(params)
    val, _ = delta_min_nats(params, g)
    val += (k.c2 + k.c3) * _gap_nats(params, r2)
    return max(val / LN2, 0.0)


def thm4_region(params, r2_grid=None, r1_grid=None):
    """Outer region from :func:`thm4_r1_bound` over ``R2 <= C2`` (grid-scanned delta)."""
    if r2_grid is None:
        r2_grid = default_r2_grid(params)
    if r1_grid is None:
        r1_grid = rg.default_r1_grid(capacity_awgn(params.p1) + 0.05)
    r2_grid = np.asarray(r2_grid, float)
    k = bound_constants(params)
    gap = np.clip(c2_nats(params) - r2_grid * LN2, 0.0, None)
    r1 = (delta_min_grid(params, _g_array(params, r2_grid, k.c2)) + (k.c2 + k.c3) * gap) / LN2
    meta = {"bound": "thm4", "params": params.as_tuple()}
    return r1_curve_region(r2_grid, r1, c2_nats(params) / LN2, r1_grid, meta)


def corner_top_degraded(params):
    """Top-corner ``R1`` (clamped ``f(0)``) and whether the feasibility condition holds."""
    from .nondegraded import corner_points

    _, top, valid = corner_points(params)
    return top.r1, valid


def _free(rho1, rhos):
    return np.clip(1.0 - rho1**2 - rhos**2, 0.0, None)


def thm5_terms(params, rho1, rho2, rhos):
    """``(r2_cap_a, r2_cap_b, sum_cap)`` in bits, broadcasting over the correlations."""
    p1, p2, q = params.as_tuple()
    rho1, rho2, rhos = (np.asarray(x, float) for x in (rho1, rho2, rhos))
    free = _free(rho1, rhos)
    own = p2 * (1.0 - rho2**2)
    den = 1.0 + (math.sqrt(q) + rhos * math.sqrt(p1)) ** 2 + p1 * free
    lead = np.log1p(p1 * free)
    cap_a = 0.5 * np.log1p(own)
    cap_b = 0.5 * (lead + np.log1p(own / den))
    coh = (rho2 * math.sqrt(p2) + rho1 * math.sqrt(p1)) ** 2
    s = 0.5 * (lead + np.log1p((own + coh) / den))
    return cap_a / LN2, cap_b / LN2, s / LN2


def thm5_point(params, triple):
    a, b, s = thm5_terms(params, triple.rho1, triple.rho2, triple.rhos)
    return DegradedBoundPoint(float(a), float(b), float(s))


def _thm5_family(params):
    def family(xs):
        a, b, s = thm5_terms(params, xs[:, 0], xs[:, 1], xs[:, 2])
        return np.full(a.shape, np.inf), np.minimum(a, b), s
    return family


def _triple_feasible(xs):
    return _disk(xs[:, [0, 2]])


def thm5_region(params, grid=TRIPLE_SAMPLES, r1_grid=None, refine=True):
    """Union over feasible ``(rho1, rho2, rhos)`` on a ``grid``-per-axis lattice, refined locally."""
    if r1_grid is None:
        r1_grid = rg.default_r1_grid(capacity_awgn(params.p1 + params.p2) + 0.05)
    axes = np.meshgrid(np.linspace(0.0, 1.0, grid), np.linspace(0.0, 1.0, grid),
                       np.linspace(-1.0, 0.0, grid), indexing="ij")
    xs = np.column_stack([a.ravel() for a in axes])
    return rg.outer_family_region(_thm5_family(params), xs, [0.0, 0.0, -1.0], [1.0, 1.0, 0.0],
                                  r1_grid, feasible=_triple_feasible,
                                  meta={"bound": "thm5", "params": params.as_tuple()},
                                  refine=refine)


def prior_terms(params, rho1, rhos):
    """The prior outer bound's ``R2`` cap and sum cap (bits); ``R1`` is unconstrained."""
    p1, p2, q = params.as_tuple()
    rho1 = np.asarray(rho1, float)
    rhos = np.clip(np.asarray(rhos, float), RHO_MIN, 0.0)
    free = _free(rho1, rhos)
    r2 = 0.5 * np.log1p(p2 * free / (1.0 - rhos**2))
    num = (math.sqrt(p2) + rho1 * math.sqrt(p1)) ** 2
    den = 1.0 + p1 * free + (math.sqrt(q) + rhos * math.sqrt(p1)) ** 2
    s = 0.5 * (np.log1p(p1 * free) + np.log1p(num / den))
    return r2 / LN2, s / LN2


def prior_outer_region_deg(params, grid=128, r1_grid=None, refine=True):
    from .nondegraded import correlation_pairs

    if r1_grid is None:
        r1_grid = rg.default_r1_grid(capacity_awgn(params.p1 + params.p2) + 0.05)

    def family(xs):
        b, s = prior_terms(params, xs[:, 0], xs[:, 1])
        return np.full(b.shape, np.inf), b, s

    return rg.outer_family_region(family, correlation_pairs(grid), [0.0, -1.0], [1.0, 0.0],
                                  r1_grid, feasible=_disk,
                                  meta={"bound": "prior-deg", "params": params.as_tuple()},
                                  refine=refine)


@dataclass(frozen=True)
class DegradedInnerRates:
    r2_a: float
    r2_b: float
    sum: float
    constraint_ok: bool


def _clamp(x):
    return 0.0 if math.isnan(x) else max(x, 0.0)


def inner_expressions_deg(sys):
    """Evaluate the degraded-message-set inner-bound expressions on a Gaussian system.

    ``sys`` must carry the labels ``U1, U2, X1, X2, S, Y`` (extra labels are
    allowed) and must keep ``U1`` independent of ``S``.
    """
    if not isinstance(sys, GaussianVectorSystem) or sys.batch_shape:
        raise DomainError("expected a single GaussianVectorSystem")
    missing = set(DEG_LABELS) - set(sys.labels)
    if missing:
        raise DomainError(f"system lacks labels {sorted(missing)}")
    k = sys.block(["U1", "S"])
    scale = math.sqrt(max(k[0, 0] * k[1, 1], 0.0))
    if abs(k[0, 1]) > 1e-9 * max(scale, 1.0):
        raise DomainError(f"U1 must be independent of S; covariance {k[0, 1]:.3e}")
    leak = cond_mi(sys, ["U2"], ["S"], ["U1"])
    r2_a = cond_mi(sys, ["X2"], ["Y"], ["U1", "U2"])
    r2_b = cond_mi(sys, ["X2", "U2"], ["Y"], ["U1"]) - leak
    total = cond_mi(sys, ["X2", "U1", "U2"], ["Y"]) - leak
    slack = cond_mi(sys, ["U2"], ["Y"], ["U1", "X1"]) - leak
    ok = bool(not math.isnan(slack) and slack >= -1e-12)
    return DegradedInnerRates(_clamp(r2_a), _clamp(r2_b), _clamp(total), ok)


def dpc_degraded_system(params, dpc):
    """Embed a dirty-paper system with ``U1 = X2`` and ``U2 = U``."""
    base = build_dpc_system(params, dpc)
    names = ["X2", "U", "X1", "X2", "S", "Y"]
    idx = base.index(names)
    return GaussianVectorSystem(DEG_LABELS, base.cov[np.ix_(idx, idx)])

