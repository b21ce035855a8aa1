"""Bounds and capacity results for the dirty MAC with independent messages."""

from dataclasses import dataclass
import math

import numpy as np

from . import region as rg
from ._optim import golden_max
from .core import (LN2, RHO_MIN, RHO_TOL, ChannelParams, DpcParams, RatePair,
                   c2_nats, capacity_awgn, delta_min_grid, delta_min_nats, f_delta,
                   f_nats, g_of_r2, bound_constants)
from .gaussian import build_dpc_system, cond_mi, inner_pentagon_batch

RHO_SAMPLES = 512
ALPHA_SAMPLES = 64
ALPHA_RANGE = (0.0, 1.5)
R2_SAMPLES = 512
IDENTITY_TOL = 1e-9


@dataclass(frozen=True)
class SumRateResult:
    c_sum: float
    rho_star: float
    achieving_pair: RatePair


def _sqrt_p1q(params):
    return math.sqrt(params.p1 * params.q)


def thm2_terms(params, rho):
    """``(R1 cap, R2 cap, sum cap)`` in bits of the rho-indexed outer pentagon."""
    rho = np.asarray(rho, float)
    r1 = 0.5 * np.log1p(params.p1 * (1.0 - rho**2)) / LN2
    r2 = np.full(rho.shape, c2_nats(params) / LN2)
    noise = 1.0 + params.p1 + params.q + 2.0 * rho * _sqrt_p1q(params)
    s = 0.5 * np.log1p(params.p2 / noise) / LN2 + r1
    return r1, r2, s


def sum_rate_objective(params, rho):
    """Sum-rate objective in nats; concave in ``rho`` on ``[-1, 0]``."""
    _, _, s = thm2_terms(params, rho)
    return s * LN2


def sum_rate_capacity(params):
    """Sum-rate capacity, its maximizing ``rho`` and the achieving rate pair."""
    rho, val = golden_max(lambda r: sum_rate_objective(params, r), -1.0, 0.0, tol=RHO_TOL)
    at_zero = float(sum_rate_objective(params, 0.0))
    if at_zero >= val:
        # ties (e.g. no state) resolve toward zero
        rho, val = 0.0, at_zero
    c_sum = val / LN2
    alt = c2_nats(params) / LN2 + f_delta(params, 1.0)[0]
    if abs(c_sum - alt) > IDENTITY_TOL:
        raise ArithmeticError(f"sum-rate identity violated: {c_sum} vs C2 + f(1) = {alt}")
    r1 = 0.5 * math.log2(1.0 + params.p1 * (1.0 - rho**2))
    r2 = max(c_sum - r1, 0.0)
    return SumRateResult(c_sum, rho, RatePair(r1, r2))


def thm1_r1_bound(params, r2):
    """Upper bound on ``R1`` given ``R2`` (bits), clamped at zero."""
    g = g_of_r2(params, r2)
    val, _ = delta_min_nats(params, g)
    return max(val / LN2, 0.0)


def default_r2_grid(params, n=R2_SAMPLES):
    """``R2`` samples clustered at ``C2``, where the penalty term varies fastest."""
    c2 = c2_nats(params)
    gaps = np.concatenate([[0.0], np.logspace(-14, math.log10(c2), n - 1)]) if c2 > 0 else [0.0]
    return np.sort(np.clip(c2 - np.asarray(gaps), 0.0, None)) / LN2


def _g_array(params, r2_bits, c):
    gap = np.clip(c2_nats(params) - np.asarray(r2_bits) * LN2, 0.0, None)
    expo = np.minimum(2.0 * c * np.sqrt(gap) + 2.0 * gap, 700.0)
    return np.expm1(expo)


def r1_curve_region(r2_grid, r1_vals, r2_cap, r1_grid, meta):
    """Region ``{R2 <= r2_cap, R1 <= B(R2)}`` for ``B`` sampled on ascending ``r2_grid``.

    ``B`` is made nonincreasing by a running max from the right, then the
    curve is transposed: the frontier at ``R1`` is the largest ``R2`` with
    ``B(R2) >= R1``, linearly interpolated between samples.
    """
    r2 = np.asarray(r2_grid, float)
    b = np.maximum(np.asarray(r1_vals, float), 0.0)
    keep = r2 <= r2_cap
    r2, b = r2[keep], b[keep]
    if r2.size == 0 or r2[-1] < r2_cap:
        # B is nonincreasing, so the last kept sample bounds B at the cap
        r2 = np.append(r2, r2_cap)
        b = np.append(b, b[-1] if b.size else 0.0)
    b = np.maximum.accumulate(b[::-1])[::-1]
    extent = float(b[0])
    # the curve's own samples join the grid so the frontier is exact there
    grid = np.unique(np.concatenate([np.asarray(r1_grid, float), b]))
    # ascending-B view; on plateaus of B keep the largest R2 (first occurrence)
    bs, first = np.unique(b[::-1], return_index=True)
    r2s = r2[::-1][first]
    frontier = np.interp(grid, bs, r2s, left=r2_cap)
    frontier = np.where(grid <= extent, frontier, 0.0)
    frontier = np.minimum.accumulate(np.clip(frontier, 0.0, r2_cap))
    return rg.RateRegion(grid, frontier, extent, meta)


def thm1_region(params, r2_grid=None, r1_grid=None):
    """Outer region from the R1 bound as a function of R2, capped at the helper bound."""
    from .helper import helper_best_upper

    if r2_grid is None:
        r2_grid = default_r2_grid(params)
    if r1_grid is None:
        r1_grid = rg.default_r1_grid(capacity_awgn(params.p1) + 0.05)
    g = _g_array(params, r2_grid, bound_constants(params).c1)
    r1 = delta_min_grid(params, g) / LN2
    cap = helper_best_upper(params).value
    meta = {"bound": "thm1", "params": params.as_tuple(), "clamped": bool(np.any(r1 < 0))}
    return r1_curve_region(r2_grid, r1, cap, r1_grid, meta)


def thm2_region(params, rho_grid=None, r1_grid=None, refine=True):
    """Union over rho of the sum-rate-limited outer pentagons."""
    if rho_grid is None:
        rho_grid = np.linspace(-1.0, 0.0, RHO_SAMPLES)
    if r1_grid is None:
        r1_grid = rg.default_r1_grid(capacity_awgn(params.p1) + 0.05)

    def family(xs):
        return thm2_terms(params, xs[:, 0])

    return rg.outer_family_region(family, np.asarray(rho_grid)[:, None], [-1.0], [0.0],
                                  r1_grid, meta={"bound": "thm2", "params": params.as_tuple()},
                                  refine=refine)


def genie_terms(params, rho1, rhos):
    """Four-inequality genie-aided pentagon, returned as (R1 cap, R2 cap, sum cap) bits."""
    p1, p2, q = params.as_tuple()
    rho1 = np.asarray(rho1, float)
    rhos = np.clip(np.asarray(rhos, float), RHO_MIN, 0.0)
    free = np.clip(1.0 - rho1**2 - rhos**2, 0.0, None)
    r1 = 0.5 * np.log1p(p1 * free)
    r2 = 0.5 * np.log1p(p2 * free / (1.0 - rhos**2))
    num = (math.sqrt(p2) + rho1 * math.sqrt(p1)) ** 2
    den = 1.0 + p1 * free + (math.sqrt(q) + rhos * math.sqrt(p1)) ** 2
    s = np.minimum(r1 + 0.5 * np.log1p(num / den), 0.5 * math.log1p(p1 + p2))
    return r1 / LN2, r2 / LN2, s / LN2


def _disk(xs):
    return xs[:, 0] ** 2 + xs[:, 1] ** 2 <= 1.0


def correlation_pairs(n):
    r1, rs = np.meshgrid(np.linspace(0.0, 1.0, n), np.linspace(-1.0, 0.0, n), indexing="ij")
    xs = np.column_stack([r1.ravel(), rs.ravel()])
    return xs[_disk(xs)]


def genie_outer_region(params, grid=128, r1_grid=None, refine=True):
    if r1_grid is None:
        r1_grid = rg.default_r1_grid(capacity_awgn(params.p1) + 0.05)

    def family(xs):
        return genie_terms(params, xs[:, 0], xs[:, 1])

    return rg.outer_family_region(family, correlation_pairs(grid), [0.0, -1.0], [1.0, 0.0],
                                  r1_grid, feasible=_disk,
                                  meta={"bound": "genie", "params": params.as_tuple()},
                                  refine=refine)


def alpha_star(params, rho):
    """Dirty-paper coefficient for the interference-free equivalent channel."""
    eff = params.p1 * (1.0 - np.asarray(rho) ** 2)
    return eff / (eff + 1.0)


def inner_region_nondeg(params, rho_grid=None, alpha_grid=None, r1_grid=None, hull=True):
    """Convex hull of the union of Gaussian generalized-DPC pentagons.

    The alpha sweep always includes the per-rho dirty-paper coefficient and
    ``alpha = 1``; it is widened once if the frontier is attained at the sweep
    edge.
    """
    if rho_grid is None:
        rho_grid = np.linspace(RHO_MIN, 0.0, RHO_SAMPLES)
    if params.q == 0:
        rho_grid = np.zeros(1)
    rho_grid = np.asarray(rho_grid, float)
    if r1_grid is None:
        r1_grid = rg.default_r1_grid(capacity_awgn(params.p1) + 0.05)
    widen = alpha_grid is None
    if alpha_grid is None:
        alpha_grid = np.linspace(*ALPHA_RANGE, ALPHA_SAMPLES)
    alpha_grid = np.asarray(alpha_grid, float)

    def pentagons(alphas):
        rr, aa = np.meshgrid(rho_grid, alphas, indexing="ij")
        # alpha = 1 (U = X1 + S) reaches the top corner; alpha* the interference-free rate
        extra = np.column_stack([alpha_star(params, rho_grid), np.ones_like(rho_grid)])
        aa = np.concatenate([aa, extra], axis=1)
        rr = np.concatenate([rr, np.repeat(rho_grid[:, None], 2, axis=1)], axis=1)
        return rr.ravel(), aa.ravel(), inner_pentagon_batch(params, rr.ravel(), aa.ravel())

    rr, aa, (a, b, s) = pentagons(alpha_grid)
    if widen:
        region = rg.frontier_from_pentagons(a, b, s, r1_grid)
        used = aa[rg.argmax_members(a, b, s, region.grid_r1)]
        if np.any(np.isclose(used, alpha_grid.max())):
            alpha_grid = np.linspace(ALPHA_RANGE[0], 2 * ALPHA_RANGE[1], 2 * ALPHA_SAMPLES)
            rr, aa, (a, b, s) = pentagons(alpha_grid)
    meta = {"bound": "inner", "params": params.as_tuple(),
            "alpha_range": [float(alpha_grid.min()), float(alpha_grid.max())]}
    region = rg.frontier_from_pentagons(a, b, s, r1_grid, meta)
    return rg.convex_hull(region) if hull else region


def corner_points(params):
    """Bottom ``(C1, C~2)`` and top ``(f(0), C2)`` corners and Condition 1 validity."""
    from .helper import condition1_check

    bottom = RatePair(capacity_awgn(params.p1),
                      0.5 * math.log2(1.0 + params.p2 / (1.0 + params.p1 + params.q)))
    f0 = f_delta(params, 0.0)[0]
    top = RatePair(max(f0, 0.0), capacity_awgn(params.p2))
    return bottom, top, condition1_check(params).satisfied


def r1_threshold(params):
    """``I(U*;Y) - I(U*;S)`` at the sum-rate-optimal DPC parameters, clamped at 0."""
    if params.q == 0:
        return 0.0
    sr = sum_rate_capacity(params)
    rho = max(sr.rho_star, RHO_MIN)
    sys = build_dpc_system(params, DpcParams(rho, float(alpha_star(params, rho))))
    val = cond_mi(sys, ["U"], ["Y"]) - cond_mi(sys, ["U"], ["S"])
    return max(float(val), 0.0)


def cor1_region(params, rho_samples=RHO_SAMPLES, r1_grid=None):
    """Candidate capacity region when the helper capacity equals the sum capacity.

    Returns ``(region, applicable)``; the flag compares the best computable
    helper upper bound with the sum capacity at 1e-3 bits.
    """
    from .helper import helper_best_upper

    sr = sum_rate_capacity(params)
    if r1_grid is None:
        r1_grid = rg.default_r1_grid(capacity_awgn(params.p1) + 0.05)
    rhos = np.linspace(sr.rho_star, 0.0, rho_samples)
    a, _, s = thm2_terms(params, rhos)
    region = rg.frontier_from_pentagons(a, np.full(a.shape, np.inf), s, r1_grid,
                                        {"bound": "cor1", "params": params.as_tuple()})
    applicable = abs(helper_best_upper(params).value - sr.c_sum) <= 1e-3
    return rg.convex_hull(region), applicable


def f_min_over_delta(params, n=401):
    """Grid minimum of ``f`` over ``[0, 1]`` and where it occurs."""
    deltas = np.linspace(0.0, 1.0, n)
    vals, _ = f_nats(params, deltas)
    i = int(np.argmin(vals))
    return float(vals[i]) / LN2, float(deltas[i])
