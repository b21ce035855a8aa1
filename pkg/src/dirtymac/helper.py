"""The helper problem: the cognitive user only mitigates the state for user 2."""

from dataclasses import dataclass
import math

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from .core import LN2, c2_nats, delta_min_nats, f_delta, g_of_r2

R2_TOL_BITS = 1e-9
TIE_TOL = 1e-9


@dataclass(frozen=True)
class Cond1Report:
    """Outcome of the state-cancellation feasibility test.

    ``margin`` is the maximum of LHS minus RHS over the admissible alpha
    interval (units of power to the fourth); ``satisfied`` iff it is nonnegative.
    """

    satisfied: bool
    witness_alpha: float | None
    margin: float


def condition1_poly(params):
    """LHS minus RHS of the feasibility inequality as a quartic in alpha."""
    p1, p2, q = params.as_tuple()
    a = Polynomial([0.0, 1.0])
    sq = q * (a - 1.0) ** 2
    return (p1 - sq) ** 2 - a**2 * q * (p2 + 1.0 - p1 + sq)


def condition1_check(params):
    """Exact test: roots of the quartic split the alpha interval into sign-constant pieces."""
    if params.q == 0:
        return Cond1Report(True, None, math.inf)
    half = math.sqrt(params.p1 / params.q)
    lo, hi = 1.0 - half, 1.0 + half
    poly = condition1_poly(params)

    def real_roots_inside(p):
        r = p.roots()
        r = r[np.abs(r.imag) <= 1e-9 * (1.0 + np.abs(r.real))].real
        return np.sort(r[(r > lo) & (r < hi)])

    # the sign is constant between roots; the maximum sits at a critical point or an end
    knots = np.concatenate([[lo], real_roots_inside(poly), [hi]])
    cands = np.concatenate([knots, 0.5 * (knots[:-1] + knots[1:]),
                            real_roots_inside(poly.deriv())])
    vals = poly(cands)
    i = int(np.argmax(vals))
    margin = float(vals[i])
    ok = margin >= 0.0
    return Cond1Report(ok, float(cands[i]) if ok else None, margin)


def phi(params, r2):
    """``min over delta`` of the R1 bound at ``r2`` (bits, unclamped)."""
    val, _ = delta_min_nats(params, g_of_r2(params, r2))
    return val / LN2


def helper_upper_thm6(params):
    """Largest ``r2 <= C2`` at which the R1 bound is still nonnegative."""
    c2 = c2_nats(params) / LN2
    if phi(params, c2) >= 0:
        return c2
    if phi(params, 0.0) < 0:
        return 0.0
    # phi is nonincreasing in r2, so the sign change is unique
    return brentq(lambda r: phi(params, r), 0.0, c2, xtol=R2_TOL_BITS)


@dataclass(frozen=True)
class HelperBound:
    value: float
    tag: str
    thm6: float
    csum: float
    c2: float


def helper_best_upper(params):
    """Smallest of the three helper upper bounds, tagged ``csum``, ``c2`` or ``thm6``.

    Ties within 1e-9 bits resolve in that order, so ``thm6`` is reported only
    when it is strictly the tightest.
    """
    from .nondegraded import sum_rate_capacity

    csum = sum_rate_capacity(params).c_sum
    c2 = c2_nats(params) / LN2
    thm6 = helper_upper_thm6(params)
    cands = {"csum": csum, "c2": c2, "thm6": thm6}
    best = min(cands.values())
    tag = next(k for k, v in cands.items() if v <= best + TIE_TOL)
    return HelperBound(best, tag, thm6, csum, c2)


@dataclass(frozen=True)
class Corollary5Report:
    cond1: bool
    f0_nonneg: bool
    f0_bits: float

    @property
    def agree(self):
        return self.cond1 == self.f0_nonneg


def corollary5_equivalence(params, tol=1e-9):
    f0 = f_delta(params, 0.0)[0]
    return Corollary5Report(condition1_check(params).satisfied, f0 >= -tol, f0)
