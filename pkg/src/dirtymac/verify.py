"""Numerical checks of the structural claims behind the bounds.

Each check returns a small report object and never raises on failure, so
the CLI can print witnesses. :func:`run_suite` bundles them with seeded
random parameter draws.
"""

from dataclasses import dataclass, field
import math
import time

import numpy as np

from . import region as rg
from .core import LN2, ChannelParams, DomainError, c2_nats, f_delta, f_objective
from .helper import condition1_check, corollary5_equivalence
from .nondegraded import (genie_outer_region, inner_region_nondeg, sum_rate_capacity,
                          thm1_region, thm2_region)
from .degraded import prior_outer_region_deg, thm5_region

# odd so that rho = 0 is a grid point
KKT_GRID = 401


@dataclass(frozen=True)
class XiPoint:
    a: float
    b: float
    q: float

    def __post_init__(self):
        if self.q < 0:
            raise DomainError("q must be nonnegative")
        if self.a**2 > self.b:
            raise DomainError(f"need a^2 <= b, got a={self.a}, b={self.b}")


def xi_nats(a, b, q):
    return 0.5 * np.log1p((math.sqrt(q) - a) ** 2 / (1.0 + b - a * a))


def xi_and_hessian(pt):
    """``(xi in bits, H11, det H)``; the Hessian is that of ``xi`` in nats.

    With ``D = 1 + b - a^2`` and ``E = D + (sqrt(Q) - a)^2 = 1 + b + Q - 2a sqrt(Q)``,
    ``xi = (ln E - ln D) / 2`` so every entry follows from two rational terms.
    """
    a, b, q = pt.a, pt.b, pt.q
    d = 1.0 + b - a * a
    if d <= 0:
        raise DomainError("1 + b - a^2 must be positive")
    sq = math.sqrt(q)
    e = d + (sq - a) ** 2
    h11 = (d + 2.0 * a * a) / d**2 - 2.0 * q / e**2
    # det H = h11 h22 - h12^2 simplifies to (sqrt(Q) - a)^4 / (2 D^3 E^2)
    det = (sq - a) ** 4 / (2.0 * d**3 * e**2)
    return float(xi_nats(a, b, q)) / LN2, h11, det


def hessian_entries(pt):
    """All three second partials of ``xi`` (nats)."""
    a, b, q = pt.a, pt.b, pt.q
    d = 1.0 + b - a * a
    sq = math.sqrt(q)
    e = d + (sq - a) ** 2
    h11 = (d + 2.0 * a * a) / d**2 - 2.0 * q / e**2
    h22 = 0.5 * (1.0 / d**2 - 1.0 / e**2)
    h12 = sq / e**2 - a / d**2
    return h11, h12, h22


def finite_difference_hessian(pt, rel_step=1e-5):
    """Central differences with step ``rel_step * (1 + b - a^2)``, the local length scale."""
    a, b, q = pt.a, pt.b, pt.q
    h = rel_step * (1.0 + b - a * a)

    def f(x, y):
        return float(xi_nats(x, y, q))

    h11 = (f(a + h, b) - 2 * f(a, b) + f(a - h, b)) / h**2
    h22 = (f(a, b + h) - 2 * f(a, b) + f(a, b - h)) / h**2
    h12 = (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) / (4 * h**2)
    return h11, h12, h22


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0


def hessian_check(n=10_000, seed=0, rel=1e-4):
    """Closed-form Hessian is PSD and agrees with central differences."""
    rng = np.random.default_rng(seed)
    worst_sign, worst_rel, witness = 0.0, 0.0, None
    for _ in range(n):
        q = float(10 ** rng.uniform(-2, 2))
        a = float(rng.uniform(-3, 3))
        b = a * a + float(10 ** rng.uniform(-2, 1.5))
        pt = XiPoint(a, b, q)
        _, h11, det = xi_and_hessian(pt)
        worst_sign = min(worst_sign, h11, det)
        exact = hessian_entries(pt)
        approx = finite_difference_hessian(pt)
        scale = max(abs(x) for x in exact)
        err = max(abs(x - y) for x, y in zip(exact, approx)) / scale
        if err > worst_rel:
            worst_rel, witness = err, (a, b, q)
    ok = worst_sign >= -1e-12 and worst_rel <= rel
    return CheckResult("hessian", ok, {"min_entry": worst_sign, "max_rel_err": worst_rel,
                                       "witness": witness})


@dataclass(frozen=True)
class KktReport:
    binding: bool
    rho_nonpositive: bool
    matches_f: bool
    grid_max_bits: float
    f_bits: float
    argmax: tuple


def kkt_objective(params, b, rho, delta):
    """The two-variable objective before the power constraint is made tight (nats)."""
    p1, p2, q = params.as_tuple()
    shift = q + 2.0 * rho * math.sqrt(p1 * q) + rho**2 * p1
    with np.errstate(divide="ignore", invalid="ignore"):
        return 0.5 * (np.log(1.0 + p2 + b + shift) + np.log(delta + b)
                      - np.log(delta + b + shift) - math.log1p(p2))


def kkt_boundary_check(params, delta, n=KKT_GRID):
    """Brute-force the ``(b, rho)`` maximization and test the binding-constraint claim.

    The grid covers ``rho in [-1, 1]`` and ``b in [0, P1]``; the boundary
    ``b = P1 (1 - rho^2)`` is sampled too, so a binding optimum is
    representable exactly.
    """
    p1 = params.p1
    rho = np.linspace(-1.0, 1.0, n)
    frac = np.linspace(0.0, 1.0, n)
    cap = p1 * (1.0 - rho**2)
    bb = cap[None, :] * frac[:, None]
    rr = np.broadcast_to(rho, bb.shape)
    vals = kkt_objective(params, bb, rr, delta)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    top = vals.max()
    # ties (e.g. P1 = 0) resolve toward rho closest to zero, nonpositive first
    cand = np.argwhere(vals >= top - 1e-12 * max(1.0, abs(top)) if np.isfinite(top) else vals == top)
    key = [(abs(rho[j]), rho[j] > 0, -frac[i]) for i, j in cand]
    i, j = cand[min(range(len(cand)), key=key.__getitem__)]
    b_star, r_star = float(bb[i, j]), float(rho[j])
    resolution = p1 / (n - 1) + 2.0 * p1 * abs(r_star) * (2.0 / (n - 1))
    binding = abs(b_star - p1 * (1.0 - r_star**2)) <= resolution
    f_bits = f_delta(params, delta)[0]
    g_bits = top / LN2
    if np.isfinite(f_bits):
        matches = abs(g_bits - f_bits) <= 1e-4
    else:
        matches = not np.isfinite(g_bits)
    return KktReport(bool(binding), r_star <= 1e-12, bool(matches), float(g_bits), f_bits,
                     (b_star, r_star))


def kkt_design():
    for p1 in (0.5, 1.0, 2.5, 5.0, 10.0):
        # no q equals a p1: there the delta = 0 supremum sits at the singular corner rho = -1
        for q in (0.7, 3.0, 7.0, 12.0, 50.0):
            for delta in (0.0, 0.5, 1.0):
                yield ChannelParams(p1, 5.0, q), delta


def kkt_check():
    bad = []
    for params, delta in kkt_design():
        rep = kkt_boundary_check(params, delta)
        if not (rep.binding and rep.rho_nonpositive and rep.matches_f):
            bad.append({"params": params.as_tuple(), "delta": delta, "argmax": rep.argmax,
                        "grid_max": rep.grid_max_bits, "f": rep.f_bits})
    return CheckResult("kkt", not bad, {"cases": 75, "failures": bad})


def remark1_concavity_check(params, delta, n_points=200):
    """Largest central second difference of the rho-objective on the open interval."""
    h = 1.0 / (n_points + 1)
    rho = np.linspace(-1.0 + h, -h, n_points)
    lo = f_objective(params, rho - h, delta)
    mid = f_objective(params, rho, delta)
    hi = f_objective(params, rho + h, delta)
    second = lo - 2.0 * mid + hi
    second = second[np.isfinite(second)]
    return float(second.max()) if second.size else -math.inf


def concavity_check(samples, tol=1e-8):
    worst, witness = -math.inf, None
    for params in samples:
        for delta in (0.0, 0.25, 1.0):
            val = remark1_concavity_check(params, delta)
            if val > worst:
                worst, witness = val, (params.as_tuple(), delta)
    return CheckResult("concavity", worst <= tol, {"max_second_difference": worst,
                                                   "witness": witness})


def random_params(rng, n, lo=-2.0, hi=2.0):
    """Log-uniform powers in ``[10^lo, 10^hi]``."""
    return [ChannelParams(*(10 ** rng.uniform(lo, hi, 3))) for _ in range(n)]


def identity_check(samples, tol=1e-9):
    worst, witness = 0.0, None
    for params in samples:
        # sum_rate_capacity raises if the identity fails; compare again for the report
        try:
            c = sum_rate_capacity(params).c_sum
        except ArithmeticError as exc:
            return CheckResult("sum_rate_identity", False, {"witness": params.as_tuple(),
                                                            "error": str(exc)})
        gap = abs(c - c2_nats(params) / LN2 - f_delta(params, 1.0)[0])
        if gap > worst:
            worst, witness = gap, params.as_tuple()
    return CheckResult("sum_rate_identity", worst <= tol, {"max_gap": worst, "witness": witness})


def corollary5_check(samples, band=1e-4):
    hard, banded = [], 0
    for params in samples:
        rep = corollary5_equivalence(params, tol=1e-6)
        if rep.agree:
            continue
        if abs(rep.f0_bits) <= band:
            banded += 1
        else:
            hard.append({"params": params.as_tuple(), "f0": rep.f0_bits, "cond1": rep.cond1})
    return CheckResult("corollary5", not hard, {"samples": len(samples), "band_cases": banded,
                                                "disagreements": hard})


def containment_report(params, tol=1e-3, grid=rg.DEFAULT_GRID):
    """All documented containments at one parameter point; returns name -> Containment."""
    r1_grid = rg.default_r1_grid(0.5 * math.log2(1.0 + params.p1 + params.p2) + 0.05, grid)
    inner = inner_region_nondeg(params, r1_grid=r1_grid)
    t2 = thm2_region(params, r1_grid=r1_grid)
    genie = genie_outer_region(params, r1_grid=r1_grid)
    t1 = thm1_region(params, r1_grid=r1_grid)
    t5 = thm5_region(params, grid=32, r1_grid=r1_grid)
    prior = prior_outer_region_deg(params, r1_grid=r1_grid)
    return {
        "inner<=thm2": rg.contains(t2, inner, tol),
        "thm2<=genie": rg.contains(genie, t2, tol),
        "inner<=thm1": rg.contains(t1, inner, tol),
        "thm5<=prior-deg": rg.contains(prior, t5, tol),
        "inner<=thm5": rg.contains(t5, inner, tol),
    }


def containment_check(samples, tol=1e-3):
    failures = []
    for params in samples:
        for name, res in containment_report(params, tol).items():
            if not res.ok:
                failures.append({"params": params.as_tuple(), "check": name,
                                 "violation": res.violation, "at_r1": res.at_r1})
    return CheckResult("containments", not failures, {"samples": len(samples),
                                                      "failures": failures})


def condition1_interval_check(samples):
    bad = []
    for params in samples:
        rep = condition1_check(params)
        if rep.witness_alpha is None:
            continue
        half = math.sqrt(params.p1 / params.q)
        if not 1 - half - 1e-12 <= rep.witness_alpha <= 1 + half + 1e-12:
            bad.append(params.as_tuple())
    return CheckResult("condition1_witness", not bad, {"outside": bad})


def run_suite(seed=0, n_identity=200, n_cor5=500, n_regions=5, n_hessian=10_000):
    """Run every check with reproducible random draws; returns a list of results."""
    rng = np.random.default_rng(seed)
    jobs = [
        ("sum_rate_identity", lambda: identity_check(random_params(rng, n_identity))),
        ("corollary5", lambda: corollary5_check(random_params(rng, n_cor5))),
        ("condition1_witness", lambda: condition1_interval_check(random_params(rng, 100))),
        ("concavity", lambda: concavity_check(random_params(rng, 20))),
        ("hessian", lambda: hessian_check(n_hessian, seed)),
        ("kkt", kkt_check),
        ("containments", lambda: containment_check(random_params(rng, n_regions, -1.0, 1.5))),
    ]
    out = []
    for name, job in jobs:
        t = time.perf_counter()
        res = job()
        out.append(CheckResult(name, res.ok, res.detail, time.perf_counter() - t))
    return out
