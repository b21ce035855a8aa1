import math

import numpy as np
import pytest

from dirtymac import degraded as dg
from dirtymac import nondegraded as nd
from dirtymac import region as rg
from dirtymac.core import ChannelParams, CorrelationTriple, DomainError, DpcParams, capacity_awgn
from dirtymac.gaussian import GaussianVectorSystem, inner_pentagon

from conftest import FIG3, FIG4


def test_thm4_equals_thm1_at_c2():
    c2 = capacity_awgn(FIG3.p2)
    assert dg.thm4_r1_bound(FIG3, c2) == pytest.approx(nd.thm1_r1_bound(FIG3, c2), abs=1e-12)


def test_thm4_strictly_looser_below_c2():
    r2 = capacity_awgn(FIG3.p2) - 0.05
    assert dg.thm4_r1_bound(FIG3, r2) > nd.thm1_r1_bound(FIG3, r2)


@pytest.mark.parametrize("p", [FIG3, FIG4, ChannelParams(0.4, 2.0, 1.0)])
def test_thm4_dominates_thm1(p):
    c2 = capacity_awgn(p.p2)
    for r2 in np.linspace(0, c2, 15):
        assert dg.thm4_r1_bound(p, r2) >= nd.thm1_r1_bound(p, r2) - 1e-9


def test_thm4_domain():
    with pytest.raises(DomainError):
        dg.thm4_r1_bound(FIG3, 2.0)


def test_thm4_region_contains_thm1_region():
    g = rg.default_r1_grid(1.4)
    assert rg.contains(dg.thm4_region(FIG3, r1_grid=g), nd.thm1_region(FIG3, r1_grid=g), 1e-6).ok


def test_corner_top_degraded():
    val, ok = dg.corner_top_degraded(FIG3)
    assert val == nd.corner_points(FIG3)[1].r1 and ok
    val, ok = dg.corner_top_degraded(ChannelParams(1.0, 5.0, 12.0))
    assert not ok and val == 0.0
    val, _ = dg.corner_top_degraded(ChannelParams(2.0, 3.0, 0.0))
    assert val == pytest.approx(0.5 * math.log2(1 + 2 / 4))


def test_thm5_origin_triple():
    pt = dg.thm5_point(FIG3, CorrelationTriple(0.0, 0.0, 0.0))
    assert pt.r2_cap_a == pytest.approx(capacity_awgn(5.0))
    assert pt.sum_cap == pytest.approx(capacity_awgn(5.0) + 0.5 * math.log2(1 + 5 / 18))


def test_thm5_full_cooperation_member():
    pt = dg.thm5_point(FIG3, CorrelationTriple(0.3, 1.0, -0.4))
    assert pt.r2_cap_a == 0.0
    a, b, s = dg.thm5_terms(FIG3, 0.3, 1.0, -0.4)
    assert s == pt.sum_cap


def test_bound_point_validation():
    with pytest.raises(DomainError):
        dg.DegradedBoundPoint(-0.1, 0.0, 0.0)


@pytest.mark.parametrize("p", [ChannelParams(4.0, 2.5, 5.0), ChannelParams(2.0, 5.0, 12.0)])
def test_thm5_strictly_inside_prior(p):
    t5 = dg.thm5_region(p, grid=32)
    prior = dg.prior_outer_region_deg(p)
    assert rg.contains(prior, t5, 1e-3).ok
    grid = t5.grid_r1[t5.grid_r1 <= t5.r1_extent]
    assert float(np.max(prior.r2_at(grid) - t5.r2_at(grid))) > 1e-3


def test_inner_inside_thm5():
    assert rg.contains(dg.thm5_region(FIG3, grid=32), nd.inner_region_nondeg(FIG3), 1e-3).ok


def independent_u2_system():
    # sources: U1, X2 extra, S, Xt, Z, W (independent U2)
    names = ("U1", "U2", "X1", "X2", "S", "Y")
    var = np.array([1.0, 2.0, 3.0, 1.5, 1.0, 0.7])
    coeffs = np.array([
        [1, 0, 0, 0, 0, 0],      # U1
        [0, 0, 0, 0, 0, 1],      # U2
        [0.5, 0, 0.2, 1, 0, 0],  # X1
        [1, 1, 0, 0, 0, 0],      # X2
        [0, 0, 1, 0, 0, 0],      # S
        [1.5, 1, 1.2, 1, 1, 0],  # Y = X1 + X2 + S + Z
    ], dtype=float)
    return GaussianVectorSystem.from_linear(names, coeffs, var)


def test_independent_u2_is_feasible():
    out = dg.inner_expressions_deg(independent_u2_system())
    assert out.constraint_ok
    assert min(out.r2_a, out.r2_b, out.sum) >= 0


def test_embedding_reproduces_dirty_paper_sum():
    dpc = DpcParams(-0.2, 0.55)
    out = dg.inner_expressions_deg(dg.dpc_degraded_system(FIG4, dpc))
    assert out.sum == pytest.approx(inner_pentagon(FIG4, dpc)[2], abs=1e-9)


def test_expression_errors():
    sys = independent_u2_system()
    bad = GaussianVectorSystem(("A", "B"), np.eye(2))
    with pytest.raises(DomainError):
        dg.inner_expressions_deg(bad)
    cov = sys.cov.copy()
    # correlate U1 with S
    cov[0, 4] = cov[4, 0] = 0.5
    with pytest.raises(DomainError):
        dg.inner_expressions_deg(GaussianVectorSystem(sys.labels, cov))
