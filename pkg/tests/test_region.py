import numpy as np
import pytest
from hypothesis import given, strategies as st

from dirtymac import region as rg
from dirtymac.core import DomainError

GRID = np.linspace(0, 2, 201)


def pentagon(a, b, s):
    return rg.frontier_from_pentagons([a], [b], [s], GRID)


def test_single_pentagon_shape():
    reg = pentagon(1.0, 1.0, 1.5)
    assert reg.r1_extent == 1.0
    np.testing.assert_allclose(reg.r2_at([0.0, 0.5, 0.75, 1.0, 1.2]), [1.0, 1.0, 0.75, 0.5, 0.0])


def test_sum_cap_below_r1_cap_limits_reach():
    reg = pentagon(2.0, 0.3, 1.0)
    assert reg.r1_extent == 1.0
    assert reg.r2_at(0.9) == pytest.approx(0.1)


def test_union_is_pointwise_max():
    a = pentagon(1.0, 0.2, 1.2)
    b = pentagon(0.3, 1.0, 1.0)
    both = rg.frontier_from_pentagons([1.0, 0.3], [0.2, 1.0], [1.2, 1.0], GRID)
    # compare on grid samples: between samples a vertical edge is a linear ramp
    x = GRID[GRID <= 1.0]
    np.testing.assert_allclose(both.r2_at(x), np.maximum(a.r2_at(x), b.r2_at(x)), atol=1e-12)
    np.testing.assert_allclose(rg.union(a, b).r2_at(x), both.r2_at(x), atol=1e-12)


def test_intersect():
    a = pentagon(1.0, 0.2, 1.2)
    b = pentagon(0.3, 1.0, 1.0)
    c = rg.intersect(a, b)
    assert c.r1_extent == 0.3
    assert c.r2_at(0.1) == pytest.approx(0.2)


def test_validation():
    with pytest.raises(DomainError):
        rg.RateRegion(np.array([0.0, 1.0]), np.array([0.5, 0.6]), 1.0)
    with pytest.raises(DomainError):
        rg.RateRegion(np.array([1.0, 0.0]), np.array([0.5, 0.4]), 1.0)
    with pytest.raises(DomainError):
        rg.frontier_from_pentagons([-1.0], [1.0], [1.0], GRID)


def test_family_helpers_agree():
    fam = lambda xs: (1 - xs**2, np.ones_like(xs), 1.2 + 0 * xs)
    a = rg.frontier_from_family(fam, np.linspace(-1, 0, 11), GRID)
    b = rg.frontier_from_family(fam, list(np.linspace(-1, 0, 11)), GRID)
    np.testing.assert_array_equal(a.frontier_r2, b.frontier_r2)


def test_pattern_search_quadratic():
    x, best = rg.pattern_search(lambda xs: -((xs - 0.37) ** 2).sum(axis=1),
                                np.array([[0.0, 0.9]]), [0, 0], [1, 1])
    np.testing.assert_allclose(x, [[0.37, 0.37]], atol=1e-6)


def test_refinement_only_grows_outer_family():
    def fam(xs):
        r = xs[:, 0]
        return 0.5 * np.log2(1 + 5 * (1 - r**2)), np.full(r.shape, 1.2), 1.5 - (r + 0.3) ** 2
    coarse = rg.outer_family_region(fam, np.linspace(-1, 0, 5)[:, None], [-1], [0], GRID,
                                    refine=False)
    fine = rg.outer_family_region(fam, np.linspace(-1, 0, 5)[:, None], [-1], [0], GRID)
    assert rg.contains(fine, coarse, 1e-12).ok
    # max sum is attained at r = -0.3, which the coarse grid misses
    assert fine.max_sum_rate() == pytest.approx(1.5, abs=1e-6)


def test_contains_detects_overshoot():
    inner = pentagon(1.0, 1.0, 1.5)
    assert rg.contains(inner, inner).ok
    bigger = pentagon(1.1, 1.0, 1.5)
    res = rg.contains(inner, bigger, 1e-3)
    assert not res.ok and res.violation == pytest.approx(0.1)
    taller = pentagon(1.0, 1.05, 1.5)
    assert rg.contains(taller, inner).ok
    assert not rg.contains(inner, taller, 1e-3).ok


pent = st.tuples(st.floats(0.05, 1.5), st.floats(0.05, 1.5), st.floats(0.1, 2.5))


@given(st.lists(pent, min_size=1, max_size=6))
def test_hull_properties(members):
    a, b, s = (np.array(x) for x in zip(*members))
    reg = rg.frontier_from_pentagons(a, b, s, GRID)
    hull = rg.convex_hull(reg)
    assert rg.contains(hull, reg, 1e-12).ok
    again = rg.convex_hull(hull)
    np.testing.assert_allclose(again.frontier_r2, hull.frontier_r2, atol=1e-12)
    pts = hull.points()
    # concavity: midpoints of consecutive samples lie on or above the chords
    if len(pts) >= 3:
        slopes = np.diff(pts[:, 1]) / np.diff(pts[:, 0])
        assert np.all(np.diff(slopes) <= 1e-6)
