import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dirtymac.core import (ChannelParams, CorrelationTriple, DomainError, DpcParams, RatePair,
                           bound_constants, capacity_awgn, delta_min_grid, delta_min_nats,
                           f_delta, f_nats, g_of_r2, g_tilde_of_r2)

from conftest import FIG3, FIG4, brute_f

powers = st.floats(0.01, 100.0)


@pytest.mark.parametrize("bad", [(-1, 1, 1), (1, 0, 1), (1, 1, -0.5), (math.nan, 1, 1),
                                 (1, math.inf, 1)])
def test_params_reject_invalid(bad):
    with pytest.raises(DomainError):
        ChannelParams(*bad)


def test_small_types_validate():
    with pytest.raises(DomainError):
        RatePair(-0.1, 0.0)
    with pytest.raises(DomainError):
        DpcParams(0.5, 0.2)
    with pytest.raises(DomainError):
        CorrelationTriple(0.9, 0.1, -0.9)
    CorrelationTriple(0.6, 0.3, -0.8)


def test_awgn_capacity():
    assert capacity_awgn(3.0) == 1.0
    assert capacity_awgn(0.0) == 0.0


@pytest.mark.parametrize("params,delta", [(FIG3, 0.0), (FIG3, 0.5), (FIG4, 1.0),
                                          (ChannelParams(0.3, 20, 0.7), 0.1)])
def test_f_matches_dense_grid(params, delta):
    val, rho = f_delta(params, delta)
    assert val == pytest.approx(brute_f(params, delta), abs=1e-7)
    assert -1.0 <= rho <= 0.0


def test_f0_fig3():
    assert f_delta(FIG3, 0.0)[0] == pytest.approx(0.0993, abs=2e-4)


@pytest.mark.parametrize("delta", [0.0, 0.3, 1.0])
def test_f_without_state(delta):
    p = ChannelParams(2.0, 3.0, 0.0)
    assert f_delta(p, delta)[0] == pytest.approx(0.5 * math.log2(1 + 2.0 / 4.0), abs=1e-12)


def test_f_without_power_is_minus_inf_at_zero():
    assert f_delta(ChannelParams(0.0, 1.0, 1.0), 0.0)[0] == -math.inf


def test_f_domain():
    with pytest.raises(DomainError):
        f_delta(FIG3, 1.5)


@given(powers, powers, powers, st.floats(0.0, 1.0))
def test_vectorized_f_agrees_with_scalar(p1, p2, q, d):
    p = ChannelParams(p1, p2, q)
    vec = float(f_nats(p, np.array([d]))[0][0]) / math.log(2)
    sca = f_delta(p, d)[0]
    if math.isinf(sca):
        assert vec == sca
    else:
        assert vec == pytest.approx(sca, abs=1e-9)


def test_constants_by_hand():
    k = bound_constants(ChannelParams(1.0, 1.0, 1.0))
    assert k.c1 == pytest.approx(3 * math.sqrt(6) + 8)
    assert k.c2 == pytest.approx(3 * math.sqrt(10) + 8)
    assert k.c3 == pytest.approx(2 * (3 * math.sqrt(10) + 12))


def test_g_vanishes_at_c2_and_decreases():
    c2 = capacity_awgn(FIG3.p2)
    assert g_of_r2(FIG3, c2) == 0.0
    r2 = np.linspace(0, c2, 50)
    g = [g_of_r2(FIG3, r) for r in r2]
    assert all(a >= b for a, b in zip(g, g[1:]))
    assert all(g_tilde_of_r2(FIG3, r) >= x for r, x in zip(r2, g))


def test_g_domain():
    with pytest.raises(DomainError):
        g_of_r2(FIG3, capacity_awgn(FIG3.p2) + 1e-6)
    with pytest.raises(DomainError):
        g_of_r2(FIG3, -0.1)


def test_g_hand_value():
    p = ChannelParams(1.0, 1.0, 1.0)
    gap = 0.01
    r2 = capacity_awgn(1.0) - gap / math.log(2)
    c1 = 3 * math.sqrt(6) + 8
    assert g_of_r2(p, r2) == pytest.approx(math.expm1(2 * c1 * math.sqrt(gap) + 2 * gap), rel=1e-9)


@pytest.mark.parametrize("g", [0.0, 1e-6, 1e-3, 0.5])
def test_delta_min_beats_dense_oracle(g):
    p2 = FIG4.p2
    deltas = np.logspace(-8, 0, 400)
    oracle = min(0.5 * math.log1p((1 + p2 - d) / (p2 * d) * g) + brute_f(FIG4, d, 20_001) * math.log(2)
                 for d in deltas)
    val, dstar = delta_min_nats(FIG4, g)
    assert val <= oracle + 1e-9
    assert val >= oracle - 1e-3
    assert 0.0 <= dstar <= 1.0
    assert float(delta_min_grid(FIG4, np.array([g]))[0]) >= val - 1e-12
