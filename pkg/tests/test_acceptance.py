"""Acceptance criteria 1 to 10, each at its stated tolerance and time budget."""

import math
import time

import numpy as np
import pytest

from dirtymac import degraded as dg
from dirtymac import region as rg
from dirtymac import verify as vf
from dirtymac.cli import scalars_report
from dirtymac.core import ChannelParams
from dirtymac.helper import helper_best_upper
from dirtymac.nondegraded import corner_points

from conftest import FIG3, FIG4, record


def timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


def test_criterion_01_top_corner():
    rep, dt = timed(scalars_report, FIG3)
    f0, c2 = rep["corner_top"]
    ok = abs(f0 - 0.10) <= 0.01 and abs(c2 - 1.29) <= 0.01 and dt < 1.0
    record(1, ok, f"corner_top=({f0:.4f}, {c2:.4f}) target (0.10, 1.29) +-0.01, {dt:.3f}s")
    assert ok


def test_criterion_02_threshold():
    rep, dt = timed(scalars_report, FIG3)
    ok = abs(rep["R1_th"] - 0.25) <= 0.01 and dt < 1.0
    record(2, ok, f"R1_th={rep['R1_th']:.4f} target 0.25 +-0.01, {dt:.3f}s")
    assert ok


def test_criterion_03_sum_rate_and_helper():
    rep, dt = timed(scalars_report, FIG4)
    hu = rep["helper_upper"]
    checks = [
        abs(rep["C_sum"] - 1.11) <= 0.01,
        hu["tag"] == "csum" and hu["best"] == rep["C_sum"],
        abs(rep["Rbar1"] - 0.89) <= 0.01 and abs(rep["Rbar2"] - 0.22) <= 0.01,
        abs(rep["corner_bottom"][0] - 0.90) <= 0.01 and abs(rep["corner_bottom"][1] - 0.20) <= 0.01,
        dt < 1.0,
    ]
    ok = all(checks)
    record(3, ok, f"C_sum={rep['C_sum']:.4f} helper={hu['best']:.4f} ({hu['tag']}) "
                  f"Rbar=({rep['Rbar1']:.4f}, {rep['Rbar2']:.4f}) bottom=({rep['corner_bottom'][0]:.4f}, "
                  f"{rep['corner_bottom'][1]:.4f}), {dt:.3f}s")
    assert ok


def test_criterion_04_sum_rate_identity():
    rng = np.random.default_rng(4)
    res, dt = timed(vf.identity_check, vf.random_params(rng, 200))
    ok = res.ok and dt < 10.0
    record(4, ok, f"max |C_sum - (C2 + f(1))| = {res.detail['max_gap']:.2e} over 200 draws, {dt:.2f}s")
    assert ok


def sweep():
    rows = []
    for p1 in np.round(np.arange(0.0, 8.0 + 1e-9, 0.05), 10):
        rows.append((p1, helper_best_upper(ChannelParams(float(p1), 5.0, 12.0))))
    return rows


def test_criterion_05_helper_sweep():
    rows, dt = timed(sweep)
    csum_ok = all(hb.tag == "csum" for p1, hb in rows if p1 <= 2.5 - 0.05)
    c2_ok = all(hb.tag == "c2" for p1, hb in rows if p1 >= 4.5 + 0.05)
    window = [min(hb.csum, hb.c2) - hb.thm6 for p1, hb in rows if 3.5 <= p1 <= 4.5]
    best_gain = max(window)
    thm6_ok = best_gain > 1e-4
    ok = csum_ok and c2_ok and thm6_ok and dt < 60.0
    last_csum = max(p1 for p1, hb in rows if hb.tag == "csum")
    first_c2 = min(p1 for p1, hb in rows if hb.tag == "c2")
    record(5, ok, f"tags csum up to P1={last_csum:.2f} ({'ok' if csum_ok else 'bad'}), c2 from "
                  f"P1={first_c2:.2f} ({'ok' if c2_ok else 'bad'}); largest thm6 gain on [3.5, 4.5] "
                  f"= {best_gain:.2e} bits vs required 1e-4; {dt:.1f}s")
    assert ok


def test_criterion_06_containments():
    rng = np.random.default_rng(6)
    samples = vf.random_params(rng, 50, -1.0, 1.5)
    res, dt = timed(vf.containment_check, samples)
    ok = res.ok and dt < 300.0
    record(6, ok, f"{len(samples)} draws x 5 containments at tol 1e-3, "
                  f"{len(res.detail['failures'])} failures, {dt:.1f}s")
    assert ok, res.detail["failures"][:3]


def test_criterion_07_corollary5():
    rng = np.random.default_rng(7)
    res, dt = timed(vf.corollary5_check, vf.random_params(rng, 500))
    ok = res.ok and dt < 30.0
    record(7, ok, f"500 draws, {len(res.detail['disagreements'])} hard disagreements, "
                  f"{res.detail['band_cases']} inside the 1e-4 band, {dt:.2f}s")
    assert ok


def appendix_checks():
    rng = np.random.default_rng(8)
    hess = vf.hessian_check(10_000, seed=8)
    kkt = vf.kkt_check()
    conc = vf.concavity_check(vf.random_params(rng, 30) + [FIG3, ChannelParams(0.1, 50, 100)])
    return hess, kkt, conc


def test_criterion_08_appendix():
    (hess, kkt, conc), dt = timed(appendix_checks)
    ok = hess.ok and kkt.ok and conc.ok and dt < 120.0
    record(8, ok, f"min(h11, det)={hess.detail['min_entry']:.1e}, fd rel err "
                  f"{hess.detail['max_rel_err']:.1e}; KKT {75 - len(kkt.detail['failures'])}/75; "
                  f"max second difference {conc.detail['max_second_difference']:.1e}; {dt:.1f}s")
    assert ok


def test_criterion_09_large_state_limit():
    (_, top, _), dt = timed(corner_points, ChannelParams(5.0, 5.0, 1e6))
    target = max(0.0, 0.5 * math.log2(5 / 6))
    ok = abs(top.r1 - target) <= 1e-3 and dt < 1.0
    record(9, ok, f"corner_top R1 at Q=1e6 = {top.r1:.2e} (target {target}), {dt:.3f}s")
    assert ok


@pytest.mark.parametrize("p", [ChannelParams(4.0, 2.5, 5.0), ChannelParams(2.0, 5.0, 12.0)])
def test_criterion_10_strict_improvement(p):
    t5 = dg.thm5_region(p)
    prior = dg.prior_outer_region_deg(p)
    inside = rg.contains(prior, t5, 1e-3)
    grid = t5.grid_r1[t5.grid_r1 <= t5.r1_extent]
    gap = float(np.max(prior.r2_at(grid) - t5.r2_at(grid)))
    ok = inside.ok and gap > 0
    key = 10 if p.p1 == 4.0 else 10.5
    record(key, ok, f"P={p.as_tuple()}: thm5 inside prior-deg (violation {inside.violation:.1e}), "
                    f"max frontier gap {gap:.4f} bits")
    assert ok
