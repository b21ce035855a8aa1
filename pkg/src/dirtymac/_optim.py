"""Vectorized scalar search helpers shared by the bound evaluators."""

import numpy as np

INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_max(fn, lo, hi, tol=1e-9, n_scan=64):
    """Maximize ``fn`` on ``[lo, hi]`` elementwise.

    A uniform scan of ``n_scan`` points picks a bracket around the best
    sample, then golden-section search shrinks it to width ``tol``. ``lo`` and
    ``hi`` may be arrays; ``fn`` must be elementwise over that shape. Ties in
    the scan go to the sample closest to ``hi``.

    Returns ``(x_best, f_best)`` with the shape of ``lo``/``hi`` broadcast.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, float), np.asarray(hi, float))
    lo = lo.copy()
    hi = hi.copy()
    ts = np.linspace(0.0, 1.0, n_scan)
    xs = lo[None] + (hi - lo)[None] * ts.reshape((-1,) + (1,) * lo.ndim)
    vals = np.stack([fn(x) for x in xs])
    vals = np.where(np.isnan(vals), -np.inf, vals)
    # last occurrence of the max -> closest to hi
    idx = n_scan - 1 - np.argmax(vals[::-1], axis=0)
    scan_best = np.take_along_axis(vals, idx[None], axis=0)[0]
    scan_x = np.take_along_axis(xs, idx[None], axis=0)[0]

    a = np.take_along_axis(xs, np.maximum(idx - 1, 0)[None], axis=0)[0]
    b = np.take_along_axis(xs, np.minimum(idx + 1, n_scan - 1)[None], axis=0)[0]
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = fn(c)
    fd = fn(d)
    while np.any(b - a > tol):
        left = fc >= fd
        # left: keep [a, d], old c becomes new d; right: keep [c, b], old d becomes new c
        a, b = np.where(left, a, c), np.where(left, d, b)
        keep_x, keep_f = np.where(left, c, d), np.where(left, fc, fd)
        new_x = np.where(left, b - INV_PHI * (b - a), a + INV_PHI * (b - a))
        new_f = fn(new_x)
        c, fc = np.where(left, new_x, keep_x), np.where(left, new_f, keep_f)
        d, fd = np.where(left, keep_x, new_x), np.where(left, keep_f, new_f)
    x_mid = 0.5 * (a + b)
    f_mid = fn(x_mid)
    use_mid = f_mid >= scan_best
    x_best = np.where(use_mid, x_mid, scan_x)
    f_best = np.where(use_mid, f_mid, scan_best)
    if x_best.ndim == 0:
        return float(x_best), float(f_best)
    return x_best, f_best


def golden_min(fn, lo, hi, tol=1e-9, n_scan=64):
    x, v = golden_max(lambda t: -fn(t), lo, hi, tol=tol, n_scan=n_scan)
    return x, -v
