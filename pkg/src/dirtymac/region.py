"""Down-closed two-user rate regions stored as sampled Pareto frontiers."""

from dataclasses import dataclass, field

import numpy as np

from .core import DomainError

DEFAULT_GRID = 512
CHUNK = 4096


@dataclass(frozen=True)
class RateRegion:
    """Staircase ``{(R1, R2): R1 <= r1_extent, R2 <= frontier(R1)}`` in bits.

    ``frontier_r2[i]`` is the largest ``R2`` at ``grid_r1[i]``. Between samples
    the frontier is linear; past ``r1_extent`` the region is empty.
    """

    grid_r1: np.ndarray
    frontier_r2: np.ndarray
    r1_extent: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        g = np.asarray(self.grid_r1, float)
        f = np.asarray(self.frontier_r2, float)
        object.__setattr__(self, "grid_r1", g)
        object.__setattr__(self, "frontier_r2", f)
        if g.ndim != 1 or g.shape != f.shape or g.size == 0:
            raise DomainError("grid and frontier must be nonempty 1-D arrays of equal length")
        if np.any(np.diff(g) <= 0):
            raise DomainError("grid_r1 must be strictly increasing")
        if np.any(f < 0) or np.any(g < 0):
            raise DomainError("rates must be nonnegative")
        if np.any(np.diff(f) > 1e-12):
            raise DomainError("frontier must be nonincreasing")

    def r2_at(self, r1):
        """Frontier height at arbitrary ``r1`` (0 beyond the extent)."""
        r1 = np.asarray(r1, float)
        inside = r1 <= self.r1_extent + 1e-15
        vals = np.interp(r1, self.grid_r1, self.frontier_r2)
        return np.where(inside, vals, 0.0)

    def points(self):
        """``(r1, r2)`` pairs of the frontier within the extent, ascending in ``r1``."""
        keep = self.grid_r1 <= self.r1_extent
        return np.column_stack([self.grid_r1[keep], self.frontier_r2[keep]])

    def max_sum_rate(self):
        pts = self.points()
        return float(np.max(pts.sum(axis=1)))


def default_r1_grid(upper, n=DEFAULT_GRID):
    return np.linspace(0.0, upper, n)


def _with_extent(r1_grid, extent):
    grid = np.asarray(r1_grid, float)
    if 0 <= extent and not np.any(np.isclose(grid, extent, rtol=0, atol=1e-15)):
        grid = np.sort(np.append(grid, extent))
    return grid


def frontier_from_pentagons(r1_max, r2_max, sum_max, r1_grid, meta=None):
    """Union of pentagons ``{R1 <= a, R2 <= b, R1 + R2 <= s}`` on an ``R1`` grid.

    Arrays hold one pentagon per family member (bits). The effective R1
    reach of a member is ``min(a, s)``. The overall extent and the R1 of the
    top-left corner are appended to the grid so both kinks are represented
    exactly.
    """
    a = np.ravel(np.asarray(r1_max, float))
    b = np.ravel(np.asarray(r2_max, float))
    s = np.ravel(np.asarray(sum_max, float))
    reach = np.minimum(a, s)
    valid = np.isfinite(reach) & (reach >= 0) & (b >= 0)
    a, b, s, reach = a[valid], b[valid], s[valid], reach[valid]
    if reach.size == 0:
        raise DomainError("family has no member with a nonempty pentagon")
    extent = float(reach.max())
    grid = _with_extent(r1_grid, extent)
    # the top-left corner is a kink too: the widest reach at the highest R2
    top = b.max()
    at_top = b >= top - 1e-12
    corner = float(np.max(np.minimum(a[at_top], s[at_top] - top)))
    if 0 < corner < extent:
        grid = _with_extent(grid, corner)
    best = np.full(grid.shape, -np.inf)
    for start in range(0, reach.size, CHUNK):
        sl = slice(start, start + CHUNK)
        vals = np.minimum(b[sl, None], s[sl, None] - grid[None, :])
        vals = np.where(reach[sl, None] >= grid[None, :], vals, -np.inf)
        best = np.maximum(best, vals.max(axis=0))
    if not np.isfinite(best[0]):
        raise DomainError("malformed family: no feasible member at R1 = 0")
    frontier = np.maximum(np.where(np.isfinite(best), best, 0.0), 0.0)
    # sampled unions are monotone by construction; enforce against round-off
    frontier = np.minimum.accumulate(frontier)
    return RateRegion(grid, frontier, extent, dict(meta or {}))


def frontier_from_family(generator, param_grid, r1_grid, meta=None):
    """Union over ``param_grid`` of the pentagons produced by ``generator``.

    ``generator(params)`` returns ``(r1_max, r2_max, sum_max)`` and may be
    vectorized over a batch of parameters; lists of scalar parameters are
    evaluated one by one.
    """
    if isinstance(param_grid, np.ndarray):
        a, b, s = generator(param_grid)
    else:
        triples = [generator(p) for p in param_grid]
        if not triples:
            raise DomainError("empty parameter grid")
        a, b, s = (np.array(x, float) for x in zip(*triples))
    return frontier_from_pentagons(a, b, s, r1_grid, meta)


def pattern_search(score, x0, lower, upper, step=0.05, min_step=1e-7, max_iter=400,
                   n_bases=4, seed=0):
    """Vectorized direct search maximizing ``score`` for many starts at once.

    ``score(xs)`` maps an ``(m, d)`` array to ``m`` values; each row moves
    independently inside the box ``[lower, upper]``. Moves are tried along
    the coordinate axes and then along up to ``n_bases - 1`` random
    orthonormal frames before the step is halved. Random frames let the
    search climb ridges such as the kink of ``min(b, s - r1)``, where every
    axis move fails.
    """
    x = np.array(x0, float)
    lower = np.asarray(lower, float)
    upper = np.asarray(upper, float)
    d = x.shape[1]
    rng = np.random.default_rng(seed)
    best = score(x)
    h = step
    misses = 0
    for _ in range(max_iter):
        if misses == 0:
            frame = np.eye(d)
        else:
            frame, _ = np.linalg.qr(rng.normal(size=(d, d)))
        moved = False
        for direction in frame:
            for sign in (1.0, -1.0):
                trial = np.clip(x + sign * h * direction, lower, upper)
                val = score(trial)
                better = val > best + 1e-15
                if np.any(better):
                    moved = True
                    x[better] = trial[better]
                    best = np.where(better, val, best)
        if moved:
            misses = 0
            continue
        misses += 1
        if misses >= n_bases:
            misses = 0
            h *= 0.5
            if h < min_step:
                break
    return x, best


def argmax_members(r1_max, r2_max, sum_max, grid):
    """Index of the best family member at each grid point."""
    a = np.ravel(r1_max)
    b = np.ravel(r2_max)
    s = np.ravel(sum_max)
    reach = np.minimum(a, s)
    best = np.full(grid.shape, -np.inf)
    idx = np.zeros(grid.shape, int)
    for start in range(0, a.size, CHUNK):
        sl = slice(start, start + CHUNK)
        vals = np.minimum(b[sl, None], s[sl, None] - grid[None, :])
        vals = np.where(reach[sl, None] >= grid[None, :], vals, -np.inf)
        j = vals.argmax(axis=0)
        v = vals[j, np.arange(grid.size)]
        better = v > best
        best = np.where(better, v, best)
        idx = np.where(better, j + start, idx)
    return idx


def outer_family_region(family, samples, lower, upper, r1_grid, feasible=None, meta=None,
                        refine=True):
    """Union of a continuous pentagon family, sampled then locally refined.

    ``family(xs)`` maps an ``(m, d)`` parameter array to
    ``(r1_max, r2_max, sum_max)`` arrays in bits; ``samples`` are the grid
    members. With ``refine`` the R1 reach and every frontier sample are
    pushed outward by :func:`pattern_search`, so the sampled union of an outer
    bound is not understated by the grid spacing.
    """
    samples = np.atleast_2d(np.asarray(samples, float))
    if feasible is not None:
        samples = samples[feasible(samples)]

    def ok(xs):
        return np.ones(len(xs), bool) if feasible is None else feasible(xs)

    a, b, s = family(samples)
    if refine:
        reach = np.where(ok(samples), np.minimum(a, s), -np.inf)
        start = samples[[int(np.argmax(reach))]]

        def reach_score(xs):
            ra, _, rs = family(xs)
            return np.where(ok(xs), np.minimum(ra, rs), -np.inf)

        x_far, _ = pattern_search(reach_score, start, lower, upper)
        fa, fb, fs = family(x_far)
        samples = np.vstack([samples, x_far])
        a, b, s = np.append(a, fa), np.append(b, fb), np.append(s, fs)
    region = frontier_from_pentagons(a, b, s, r1_grid, meta)
    if not refine:
        return region
    grid = region.grid_r1
    seeds = samples[argmax_members(a, b, s, grid)]

    def score(xs):
        fa, fb, fs = family(xs)
        val = np.minimum(fb, fs - grid)
        good = (np.minimum(fa, fs) >= grid) & ok(xs)
        return np.where(good, val, -np.inf)

    _, best = pattern_search(score, seeds, lower, upper)
    inside = grid <= region.r1_extent
    frontier = np.where(inside, np.maximum(region.frontier_r2, np.maximum(best, 0.0)),
                        region.frontier_r2)
    frontier = np.minimum.accumulate(frontier)
    return RateRegion(grid, frontier, region.r1_extent, dict(region.meta))


def convex_hull(region):
    """Upper concave envelope of the frontier (time sharing); idempotent."""
    pts = region.points()
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point if it lies on or below the chord
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    hull = np.array(hull)
    grid = region.grid_r1
    inside = grid <= region.r1_extent
    env = np.interp(grid, hull[:, 0], hull[:, 1])
    frontier = np.where(inside, np.maximum(env, region.frontier_r2), region.frontier_r2)
    frontier = np.minimum.accumulate(frontier)
    meta = dict(region.meta)
    meta["hull"] = True
    return RateRegion(grid, frontier, region.r1_extent, meta)


def _common_grid(*regions):
    pts = np.concatenate([r.grid_r1 for r in regions] + [[r.r1_extent for r in regions]])
    return np.unique(pts)


def intersect(a, b):
    """Pointwise minimum of two frontiers."""
    grid = _common_grid(a, b)
    extent = min(a.r1_extent, b.r1_extent)
    f = np.minimum(a.r2_at(grid), b.r2_at(grid))
    f = np.where(grid <= extent, f, 0.0)
    return RateRegion(grid, np.minimum.accumulate(f), extent, {"op": "intersect"})


def union(a, b):
    """Pointwise maximum of two frontiers."""
    grid = _common_grid(a, b)
    extent = max(a.r1_extent, b.r1_extent)
    f = np.maximum(a.r2_at(grid), b.r2_at(grid))
    return RateRegion(grid, np.minimum.accumulate(f), extent, {"op": "union"})


@dataclass(frozen=True)
class Containment:
    ok: bool
    violation: float
    at_r1: float


def contains(outer, inner, tol=1e-6):
    """Check ``inner`` lies within ``outer`` up to ``tol`` bits.

    Both frontiers are compared on the union of their grids. An inner extent
    beyond the outer extent counts as a violation of that horizontal size.
    """
    grid = _common_grid(outer, inner)
    grid = grid[grid <= inner.r1_extent]
    # an overshoot in reach is measured horizontally below, not as a drop to zero
    gap = inner.r2_at(grid) - outer.r2_at(np.minimum(grid, outer.r1_extent))
    i = int(np.argmax(gap))
    worst, at = float(gap[i]), float(grid[i])
    reach_gap = inner.r1_extent - outer.r1_extent
    if reach_gap > worst:
        worst, at = float(reach_gap), float(outer.r1_extent)
    return Containment(worst <= tol, max(worst, 0.0), at)
