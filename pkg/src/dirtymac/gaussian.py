"""Jointly Gaussian systems and conditional mutual information via log-determinants."""

from dataclasses import dataclass, field
import logging
import math

import numpy as np

from .core import LN2, DomainError, RHO_MIN

log = logging.getLogger(__name__)

# conditional variances below SINGULAR_REL * trace(cov) count as deterministic
SINGULAR_REL = 1e-12

DPC_LABELS = ("S", "Xt", "X1", "X2", "U", "Z", "Y")


@dataclass(frozen=True)
class GaussianVectorSystem:
    """Named zero-mean jointly Gaussian variables.

    ``cov`` is ``(n, n)`` or a batch ``(..., n, n)``; every helper in this
    module broadcasts over the leading batch dimensions.
    """

    labels: tuple
    cov: np.ndarray = field(repr=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        cov = np.asarray(self.cov, float)
        object.__setattr__(self, "cov", cov)
        n = len(labels)
        if len(set(labels)) != n:
            raise DomainError(f"duplicate labels in {labels}")
        if cov.shape[-2:] != (n, n):
            raise DomainError(f"cov shape {cov.shape} does not match {n} labels")
        if not np.allclose(cov, np.swapaxes(cov, -1, -2), rtol=0, atol=1e-12 * _scale(cov).max()):
            raise DomainError("cov must be symmetric")
        eig_min = np.linalg.eigvalsh(cov)[..., 0]
        if np.any(eig_min < -1e-9 * _scale(cov)):
            raise DomainError("cov must be positive semidefinite")

    def index(self, names):
        try:
            return [self.labels.index(x) for x in names]
        except ValueError as exc:
            raise DomainError(f"unknown label in {list(names)}; have {self.labels}") from exc

    def block(self, names_a, names_b=None):
        ia = self.index(names_a)
        ib = ia if names_b is None else self.index(names_b)
        return self.cov[..., ia, :][..., :, ib]

    @property
    def batch_shape(self):
        return self.cov.shape[:-2]

    @classmethod
    def from_linear(cls, labels, coeffs, source_var):
        """Build from variables written as linear maps of independent sources.

        ``coeffs`` has shape ``(..., n, k)`` and ``source_var`` ``(..., k)``.
        """
        coeffs = np.asarray(coeffs, float)
        source_var = np.asarray(source_var, float)
        cov = np.einsum("...ik,...k,...jk->...ij", coeffs, source_var, coeffs)
        return cls(tuple(labels), cov)


def _scale(cov):
    return np.trace(cov, axis1=-2, axis2=-1)


def build_dpc_system(params, dpc):
    """Covariance of ``(S, Xt, X1, X2, U, Z, Y)`` under generalized dirty-paper coding.

    ``X1 = rho sqrt(P1/Q) S + Xt`` with ``Xt ~ N(0, P1 (1 - rho^2))`` independent
    of ``S``, and ``U = Xt + alpha (1 + rho sqrt(P1/Q)) S``. With ``Q = 0`` only
    ``rho = 0`` is meaningful.
    """
    rho, alpha = dpc.rho, dpc.alpha
    if rho < RHO_MIN:
        raise DomainError(f"rho must be at least {RHO_MIN}, got {rho}")
    return build_dpc_batch(params, np.asarray(rho), np.asarray(alpha))


def build_dpc_batch(params, rho, alpha):
    """Vectorized :func:`build_dpc_system` over arrays of ``rho`` and ``alpha``."""
    p1, p2, q = params.as_tuple()
    rho, alpha = np.broadcast_arrays(np.asarray(rho, float), np.asarray(alpha, float))
    if q == 0:
        if np.any(rho != 0):
            raise DomainError("with q = 0 the state is absent and rho must be 0")
        k = np.zeros_like(rho)
    else:
        k = rho * math.sqrt(p1 / q)
    zero, one = np.zeros_like(rho), np.ones_like(rho)
    # independent sources: S, Xt, X2, Z
    rows = [
        [one, zero, zero, zero],            # S
        [zero, one, zero, zero],            # Xt
        [k, one, zero, zero],               # X1
        [zero, zero, one, zero],            # X2
        [alpha * (1.0 + k), one, zero, zero],  # U
        [zero, zero, zero, one],            # Z
        [k + 1.0, one, one, one],           # Y
    ]
    coeffs = np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)
    var = np.stack(np.broadcast_arrays(q * one, p1 * (1.0 - rho**2), p2 * one, one), axis=-1)
    return GaussianVectorSystem.from_linear(DPC_LABELS, coeffs, var)


@dataclass(frozen=True)
class MIResult:
    bits: float
    deterministic: bool = False
    diagnostic: str = ""


def _check_sets(sys, a, b, c):
    a, b, c = list(a), list(b), list(c)
    if not a or not b:
        raise DomainError("both variable sets must be nonempty")
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise DomainError(f"sets must be disjoint: {a}, {b}, {c}")
    sys.index(a + b + c)
    return a, b, c


def _pivoted_basis(k, thr):
    """Indices of a maximal well-conditioned subset (pivoted Cholesky)."""
    n = k.shape[0]
    work = k.copy()
    chosen = []
    remaining = list(range(n))
    while remaining:
        diag = np.array([work[i, i] for i in remaining])
        j = int(np.argmax(diag))
        if diag[j] <= thr:
            break
        p = remaining.pop(j)
        chosen.append(p)
        col = work[:, p] / math.sqrt(work[p, p])
        work = work - np.outer(col, col)
    return sorted(chosen)


def _cond_cov(k, idx_ab, idx_c, thr):
    kab = k[np.ix_(idx_ab, idx_ab)]
    if not idx_c:
        return kab
    basis = [idx_c[i] for i in _pivoted_basis(k[np.ix_(idx_c, idx_c)], thr)]
    if not basis:
        return kab
    kcc = k[np.ix_(basis, basis)]
    kxc = k[np.ix_(idx_ab, basis)]
    return kab - kxc @ np.linalg.solve(kcc, kxc.T)


def _cond_mi_single(cov, ia, ib, ic):
    thr = SINGULAR_REL * max(float(np.trace(cov)), 1e-300)
    m = _cond_cov(cov, ia + ib, ic, thr)
    m = 0.5 * (m + m.T)
    na = len(ia)
    a_basis = _pivoted_basis(m[:na, :na], thr)
    b_basis = [na + j for j in _pivoted_basis(m[na:, na:], thr)]
    if not a_basis or not b_basis:
        return MIResult(0.0)
    mab = m[np.ix_(a_basis + b_basis, a_basis + b_basis)]
    nb = len(a_basis)
    maa = mab[:nb, :nb]
    # residual of A given B (and C): singular means a shared deterministic component
    resid = maa - mab[:nb, nb:] @ np.linalg.solve(mab[nb:, nb:], mab[nb:, :nb])
    eig = np.linalg.eigvalsh(0.5 * (resid + resid.T))
    if eig[0] <= thr:
        return MIResult(math.inf, True, "deterministic dependence: residual variance "
                        f"{eig[0]:.3e} below threshold {thr:.3e}")
    val = 0.5 * (np.linalg.slogdet(maa)[1] - np.sum(np.log(eig))) / LN2
    return MIResult(float(val))


def cond_mi_detail(sys, a, b, c=()):
    """``I(A; B | C)`` for a single (unbatched) system, with a singularity flag."""
    a, b, c = _check_sets(sys, a, b, c)
    if sys.batch_shape:
        raise DomainError("cond_mi_detail expects an unbatched system; use cond_mi")
    res = _cond_mi_single(sys.cov, sys.index(a), sys.index(b), sys.index(c))
    if res.deterministic:
        log.debug("I(%s; %s | %s) = inf: %s", a, b, c, res.diagnostic)
    return res


def _logdet(sys, names):
    if not names:
        return np.zeros(sys.batch_shape)
    return np.linalg.slogdet(sys.block(names))[1]


def cond_mi(sys, a, b, c=()):
    """Conditional mutual information ``I(A; B | C)`` in bits.

    Computed as ``1/2 log det S_AC det S_BC / (det S_C det S_ABC)``. Batched
    systems take a fast determinant path wherever ``S_ABC`` is well
    conditioned and fall back to a rank-revealing evaluation elsewhere;
    deterministic dependence yields ``inf``.
    """
    a, b, c = _check_sets(sys, a, b, c)
    if not sys.batch_shape:
        return cond_mi_detail(sys, a, b, c).bits
    full = sys.block(a + b + c)
    eig_min = np.linalg.eigvalsh(full)[..., 0]
    ok = eig_min > 1e-9 * _scale(sys.cov)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = 0.5 * (_logdet(sys, a + c) + _logdet(sys, b + c) - _logdet(sys, c)
                     - _logdet(sys, a + b + c)) / LN2
    if not np.all(ok):
        ia, ib, ic = sys.index(a), sys.index(b), sys.index(c)
        for pos in zip(*np.nonzero(~ok)):
            out[pos] = _cond_mi_single(sys.cov[pos], ia, ib, ic).bits
    return out


def inner_pentagon(params, dpc):
    """Rate bounds ``(r1_max, r2_max, sum_max)`` in bits for one ``(rho, alpha)``.

    ``R1 <= I(U;Y|X2) - I(U;S)``, ``R2 <= I(X2;Y|U)`` and
    ``R1 + R2 <= I(U,X2;Y) - I(U;S)``, each clamped at zero.
    """
    sys = build_dpc_system(params, dpc)
    r1, r2, s = _pentagon_terms(sys)
    return float(r1), float(r2), float(s)


def inner_pentagon_batch(params, rho, alpha):
    return _pentagon_terms(build_dpc_batch(params, rho, alpha))


def _pentagon_terms(sys):
    ius = cond_mi(sys, ["U"], ["S"])
    r1 = cond_mi(sys, ["U"], ["Y"], ["X2"]) - ius
    r2 = cond_mi(sys, ["X2"], ["Y"], ["U"])
    s = cond_mi(sys, ["U", "X2"], ["Y"]) - ius
    with np.errstate(invalid="ignore"):
        return tuple(np.maximum(np.nan_to_num(x, nan=0.0, neginf=0.0), 0.0) for x in (r1, r2, s))
