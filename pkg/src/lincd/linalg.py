"""Dense matrix primitives used by the identification algorithms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateInputError, InvalidInputError, InvalidOrderError,
                     NotPositiveDefiniteError, RankDeficientError)
from .order import PartialOrder

PINV_TOL = 1e-10
RANK_TOL = 1e-7
SIGN_TOL = 1e-9
TIE_TOL = 1e-12


def _as_finite(M, name="matrix", ndim=2):
    M = np.asarray(M, dtype=float)
    if M.ndim != ndim:
        raise InvalidInputError(f"{name} must be {ndim}-dimensional, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return M


def pseudoinverse(M, tol=PINV_TOL):
    """Moore-Penrose pseudoinverse via the SVD.

    Singular values at or below ``tol * sigma_1`` are treated as zero.
    """
    M = _as_finite(M)
    if tol < 0:
        raise InvalidInputError("tol must be nonnegative")
    if M.size == 0:
        return np.zeros(M.shape[::-1])
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    keep = s > tol * s[0] if s.size and s[0] > 0 else np.zeros_like(s, dtype=bool)
    return (Vt[keep].T / s[keep]) @ U[:, keep].T


def cholesky_upper(M, eps=None):
    """Upper-triangular ``U`` with positive diagonal such that ``U.T @ U == M``.

    Parameters
    ----------
    M : (n, n) array
        Symmetric positive definite matrix. Only the upper triangle is read.
    eps : float, optional
        Pivot threshold. Defaults to ``1e-12 * trace(M) / n``.

    Raises
    ------
    NotPositiveDefiniteError
        When a pivot falls at or below ``eps``; carries the pivot index.
    """
    M = _as_finite(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise InvalidInputError(f"cholesky_upper needs a square matrix, got {M.shape}")
    if not np.allclose(M, M.T, rtol=1e-8, atol=1e-12 * max(np.abs(M).max(initial=0.0), 1.0)):
        raise InvalidInputError("cholesky_upper needs a symmetric matrix")
    if eps is None:
        eps = 1e-12 * abs(np.trace(M)) / max(n, 1)
    U = np.zeros_like(M)
    for j in range(n):
        col = U[:j, j]
        pivot = M[j, j] - col @ col
        if not pivot > eps:
            raise NotPositiveDefiniteError(j, pivot)
        U[j, j] = np.sqrt(pivot)
        U[j, j + 1:] = (M[j, j + 1:] - col @ U[:j, j + 1:]) / U[j, j]
    return U


def orthonormalize_rows(B, tol=1e-12):
    """Orthonormal basis for the row span of ``B``.

    Modified Gram-Schmidt with one reorthogonalization pass. Rows that
    vanish (relative to their original norm) are dropped.
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    basis = []
    for row in B:
        norm0 = np.linalg.norm(row)
        if norm0 == 0:
            continue
        v = row.copy()
        for _ in range(2):
            for q in basis:
                v -= (q @ v) * q
        nv = np.linalg.norm(v)
        if nv > tol * norm0:
            basis.append(v / nv)
    if not basis:
        return np.zeros((0, B.shape[1]))
    return np.array(basis)


def project_complement(M, basis_rows):
    """Project every row of ``M`` onto the orthogonal complement of ``rowspan(basis_rows)``."""
    M = _as_finite(np.atleast_2d(M), "M")
    basis_rows = np.asarray(basis_rows, dtype=float)
    if basis_rows.size == 0:
        return M.copy()
    basis_rows = np.atleast_2d(basis_rows)
    if basis_rows.shape[1] != M.shape[1]:
        raise InvalidInputError(
            f"basis has {basis_rows.shape[1]} columns but M has {M.shape[1]}")
    Qb = orthonormalize_rows(basis_rows)
    if Qb.shape[0] == 0:
        return M.copy()
    out = M - (M @ Qb.T) @ Qb
    # second pass keeps the result orthogonal to working precision
    return out - (out @ Qb.T) @ Qb


@dataclass(frozen=True)
class RankScore:
    rho1: float
    rho2: float
    singular_values: np.ndarray


def rank_score(M):
    """Spectral-energy fractions of the top one and top two singular values."""
    M = _as_finite(np.atleast_2d(M))
    s = np.linalg.svd(M, compute_uv=False)
    energy = s ** 2
    total = energy.sum()
    if not total > 0:
        raise DegenerateInputError("rank score is undefined for the zero matrix")
    rho1 = float(energy[0] / total)
    rho2 = float(energy[:2].sum() / total)
    return RankScore(min(rho1, 1.0), min(rho2, 1.0), s)


def numerical_rank(M, tol=RANK_TOL, scale=None):
    """Number of singular values above ``tol * scale`` (``scale`` defaults to sigma_1)."""
    s = np.linalg.svd(np.atleast_2d(M), compute_uv=False)
    if s.size == 0:
        return 0
    ref = s[0] if scale is None else scale
    if ref <= 0:
        return 0
    return int(np.sum(s > tol * ref))


def fix_sign(v, tol=SIGN_TOL):
    """Flip ``v`` so that its first entry exceeding ``tol * |v|`` in magnitude is positive."""
    v = np.asarray(v, dtype=float)
    big = np.flatnonzero(np.abs(v) > tol * np.linalg.norm(v))
    if big.size and v[big[0]] < 0:
        return -v
    return v


def leading_right_vector(M):
    """Unit leading right singular vector of ``M`` with the sign rule of :func:`fix_sign`."""
    _, _, Vt = np.linalg.svd(np.atleast_2d(M), full_matrices=False)
    return fix_sign(Vt[0])


def max_abs_scales(H, tie_tol=TIE_TOL):
    """Per-row scale ``s`` so that ``H / s[:, None]`` has its largest-magnitude entry equal to 1.

    Ties in magnitude (within ``tie_tol`` relative) resolve to the leftmost entry.
    """
    H = np.atleast_2d(np.asarray(H, dtype=float))
    scales = np.empty(H.shape[0])
    for i, row in enumerate(H):
        a = np.abs(row)
        top = a.max()
        if top == 0:
            raise RankDeficientError(f"row {i} is zero", row=i)
        j = int(np.flatnonzero(a >= top * (1 - tie_tol))[0])
        scales[i] = row[j]
    return scales


def normalize_rows(H):
    """Rescale rows of ``H`` to the max-abs-equals-one convention. Returns ``(H_normalized, scales)``."""
    s = max_abs_scales(H)
    return np.asarray(H, dtype=float) / s[:, None], s


@dataclass(frozen=True)
class RQFactors:
    R: np.ndarray
    Q: np.ndarray
    order: PartialOrder


def partial_order_rq(H, order, tol=1e-10):
    """Partial-order RQ decomposition ``H = R @ Q``.

    ``R[i, j]`` is nonzero only when ``i == j`` or ``i ≺ j``, ``R[i, i] > 0``,
    rows of ``Q`` have unit norm and ``q_i`` is orthogonal to every ``q_j``
    with ``i ≺ j``.

    Rows are processed from the last label to the first, since ``q_i`` needs
    every ``q_j`` with ``j ≻ i`` and those carry larger labels.

    Parameters
    ----------
    H : (d, p) array
        Full row rank.
    order : PartialOrder
        Must be consistent with ``0 < 1 < ... < d-1``; relabel first otherwise.
    tol : float
        Relative threshold below which a projected row counts as zero.
    """
    H = _as_finite(H, "H")
    d, p = H.shape
    if order.d != d:
        raise InvalidOrderError(f"order is over {order.d} labels but H has {d} rows")
    if not order.is_consistent():
        raise InvalidOrderError("order is not consistent with the label order; relabel first")
    if d > p:
        raise RankDeficientError(f"H has more rows ({d}) than columns ({p})")

    R = np.zeros((d, d))
    Q = np.zeros((d, p))
    for i in range(d - 1, -1, -1):
        h = H[i]
        above = order.above(i)
        v = project_complement(h[None, :], Q[above])[0]
        nv = np.linalg.norm(v)
        if nv <= tol * np.linalg.norm(h):
            raise RankDeficientError(f"row {i} of H lies in the span of rows above it", row=i)
        Q[i] = v / nv
        idx = [i] + above
        r, *_ = np.linalg.lstsq(Q[idx].T, h, rcond=None)
        if np.linalg.norm(Q[idx].T @ r - h) > 1e-8 * np.linalg.norm(h):
            raise RankDeficientError(f"row {i} of H is not reproduced by its factor rows", row=i)
        R[i, idx] = r
    return RQFactors(R, Q, order)
