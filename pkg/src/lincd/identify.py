"""Recover ``(H, B_0..B_K, targets, partial order)`` from per-context precision matrices.

Two modes share one code path:

``exact``
    Inputs are exact precision matrices. Subspace dimensions are decided
    with relative singular-value thresholds, and any departure from the
    model assumptions raises :class:`NotInModelError`.
``sample``
    Inputs are sample precision matrices. Rank-one tests use the spectral
    energy score ``rho`` against the threshold ``gamma``, the next context
    is the one with the largest ``rho``, and each intervention target is the
    largest-norm row among targets not yet used.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, InvalidInputError, NotInModelError, NotPositiveDefiniteError
from .linalg import (RANK_TOL, cholesky_upper, leading_right_vector, normalize_rows, numerical_rank,
                     project_complement, pseudoinverse, rank_score)
from .model import ParameterBundle, PrecisionSet
from .order import PartialOrder

MODES = ("exact", "sample")
DIM_TOL = 1e-10
ROW_TOL = 1e-8
DEFAULT_GAMMA = 0.99


@dataclass(frozen=True)
class IdentificationResult:
    """Estimated model. Latent labels are the row indices of ``H_hat``.

    ``targets_hat[k-1]`` and ``lambda_hat[k-1]`` belong to context ``k`` of the
    canonicalized input (observational context first).
    """

    order: PartialOrder
    Q_hat: np.ndarray
    R_hat: np.ndarray
    H_hat: np.ndarray
    B_hat: tuple
    targets_hat: tuple
    lambda_hat: tuple
    diagnostics: dict = field(default_factory=dict)

    @property
    def d(self):
        return self.H_hat.shape[0]

    def bundle(self) -> ParameterBundle:
        return ParameterBundle(self.B_hat, self.H_hat)

    def to_dict(self):
        return {
            "order": [list(r) for r in self.order.sorted_relations()],
            "Q_hat": self.Q_hat.tolist(),
            "R_hat": self.R_hat.tolist(),
            "H_hat": self.H_hat.tolist(),
            "B_hat": [b.tolist() for b in self.B_hat],
            "targets_hat": list(self.targets_hat),
            "lambda_hat": list(self.lambda_hat),
            "diagnostics": _jsonable(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, data):
        H = np.asarray(data["H_hat"], dtype=float)
        return cls(PartialOrder(H.shape[0], frozenset(map(tuple, data["order"]))),
                   np.asarray(data["Q_hat"], dtype=float), np.asarray(data["R_hat"], dtype=float), H,
                   tuple(np.asarray(b, dtype=float) for b in data["B_hat"]),
                   tuple(data["targets_hat"]), tuple(data["lambda_hat"]),
                   data.get("diagnostics", {}))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _check_mode(mode, gamma):
    if mode not in MODES:
        raise InvalidInputError(f"mode must be one of {MODES}, got {mode!r}")
    if not 0.0 <= gamma <= 1.0:
        raise InvalidInputError(f"gamma must lie in [0, 1], got {gamma}")


class _Difference:
    """Row representation of ``Theta_k - Theta_0``.

    Exact mode keeps only the (at most two) leading scaled right singular
    vectors; sample mode keeps the full matrix.
    """

    def __init__(self, theta_k, theta_0, mode):
        D = np.asarray(theta_k, dtype=float) - np.asarray(theta_0, dtype=float)
        _, s, Vt = np.linalg.svd(D)
        self.scale = float(s[0])
        if mode == "exact":
            r = int(np.sum(s > RANK_TOL * s[0])) if s[0] > 0 else 0
            self.rank = r
            if r > 2:
                raise NotInModelError(
                    f"precision difference has rank {r} > 2; a single-node intervention gives at most 2",
                    {"rank": r})
            self.rows = s[:r, None] * Vt[:r]
        else:
            self.rank = None
            self.rows = D

    def projected(self, basis):
        return project_complement(self.rows, basis) if len(self.rows) else self.rows


def _projected_dim(M, scale, mode, gamma):
    """Return ``(is_rank_one, rho)`` for a projected difference ``M``."""
    if M.size == 0 or scale <= 0:
        return False, 0.0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] <= RANK_TOL * scale:
        return False, 0.0
    rho = float(s[0] ** 2 / np.sum(s ** 2))
    if mode == "exact":
        return rho >= 1.0 - DIM_TOL, rho
    return rho >= gamma, rho


def id_ancestors(theta_k, theta_0, known_rows, mode="exact", gamma=DEFAULT_GAMMA):
    """Recover the factor row of an intervened node and a superset of its parents.

    Parameters
    ----------
    theta_k, theta_0 : (p, p) arrays
        Interventional and observational precision matrices.
    known_rows : dict
        Maps already-identified labels to their unit factor rows.
    mode : {"exact", "sample"}
    gamma : float
        Rank-one threshold on ``rho`` (sample mode only).

    Returns
    -------
    q : (p,) array
        Unit vector with its first non-negligible entry positive.
    ancestors : set
        Labels from ``known_rows`` retained as ancestors.
    """
    _check_mode(mode, gamma)
    diff = theta_k if isinstance(theta_k, _Difference) else _Difference(theta_k, theta_0, mode)
    if diff.scale <= 0:
        raise DegenerateInputError("precision difference is zero")
    labels = list(known_rows)
    ancestors = set(labels)
    for i in labels:
        others = [known_rows[j] for j in labels if j != i]
        rank_one, _ = _projected_dim(diff.projected(np.array(others) if others else []),
                                     diff.scale, mode, gamma)
        if rank_one:
            ancestors.discard(i)
    kept = [known_rows[a] for a in sorted(ancestors)]
    M = diff.projected(np.array(kept) if kept else [])
    if mode == "exact":
        rank_one, rho = _projected_dim(M, diff.scale, mode, gamma)
        if not rank_one:
            if rho == 0.0:
                raise DegenerateInputError("projected difference vanishes")
            raise NotInModelError("projected difference is not one-dimensional",
                                  {"rho": rho, "ancestors": sorted(ancestors)})
    return leading_right_vector(M), ancestors


def id_partial_order(ps: PrecisionSet, d=None, mode="exact", gamma=DEFAULT_GAMMA):
    """Recover the factor rows and the partial order among latent labels.

    ``ps`` must be canonical: observational context at index 0, one context
    per latent node. Label ``d - t`` is assigned to the context processed at
    step ``t``, so ancestors always carry larger labels.

    Returns
    -------
    Q_hat : (d, p) array
    order : PartialOrder
    sequence : list
        ``sequence[label]`` is the context index that produced that label.
    diagnostics : dict
    """
    _check_mode(mode, gamma)
    K = ps.K
    d = K if d is None else d
    if K != d:
        raise NotInModelError(f"need exactly one intervention per latent node (d={d}, K={K})",
                              {"d": d, "K": K})
    theta_0 = ps.thetas[0]
    diffs = {k: _Difference(ps.thetas[k], theta_0, mode) for k in range(1, K + 1)}
    Q = np.zeros((d, ps.p))
    relations = set()
    sequence = [None] * d
    label_of = {}
    step_rho = []
    remaining = list(range(1, K + 1))
    for t in range(1, K + 1):
        done = [label_of[k] for k in label_of]
        basis = Q[done] if done else []
        scores = {}
        for k in remaining:
            scores[k] = _projected_dim(diffs[k].projected(basis), diffs[k].scale, mode, gamma)
        if mode == "exact":
            passing = [k for k in remaining if scores[k][0]]
            if not passing:
                raise NotInModelError(
                    f"no remaining context has a one-dimensional projected difference at step {t}",
                    {"step": t, "rho": {k: scores[k][1] for k in remaining}})
            k = passing[0]
        else:
            k = max(remaining, key=lambda c: (scores[c][1], -c))
        known = {label_of[c]: Q[label_of[c]] for c in label_of}
        q, ancestors = id_ancestors(diffs[k], theta_0, known, mode, gamma)
        label = d - t
        Q[label] = q
        for a in ancestors:
            relations.add((label, a))
            relations.update((label, b) for (x, b) in list(relations) if x == a)
        label_of[k] = label
        sequence[label] = k
        step_rho.append(scores[k][1])
        remaining.remove(k)
    order = PartialOrder(d, frozenset(relations))
    return Q, order, sequence, {"step_rho": step_rho}


def _canonical(ps: PrecisionSet):
    obs = 0 if ps.observational_index is None else ps.observational_index
    if obs == 0:
        return ps, list(range(len(ps)))
    idx = [obs] + [k for k in range(len(ps)) if k != obs]
    return ps.subset(idx, 0), idx


def _cholesky(M, context):
    try:
        return cholesky_upper((M + M.T) / 2)
    except NotPositiveDefiniteError as err:
        raise NotPositiveDefiniteError(err.pivot, err.value, context) from None


def iterative_difference_projection(ps: PrecisionSet, mode="exact", gamma=DEFAULT_GAMMA):
    """Full recovery of ``H`` and ``B_0..B_K``.

    In exact mode, under perfect single-node interventions covering every
    latent node, the result equals the truth up to a label permutation
    preserving the DAG's topological constraints. In sample mode the same
    steps give a consistent estimator; ``d`` is taken to be ``K``.

    If ``ps.observational_index`` is set and nonzero, contexts are reordered
    so that it comes first; per-context outputs follow the reordered
    indexing and ``diagnostics["context_map"]`` records the original indices.
    """
    _check_mode(mode, gamma)
    ps, context_map = _canonical(ps)
    K = ps.K
    theta_0 = ps.thetas[0]
    d_rank = numerical_rank(theta_0)
    if mode == "exact":
        d = d_rank
        ranks = [numerical_rank(t) for t in ps.thetas]
        if len(set(ranks)) != 1:
            raise NotInModelError("contexts have different ranks", {"ranks": ranks})
    else:
        d = K
    diagnostics = {"mode": mode, "gamma": gamma, "d_rank": d_rank, "d": d,
                   "rank_discrepancy": d_rank != K, "context_map": context_map}

    Q, order, sequence, info = id_partial_order(ps, d, mode, gamma)
    diagnostics.update(info)
    diagnostics["sequence"] = sequence

    Qp = pseudoinverse(Q)
    C = [_cholesky(Qp.T @ t @ Qp, k) for k, t in enumerate(ps.thetas)]
    R = np.eye(d)
    targets = []
    candidates = list(range(d))
    row_norms = []
    for k in range(1, K + 1):
        D = C[k] - C[0]
        norms = np.linalg.norm(D, axis=1)
        row_norms.append(norms)
        if mode == "exact":
            big = np.flatnonzero(norms > ROW_TOL * np.linalg.norm(D))
            if len(big) != 1:
                raise NotInModelError(
                    f"context {k}: expected exactly one changed row, found {len(big)}",
                    {"context": k, "row_norms": norms.tolist()})
            i = int(big[0])
            if i in targets:
                raise NotInModelError(f"context {k} repeats target {i}", {"context": k})
        else:
            i = max(candidates, key=lambda c: (norms[c], -c))
        candidates.remove(i)
        targets.append(i)
        R[i] = D[i] + C[0][i]

    H_raw = R @ Q
    H, scales = normalize_rows(H_raw)
    lambdas = tuple(float(abs(scales[i])) for i in targets)
    Hp = pseudoinverse(H)
    B0 = _cholesky(Hp.T @ theta_0 @ Hp, 0)
    B = [B0]
    for i, lam in zip(targets, lambdas):
        Bk = B0.copy()
        Bk[i] = 0.0
        Bk[i, i] = lam
        B.append(Bk)

    forward = ParameterBundle(tuple(B), H).precisions().thetas
    diagnostics["residuals"] = [float(np.abs(f - t).max() / max(np.abs(t).max(), 1e-300))
                                for f, t in zip(forward, ps.thetas)]
    diagnostics["row_norms"] = [n.tolist() for n in row_norms]
    return IdentificationResult(order, Q, R, H, tuple(B), tuple(targets), lambdas, diagnostics)


def identify_from_samples(ps: PrecisionSet, gamma=DEFAULT_GAMMA):
    """Finite-sample identification; see :func:`iterative_difference_projection`."""
    return iterative_difference_projection(ps, mode="sample", gamma=gamma)


def identify(ps: PrecisionSet, mode="exact", gamma=DEFAULT_GAMMA):
    return iterative_difference_projection(ps, mode=mode, gamma=gamma)
