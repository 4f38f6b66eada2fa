"""Reduce arbitrary context collections to the canonical setting.

Counts the latent dimension, finds the observational context, groups
contexts that share an intervention target, and tests the rank condition
that every single-node intervention satisfies.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousGroupingWarning, AmbiguousObservationalError, InconsistentRankError, InvalidInputError
from .linalg import RANK_TOL, numerical_rank, rank_score
from .model import PrecisionSet

ZERO_TOL = 1e-12


def infer_latent_dimension(ps: PrecisionSet, tol=RANK_TOL):
    """Common numerical rank of all precision matrices."""
    ranks = [numerical_rank(t, tol) for t in ps.thetas]
    if len(set(ranks)) != 1:
        raise InconsistentRankError(ranks)
    return ranks[0]


def difference_rank(theta_a, theta_b, mode="exact", gamma=0.99, gamma2=0.99, tol=RANK_TOL):
    """Numerical rank of ``theta_a - theta_b``.

    Exact mode counts singular values above ``tol * sigma_1``. Sample mode
    reports 1 when ``rho >= gamma``, 2 when ``rho2 >= gamma2`` and 3 (read:
    "at least 3") otherwise. A difference below ``1e-12`` of the matrices'
    own scale counts as rank 0 in both modes.
    """
    D = np.asarray(theta_a) - np.asarray(theta_b)
    s = np.linalg.svd(D, compute_uv=False)
    floor = ZERO_TOL * max(np.abs(theta_a).max(), np.abs(theta_b).max())
    if s[0] <= floor:
        return 0
    if mode == "exact":
        return int(np.sum(s > max(tol * s[0], floor)))
    score = rank_score(D)
    if score.rho1 >= gamma:
        return 1
    if score.rho2 >= gamma2:
        return 2
    return 3


def pairwise_rank_table(ps: PrecisionSet, mode="exact", gamma=0.99, gamma2=0.99, tol=RANK_TOL):
    """Symmetric ``(K+1) x (K+1)`` integer table of ``rank(Theta_k - Theta_l)``."""
    n = len(ps)
    table = np.zeros((n, n), dtype=int)
    for k in range(n):
        for l in range(k + 1, n):
            table[k, l] = table[l, k] = difference_rank(ps.thetas[k], ps.thetas[l], mode, gamma, gamma2, tol)
    return table


def deviation_scores(table):
    """``r_k = sum over l != k of r_{k,l}``."""
    table = np.asarray(table)
    return table.sum(axis=1) - np.diag(table)


def find_observational(table):
    """Index of the context with the smallest deviation score."""
    scores = deviation_scores(table)
    best = scores.min()
    tied = np.flatnonzero(scores == best)
    if len(tied) > 1:
        raise AmbiguousObservationalError(tied.tolist(), scores.tolist())
    return int(tied[0])


def dedup_targets(table, contexts=None):
    """Group contexts whose pairwise difference has rank one.

    Groups are the connected components of the rank-one relation among
    ``contexts`` (default: all rows of ``table``). When a component holds
    a pair whose rank is not one the relation was not transitive; the
    grouping is kept and an :class:`AmbiguousGroupingWarning` is issued.

    Returns
    -------
    groups : list of lists
        Sorted context indices, groups ordered by their smallest member.
    ambiguous : bool
    """
    table = np.asarray(table)
    contexts = list(range(table.shape[0])) if contexts is None else list(contexts)
    parent = {c: c for c in contexts}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for a in contexts:
        for b in contexts:
            if a < b and table[a, b] == 1:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    comps = {}
    for c in contexts:
        comps.setdefault(find(c), []).append(c)
    groups = sorted((sorted(g) for g in comps.values()), key=lambda g: g[0])
    ambiguous = any(table[a, b] != 1 for g in groups for a in g for b in g if a < b)
    if ambiguous:
        warnings.warn("rank-one relation between contexts is not transitive; grouped by single linkage",
                      AmbiguousGroupingWarning, stacklevel=2)
    return groups, ambiguous


@dataclass
class ReductionReport:
    d: int
    observational_index: int
    duplicate_groups: list
    deviation_scores: list
    pairwise_ranks: list
    ambiguous_grouping: bool = False
    keep: list = field(default_factory=list)

    def to_dict(self):
        return {
            "d": self.d,
            "observational_index": self.observational_index,
            "duplicate_groups": self.duplicate_groups,
            "deviation_scores": self.deviation_scores,
            "pairwise_ranks": self.pairwise_ranks,
            "ambiguous_grouping": self.ambiguous_grouping,
            "keep": self.keep,
        }


def reduce_contexts(ps: PrecisionSet, mode="exact", gamma=0.99, gamma2=0.99, tol=RANK_TOL) -> ReductionReport:
    """Run the full reduction.

    The observational context is the deviation-score minimizer over all
    contexts unless ``ps.observational_index`` is already set. Duplicate
    groups are formed among the remaining contexts; ``keep`` lists the
    observational index followed by the first member of each group.
    """
    d = infer_latent_dimension(ps, tol)
    table = pairwise_rank_table(ps, mode, gamma, gamma2, tol)
    scores = deviation_scores(table)
    if len(ps) == 1:
        return ReductionReport(d, 0, [], scores.tolist(), table.tolist(), False, [0])
    obs = ps.observational_index
    if obs is None:
        obs = find_observational(table)
    interventional = [k for k in range(len(ps)) if k != obs]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AmbiguousGroupingWarning)
        groups, ambiguous = dedup_targets(table, interventional)
    if ambiguous:
        warnings.warn("rank-one relation between contexts is not transitive; grouped by single linkage",
                      AmbiguousGroupingWarning, stacklevel=2)
    keep = [obs] + [g[0] for g in groups]
    return ReductionReport(d, int(obs), groups, scores.tolist(), table.tolist(), ambiguous, keep)


def canonicalize(ps: PrecisionSet, report: ReductionReport) -> PrecisionSet:
    """Observational context first, one context per distinct target."""
    return ps.subset(report.keep, observational_index=0)


@dataclass
class MembershipResult:
    scores: list
    accept: list
    gamma2: float

    @property
    def all_accept(self):
        return all(self.accept)

    def to_dict(self):
        return {"scores": self.scores, "accept": self.accept, "gamma2": self.gamma2,
                "all_accept": self.all_accept}


def membership_scores(ps: PrecisionSet, observational_index=None):
    """``rho2(Theta_k - Theta_0)`` for each interventional context; a zero difference scores 1."""
    obs = observational_index if observational_index is not None else ps.observational_index
    if obs is None:
        raise InvalidInputError("observational index must be known for the membership test")
    out = []
    for k, t in enumerate(ps.thetas):
        if k == obs:
            continue
        D = t - ps.thetas[obs]
        out.append(1.0 if not np.any(D) else rank_score(D).rho2)
    return out


def membership_test(ps: PrecisionSet, gamma2=0.99, observational_index=None) -> MembershipResult:
    """Accept context ``k`` when ``rho2(Theta_k - Theta_0) >= gamma2`` (rank at most two)."""
    if not 0.0 < gamma2 <= 1.0:
        raise InvalidInputError("gamma2 must lie in (0, 1]")
    scores = membership_scores(ps, observational_index)
    return MembershipResult(scores, [s >= gamma2 for s in scores], gamma2)
