"""Alignment of estimates with ground truth, error metrics and the benchmark harness."""

from __future__ import annotations

import csv
import io
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidConfigError, InvalidInputError, LincdError
from .identify import IdentificationResult, iterative_difference_projection
from .model import GeneratorConfig, LatentModel, exact_precision, generate_random_model, sample_precision_set
from .order import PartialOrder


@dataclass(frozen=True)
class AlignmentProblem:
    """Match true labels to estimated labels.

    ``order`` is the ground-truth partial order; ``true_targets[k]`` and
    ``est_targets[k]`` are the true and estimated targets of context ``k+1``.
    """

    order: PartialOrder
    true_targets: tuple
    est_targets: tuple

    def __post_init__(self):
        d = self.order.d
        if len(self.true_targets) != len(self.est_targets):
            raise InvalidInputError("true and estimated targets must have equal length")
        if any(not 0 <= t < d for t in (*self.true_targets, *self.est_targets)):
            raise InvalidInputError("targets out of range")
        if len(set(self.est_targets)) != len(self.est_targets):
            raise InvalidInputError("estimated targets must be distinct")

    def gains(self):
        d = self.order.d
        g = np.zeros((d, d), dtype=int)
        for i, j in zip(self.true_targets, self.est_targets):
            g[i, j] += 1
        return g

    def agreements(self, sigma):
        return sum(int(sigma[i] == j) for i, j in zip(self.true_targets, self.est_targets))


def align_permutation(problem: AlignmentProblem, method="bnb"):
    """Permutation ``sigma`` (true label -> estimated label) in S(G) maximizing target agreements.

    ``sigma`` preserves the true order (``i ≺ j`` implies ``sigma[i] < sigma[j]``).
    Among maximizers the lexicographically smallest tuple is returned.

    ``method="bnb"`` is a depth-first branch-and-bound over node labels in
    increasing order, trying values in increasing order, so the first
    maximizer reached is the lexicographically smallest one.
    ``method="exhaustive"`` runs the same search without pruning.
    """
    if method not in ("bnb", "exhaustive"):
        raise InvalidInputError(f"unknown method {method!r}")
    order = problem.order
    d = order.d
    gain = problem.gains()
    below = [order.below(i) for i in range(d)]
    above = [order.above(i) for i in range(d)]
    prune = method == "bnb"

    sigma = [-1] * d
    used = [False] * d
    best = {"count": -1, "sigma": None}

    def bound(i, current):
        free = [v for v in range(d) if not used[v]]
        if not free:
            return current
        sub = gain[i:][:, free]
        return current + min(int(sub.max(axis=1).sum()), int(sub.max(axis=0).sum()))

    def feasible(i, v):
        for j in below[i]:
            if sigma[j] != -1 and not sigma[j] < v:
                return False
        for j in above[i]:
            if sigma[j] != -1 and not v < sigma[j]:
                return False
        # enough free labels above v for the unassigned ancestors of i
        need = sum(1 for j in above[i] if sigma[j] == -1)
        return sum(1 for w in range(v + 1, d) if not used[w]) >= need

    def dfs(i, current):
        if i == d:
            if current > best["count"]:
                best["count"], best["sigma"] = current, tuple(sigma)
            return
        if prune and best["sigma"] is not None and bound(i, current) <= best["count"]:
            return
        for v in range(d):
            if used[v] or not feasible(i, v):
                continue
            sigma[i], used[v] = v, True
            dfs(i + 1, current + int(gain[i, v]))
            sigma[i], used[v] = -1, False

    dfs(0, 0)
    return best["sigma"]


def brute_force_alignment(problem: AlignmentProblem):
    """Reference maximizer over all ``d!`` permutations (small ``d`` only)."""
    best, best_count = None, -1
    for sigma in itertools.permutations(range(problem.order.d)):
        if problem.order.preserved_by(sigma):
            c = problem.agreements(sigma)
            if c > best_count:
                best, best_count = sigma, c
    return best


def align_result(truth: LatentModel, est: IdentificationResult):
    """Return ``(sigma, H_aligned, B_aligned)`` mapping the estimate onto the truth's labels."""
    if est.H_hat.shape != truth.H.shape or len(est.B_hat) != truth.K + 1:
        raise InvalidInputError("estimate and truth dimensions disagree")
    problem = AlignmentProblem(truth.order, truth.targets, tuple(est.targets_hat))
    sigma = np.asarray(align_permutation(problem))
    H_al = est.H_hat[sigma]
    B_al = tuple(b[np.ix_(sigma, sigma)] for b in est.B_hat)
    return tuple(int(s) for s in sigma), H_al, B_al


@dataclass
class SeedRecord:
    d: int
    p: int
    K: int
    n: Optional[int]
    seed: int
    gamma: float
    h_error: float = float("nan")
    b0_error: float = float("nan")
    b_max_error: float = float("nan")
    targets_correct: bool = False
    order_correct: bool = False
    runtime_ms: Optional[float] = None
    status: str = "ok"


def score_result(truth: LatentModel, est: IdentificationResult, n=None, seed=-1, gamma=float("nan")):
    """Align ``est`` to ``truth`` and compute Frobenius errors and recovery flags."""
    sigma, H_al, B_al = align_result(truth, est)
    true_B = truth.B
    targets_ok = all(sigma[i] == j for i, j in zip(truth.targets, est.targets_hat))
    order_ok = truth.order.relabel(sigma) == est.order
    return SeedRecord(
        truth.d, truth.p, truth.K, n, seed, gamma,
        h_error=float(np.linalg.norm(H_al - truth.H)),
        b0_error=float(np.linalg.norm(B_al[0] - true_B[0])),
        b_max_error=float(max(np.linalg.norm(a - b) for a, b in zip(B_al, true_B))),
        targets_correct=bool(targets_ok), order_correct=bool(order_ok))


@dataclass(frozen=True)
class BenchmarkGrid:
    """Experiment grid. ``None`` in ``sample_sizes`` means exact precision inputs."""

    d: int = 5
    p: int = 10
    K: int = 5
    sample_sizes: tuple = (2500, 25000, 250000)
    seeds: tuple = tuple(range(100))
    gamma: float = 0.99
    kind: str = "perfect"
    density: float = 0.75

    def validate(self):
        for n in self.sample_sizes:
            if n is not None and (not isinstance(n, (int, np.integer)) or n <= 0):
                raise InvalidConfigError(f"sample sizes must be positive integers, got {n!r}")
        if not 0.0 <= self.gamma <= 1.0:
            raise InvalidConfigError("gamma must lie in [0, 1]")
        self.generator_config().validate()
        return self

    def generator_config(self):
        return GeneratorConfig(d=self.d, p=self.p, K=self.K, density=self.density, kind=self.kind)


def _run_unit(args):
    grid, n, seed, timing = args
    rec = SeedRecord(grid.d, grid.p, grid.K, n, seed, grid.gamma)
    start = time.perf_counter()
    try:
        model = generate_random_model(grid.generator_config(), seed)
        if n is None:
            ps = exact_precision(model)
            est = iterative_difference_projection(ps, "exact", grid.gamma)
        else:
            ps = sample_precision_set(model, n, seed=[seed, n])
            est = iterative_difference_projection(ps, "sample", grid.gamma)
        rec = score_result(model, est, n, seed, grid.gamma)
    except LincdError as err:
        rec.status = type(err).__name__
    except np.linalg.LinAlgError:
        rec.status = "LinAlgError"
    if timing:
        rec.runtime_ms = (time.perf_counter() - start) * 1e3
    return rec


CSV_COLUMNS = ("d", "p", "K", "n", "seed", "gamma", "h_error", "b0_error", "targets_correct",
               "order_correct", "runtime_ms", "status")


@dataclass
class BenchmarkReport:
    records: list
    aggregates: dict = field(default_factory=dict)

    @staticmethod
    def aggregate(records):
        out = {}
        keyed = sorted({r.n for r in records}, key=lambda n: (n is None, n or 0))
        for n in keyed:
            rs = [r for r in records if r.n == n]
            ok = [r for r in rs if r.status == "ok"]
            out["exact" if n is None else str(n)] = {
                "n": n,
                "count": len(rs),
                "failures": len(rs) - len(ok),
                "median_h_error": float(np.median([r.h_error for r in ok])) if ok else None,
                "median_b0_error": float(np.median([r.b0_error for r in ok])) if ok else None,
                "fraction_targets_correct": float(np.mean([r.targets_correct for r in ok])) if ok else None,
                "fraction_order_correct": float(np.mean([r.order_correct for r in ok])) if ok else None,
            }
        return out

    def to_dict(self):
        return {"records": [asdict(r) for r in self.records], "aggregates": self.aggregates}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.records:
            row = []
            for c in CSV_COLUMNS:
                v = getattr(r, c)
                if c == "n":
                    v = "inf" if v is None else v
                elif isinstance(v, bool):
                    v = int(v)
                elif isinstance(v, float):
                    v = format(v, ".17g")
                elif v is None:
                    v = ""
                row.append(v)
            w.writerow(row)
        return buf.getvalue()


def run_benchmark(grid: BenchmarkGrid, jobs=1, timing=False) -> BenchmarkReport:
    """Generate, sample, identify and score every ``(n, seed)`` pair of the grid.

    Each unit depends only on ``(grid, n, seed)``; records are sorted by
    ``(n, seed)``, so the report is identical for any ``jobs``. Per-seed
    failures are recorded with their error class as ``status``.
    ``runtime_ms`` is filled only when ``timing`` is set, since wall time
    would otherwise make reports differ between identical runs.
    """
    grid.validate()
    units = [(grid, n, int(s), timing) for n in grid.sample_sizes for s in grid.seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_unit, units, chunksize=max(1, len(units) // (4 * jobs))))
    else:
        records = [_run_unit(u) for u in units]
    records.sort(key=lambda r: (r.n is None, r.n or 0, r.seed))
    return BenchmarkReport(records, BenchmarkReport.aggregate(records))


def roc_auc(positive_scores, negative_scores):
    """Probability that a random positive outscores a random negative (ties count half)."""
    pos = np.asarray(positive_scores, dtype=float)
    neg = np.asarray(negative_scores, dtype=float)
    if pos.size == 0 or neg.size == 0:
        raise InvalidInputError("need at least one score in each class")
    greater = (pos[:, None] > neg[None, :]).sum()
    ties = (pos[:, None] == neg[None, :]).sum()
    return float((greater + 0.5 * ties) / (pos.size * neg.size))


def roc_points(positive_scores, negative_scores, thresholds):
    """``(false_positive_rate, true_positive_rate)`` for the rule "score >= threshold"."""
    pos = np.asarray(positive_scores, dtype=float)
    neg = np.asarray(negative_scores, dtype=float)
    return [(float(np.mean(neg >= t)), float(np.mean(pos >= t))) for t in thresholds]
