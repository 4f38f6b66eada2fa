"""Latent linear SEM models, exact precision matrices, synthetic generators and samplers.

Conventions
-----------
Latent nodes are labeled ``0..d-1``. An edge ``j -> i`` has ``j > i`` and
weight ``A[i, j]``, so every ``A_k`` is strictly upper triangular. In
context ``k`` the latent vector solves ``Z = A_k Z + Omega_k^{1/2} eps`` and
the observations are ``X = G Z``. The scaled structural matrix is
``B_k = Omega_k^{-1/2} (I - A_k)`` and the precision of ``X`` is
``Theta_k = H.T @ B_k.T @ B_k @ H`` with ``H = pinv(G)``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import InsufficientSamplesError, InvalidConfigError, InvalidInputError, InvalidModelError
from .linalg import normalize_rows, numerical_rank, pseudoinverse
from .order import PartialOrder

INTERVENTION_KINDS = ("perfect", "soft", "non-generic-soft")


@dataclass(frozen=True)
class Dag:
    """DAG over ``0..d-1``; ``edges`` holds pairs ``(j, i)`` for ``j -> i``."""

    d: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset((int(j), int(i)) for j, i in self.edges))
        # constructing the order checks acyclicity
        PartialOrder(self.d, frozenset((i, j) for j, i in self.edges))

    @classmethod
    def from_weights(cls, A):
        A = np.asarray(A)
        rows, cols = np.nonzero(A)
        return cls(A.shape[0], frozenset(zip(cols.tolist(), rows.tolist())))

    @property
    def is_canonical(self):
        return all(j > i for j, i in self.edges)

    def parents(self, i):
        return sorted(j for j, c in self.edges if c == i)

    def sources(self):
        return [i for i in range(self.d) if not self.parents(i)]

    def order(self) -> PartialOrder:
        """``i ≺ j`` iff ``j`` is an ancestor of ``i``."""
        return PartialOrder(self.d, frozenset((i, j) for j, i in self.edges))

    def ancestors(self, i):
        return self.order().above(i)

    def closure(self) -> "Dag":
        return Dag(self.d, frozenset((j, i) for i, j in self.order().relations))


@dataclass(frozen=True)
class ParameterBundle:
    """Parameters ``(B_0..B_K, H)`` that determine the precision matrices."""

    B: tuple
    H: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "B", tuple(np.asarray(b, dtype=float) for b in self.B))
        object.__setattr__(self, "H", np.asarray(self.H, dtype=float))

    @property
    def d(self):
        return self.H.shape[0]

    def products(self):
        return [b @ self.H for b in self.B]

    def precisions(self) -> "PrecisionSet":
        return PrecisionSet(tuple(_sym(m.T @ m) for m in self.products()), observational_index=0)

    def permuted(self, sigma) -> "ParameterBundle":
        """``(P B_k P^T, P H)`` with ``P[i, j] = 1{i == sigma[j]}``."""
        inv = np.argsort(np.asarray(sigma))
        return ParameterBundle(tuple(b[np.ix_(inv, inv)] for b in self.B), self.H[inv])


@dataclass(frozen=True)
class PrecisionSet:
    thetas: tuple
    observational_index: Optional[int] = None
    sample_sizes: Optional[tuple] = None

    def __post_init__(self):
        thetas = tuple(np.asarray(t, dtype=float) for t in self.thetas)
        if not thetas:
            raise InvalidInputError("a precision set needs at least one matrix")
        p = thetas[0].shape[0]
        for k, t in enumerate(thetas):
            if t.shape != (p, p):
                raise InvalidInputError(f"theta_{k} has shape {t.shape}, expected {(p, p)}")
            if not np.all(np.isfinite(t)):
                raise InvalidInputError(f"theta_{k} has non-finite entries")
            scale = max(np.abs(t).max(), 1.0)
            if np.abs(t - t.T).max() > 1e-8 * scale:
                raise InvalidInputError(f"theta_{k} is not symmetric")
        object.__setattr__(self, "thetas", thetas)
        if self.sample_sizes is not None:
            object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
            if len(self.sample_sizes) != len(thetas):
                raise InvalidInputError("sample_sizes must have one entry per context")
        if self.observational_index is not None and not 0 <= self.observational_index < len(thetas):
            raise InvalidInputError("observational_index out of range")

    def __len__(self):
        return len(self.thetas)

    @property
    def K(self):
        return len(self.thetas) - 1

    @property
    def p(self):
        return self.thetas[0].shape[0]

    def subset(self, indices, observational_index=None) -> "PrecisionSet":
        indices = list(indices)
        sizes = None if self.sample_sizes is None else tuple(self.sample_sizes[i] for i in indices)
        return PrecisionSet(tuple(self.thetas[i] for i in indices), observational_index, sizes)

    def to_dict(self):
        return {
            "thetas": [t.tolist() for t in self.thetas],
            "observational_index": self.observational_index,
            "sample_sizes": None if self.sample_sizes is None else list(self.sample_sizes),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(np.asarray(t, dtype=float) for t in data["thetas"]),
                   data.get("observational_index"), data.get("sample_sizes"))


@dataclass(frozen=True)
class GeneratorConfig:
    """Synthetic model distribution. Defaults follow the benchmark protocol."""

    d: int = 5
    p: int = 10
    K: int = 5
    density: float = 0.75
    weight_range: tuple = (0.25, 1.0)
    omega_range: tuple = (2.0, 4.0)
    intervened_omega_range: tuple = (6.0, 8.0)
    h_range: tuple = (-2.0, 2.0)
    kind: str = "perfect"
    targets_per_context: int = 1

    def validate(self):
        if self.d < 1:
            raise InvalidConfigError("d must be ≥ 1")
        if self.p < self.d:
            raise InvalidConfigError("p must be ≥ d")
        if self.K < 0:
            raise InvalidConfigError("K must be ≥ 0")
        if not 0.0 <= self.density <= 1.0:
            raise InvalidConfigError("density must lie in [0, 1]")
        if self.kind not in INTERVENTION_KINDS:
            raise InvalidConfigError(f"unknown intervention kind {self.kind!r}")
        if self.targets_per_context < 1 or self.targets_per_context > self.d:
            raise InvalidConfigError("targets_per_context must lie in [1, d]")
        if self.targets_per_context == 1 and self.K > self.d:
            raise InvalidConfigError("K must be ≤ d when targets are a permutation of the nodes")
        for name in ("weight_range", "omega_range", "intervened_omega_range", "h_range"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise InvalidConfigError(f"{name} must be increasing")
        if self.weight_range[0] < 0 or self.omega_range[0] <= 0 or self.intervened_omega_range[0] <= 0:
            raise InvalidConfigError("weight magnitudes must be ≥ 0 and variances > 0")
        return self

    def to_dict(self):
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data):
        data = {k: tuple(v) if isinstance(v, list) else v for k, v in data.items()}
        return cls(**data)


@dataclass(frozen=True)
class LatentModel:
    """Ground-truth latent model across ``K + 1`` contexts (context 0 observational).

    ``targets[k-1]`` is the intervened node of context ``k``. Models with
    several targets per context carry them in ``target_sets`` instead and
    leave ``targets`` empty.
    """

    A: tuple
    omega: tuple
    H: np.ndarray
    G: np.ndarray
    targets: tuple = ()
    kind: str = "perfect"
    target_sets: Optional[tuple] = None
    seed: Optional[int] = None
    config: Optional[GeneratorConfig] = None

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(np.asarray(a, dtype=float) for a in self.A))
        object.__setattr__(self, "omega", tuple(np.asarray(w, dtype=float) for w in self.omega))
        object.__setattr__(self, "H", np.asarray(self.H, dtype=float))
        object.__setattr__(self, "G", np.asarray(self.G, dtype=float))
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if self.target_sets is not None:
            object.__setattr__(self, "target_sets",
                               tuple(tuple(sorted(int(t) for t in s)) for s in self.target_sets))
        self.check()

    @property
    def d(self):
        return self.H.shape[0]

    @property
    def p(self):
        return self.H.shape[1]

    @property
    def K(self):
        return len(self.A) - 1

    @property
    def dag(self) -> Dag:
        return Dag.from_weights(self.A[0])

    @property
    def order(self) -> PartialOrder:
        return self.dag.order()

    @property
    def B(self):
        eye = np.eye(self.d)
        return tuple((eye - a) / np.sqrt(w)[:, None] for a, w in zip(self.A, self.omega))

    @property
    def lambdas(self):
        """Diagonal entry ``lambda_k`` of the intervened row of ``B_k`` (single-target models)."""
        return tuple(float(self.omega[k + 1][t] ** -0.5) for k, t in enumerate(self.targets))

    def context_targets(self, k):
        """Intervened nodes of context ``k >= 1``."""
        if self.target_sets is not None:
            return self.target_sets[k - 1]
        return (self.targets[k - 1],)

    def bundle(self) -> ParameterBundle:
        return ParameterBundle(self.B, self.H)

    def check(self):
        """Raise :class:`InvalidModelError` when a structural invariant fails."""
        d = self.d
        if len(self.A) != len(self.omega) or not self.A:
            raise InvalidModelError("A and omega must list the same number (≥ 1) of contexts")
        if self.G.shape != (self.p, d):
            raise InvalidModelError(f"G has shape {self.G.shape}, expected {(self.p, d)}")
        for k, (a, w) in enumerate(zip(self.A, self.omega)):
            if a.shape != (d, d) or w.shape != (d,):
                raise InvalidModelError(f"context {k} has mis-shaped A or omega")
            if np.any(np.tril(a) != 0):
                raise InvalidModelError(f"A_{k} is not strictly upper triangular")
            if not np.all(w > 0):
                raise InvalidModelError(f"omega_{k} must be positive")
        if not np.allclose(self.H @ self.G, np.eye(d), atol=1e-8):
            raise InvalidModelError("H @ G must equal the identity")
        if self.target_sets is None:
            if len(self.targets) != self.K:
                raise InvalidModelError("need one target per interventional context")
            sets = [(t,) for t in self.targets]
        else:
            if len(self.target_sets) != self.K:
                raise InvalidModelError("need one target set per interventional context")
            sets = self.target_sets
        for k, s in enumerate(sets, start=1):
            if any(not 0 <= t < d for t in s):
                raise InvalidModelError(f"context {k} targets out of range")
            untouched = [i for i in range(d) if i not in s]
            if not (np.array_equal(self.A[k][untouched], self.A[0][untouched])
                    and np.array_equal(self.omega[k][untouched], self.omega[0][untouched])):
                raise InvalidModelError(f"context {k} modifies nodes other than its targets")
            if self.kind == "perfect" and np.any(self.A[k][list(s)] != 0):
                raise InvalidModelError(f"context {k} is not a perfect intervention")

    def check_normalized(self):
        Hn, _ = normalize_rows(self.H)
        if not np.allclose(Hn, self.H, rtol=0, atol=1e-12):
            raise InvalidModelError("H rows are not max-abs normalized")

    def with_intervention(self, target, variance, weights=None) -> "LatentModel":
        """Append a context intervening on ``target``; perfect unless ``weights`` (new row of A) is given."""
        a = self.A[0].copy()
        a[target] = 0.0 if weights is None else weights
        w = self.omega[0].copy()
        w[target] = variance
        if self.target_sets is not None:
            raise InvalidModelError("with_intervention supports single-target models only")
        return LatentModel(self.A + (a,), self.omega + (w,), self.H, self.G,
                           self.targets + (int(target),), self.kind, None, self.seed, self.config)

    def to_dict(self):
        return {
            "d": self.d, "p": self.p, "K": self.K,
            "edges": sorted([j, i] for j, i in self.dag.edges),
            "A": [a.tolist() for a in self.A],
            "Omega": [w.tolist() for w in self.omega],
            "H": self.H.tolist(),
            "G": self.G.tolist(),
            "targets": list(self.targets),
            "target_sets": None if self.target_sets is None else [list(s) for s in self.target_sets],
            "lambdas": list(self.lambdas) if self.target_sets is None else None,
            "kind": self.kind,
            "seed": self.seed,
            "generator_config": None if self.config is None else self.config.to_dict(),
        }

    @classmethod
    def from_dict(cls, data):
        cfg = data.get("generator_config")
        return cls(
            tuple(np.asarray(a) for a in data["A"]),
            tuple(np.asarray(w) for w in data["Omega"]),
            np.asarray(data["H"]), np.asarray(data["G"]),
            tuple(data.get("targets") or ()),
            data.get("kind", "perfect"),
            None if data.get("target_sets") is None else tuple(map(tuple, data["target_sets"])),
            data.get("seed"),
            None if cfg is None else GeneratorConfig.from_dict(cfg),
        )


def _sym(M):
    return (M + M.T) / 2


def exact_precision(model) -> PrecisionSet:
    """``Theta_k = H^T B_k^T B_k H`` for every context (observational index 0)."""
    if isinstance(model, LatentModel):
        model.check()
        model = model.bundle()
    return model.precisions()


def exact_covariance(model: LatentModel, k: int) -> np.ndarray:
    """``Sigma_k = G (I - A_k)^{-1} Omega_k (I - A_k)^{-T} G^T``."""
    if not 0 <= k <= model.K:
        raise IndexError(f"context {k} out of range 0..{model.K}")
    M = model.G @ np.linalg.inv(np.eye(model.d) - model.A[k])
    return _sym((M * model.omega[k]) @ M.T)


def _signed_uniform(rng, lo, hi, size):
    return rng.uniform(lo, hi, size) * rng.choice([-1.0, 1.0], size)


def generate_random_model(cfg: GeneratorConfig, seed) -> LatentModel:
    """Draw a random latent model.

    Edges ``j -> i`` (``i < j``) appear independently with probability
    ``cfg.density``; weights are uniform on ``±weight_range``; observational
    variances uniform on ``omega_range``. Targets are a uniformly random
    injection of contexts into nodes (a permutation when ``K == d``). The
    mixing rows are drawn uniform on ``h_range``, then rescaled so each
    row's largest-magnitude entry is 1, and ``G = pinv(H)``.
    """
    cfg.validate()
    rng = np.random.default_rng(seed)
    d, p = cfg.d, cfg.p
    lo, hi = cfg.weight_range

    mask = np.triu(rng.random((d, d)) < cfg.density, k=1)
    A0 = np.where(mask, _signed_uniform(rng, lo, hi, (d, d)), 0.0)
    omega0 = rng.uniform(*cfg.omega_range, size=d)

    if cfg.targets_per_context == 1:
        targets = rng.permutation(d)[:cfg.K]
        sets = [(int(t),) for t in targets]
    else:
        sets = [tuple(sorted(rng.choice(d, cfg.targets_per_context, replace=False).tolist()))
                for _ in range(cfg.K)]

    A, omega = [A0], [omega0]
    for s in sets:
        a, w = A0.copy(), omega0.copy()
        for t in s:
            if cfg.kind == "perfect":
                a[t] = 0.0
            elif cfg.kind == "soft":
                a[t] = np.where(mask[t], _signed_uniform(rng, lo, hi, d), 0.0)
            w[t] = rng.uniform(*cfg.intervened_omega_range)
        A.append(a)
        omega.append(w)

    while True:
        H = rng.uniform(*cfg.h_range, size=(d, p))
        if numerical_rank(H) == d:
            break
    H, _ = normalize_rows(H)
    G = pseudoinverse(H)
    if cfg.targets_per_context == 1:
        return LatentModel(tuple(A), tuple(omega), H, G, tuple(s[0] for s in sets), cfg.kind,
                           None, _seed_value(seed), cfg)
    return LatentModel(tuple(A), tuple(omega), H, G, (), cfg.kind, tuple(sets), _seed_value(seed), cfg)


def _seed_value(seed):
    return seed if isinstance(seed, (int, np.integer)) else None


def sample_data(model: LatentModel, k: int, n: int, seed=None) -> np.ndarray:
    """``n`` i.i.d. draws of ``X = G B_k^{-1} eps`` with standard normal ``eps``; shape ``(n, p)``."""
    if n < 1:
        raise InvalidInputError("n must be ≥ 1")
    if not 0 <= k <= model.K:
        raise IndexError(f"context {k} out of range 0..{model.K}")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal((n, model.d))
    Z = solve_triangular(model.B[k], eps.T, lower=False)
    return (model.G @ Z).T


def sample_precision(data, d: int) -> np.ndarray:
    """Rank-``d`` truncated pseudoinverse of the sample covariance of ``data`` (rows are samples)."""
    data = np.asarray(data, dtype=float)
    n, p = data.shape
    if n <= d:
        raise InsufficientSamplesError(f"need more than d={d} samples, got {n}")
    if d > p:
        raise InvalidInputError(f"rank d={d} exceeds dimension p={p}")
    cov = np.cov(data, rowvar=False).reshape(p, p)
    w, V = np.linalg.eigh(cov)
    w, V = w[::-1][:d], V[:, ::-1][:, :d]
    if not np.all(w > 0):
        raise InsufficientSamplesError("sample covariance has fewer than d positive eigenvalues")
    return _sym((V / w) @ V.T)


def sample_precision_set(model: LatentModel, n, seed=None) -> PrecisionSet:
    """Sample precision matrices for every context, each from ``n`` fresh samples."""
    ss = np.random.SeedSequence(seed)
    children = ss.spawn(model.K + 1)
    thetas = tuple(sample_precision(sample_data(model, k, n, children[k]), model.d)
                   for k in range(model.K + 1))
    return PrecisionSet(thetas, 0, (n,) * (model.K + 1))


# -- non-identifiability constructions ---------------------------------------

COUNTEREXAMPLE_KINDS = ("motivating", "missing-intervention", "observational-only",
                        "non-generic-soft", "soft-parameter", "soft-graph")


def motivating_models():
    """The two-node model with an intervention on the source node and its independent-latent twin."""
    A0 = np.array([[0.0, -1.0], [0.0, 0.0]])
    om0, om1 = np.array([1.0, 1.0]), np.array([1.0, 0.25])
    G = np.array([[-2.0, 2.0], [2.0, -1.0]])
    G_alt = np.array([[-2.0, 4.0], [2.0, -3.0]])
    first = LatentModel((A0, A0), (om0, om1), np.linalg.inv(G), G, (1,))
    zero = np.zeros((2, 2))
    second = LatentModel((zero, zero), (om0, om1), np.linalg.inv(G_alt), G_alt, (1,))
    return first, second


def construct_counterexample(kind: str, **params):
    """Two distinct parameter bundles with identical precision matrices.

    Parameters
    ----------
    kind : str
        One of ``COUNTEREXAMPLE_KINDS``.
    **params
        ``missing-intervention`` / ``observational-only``: ``model``
        (a :class:`LatentModel`; for the former node 0 must be untargeted)
        or ``seed`` and ``d``. ``soft-parameter``: ``B0``, ``B1``, ``B2``
        (upper triangular 2x2), ``h12``, ``h12_alt``. ``soft-graph``:
        ``B0..B3`` (3x3), ``H`` (unit upper triangular), ``h12_alt``.
        Defaults are fixed generic values.
    """
    if kind == "motivating":
        first, second = motivating_models()
        return first.bundle(), second.bundle()

    if kind == "non-generic-soft":
        B = (np.array([[1.0, 1.0], [0.0, 1.0]]),
             np.array([[2.0, 2.0], [0.0, 1.0]]),
             np.array([[1.0, 1.0], [0.0, 2.0]]))
        B_alt = (np.eye(2), np.diag([2.0, 1.0]), np.diag([1.0, 2.0]))
        G_alt = np.array([[1.0, -1.0], [0.0, 1.0]])
        return ParameterBundle(B, np.eye(2)), ParameterBundle(B_alt, np.linalg.inv(G_alt))

    if kind == "observational-only":
        model = params.get("model") or generate_random_model(
            GeneratorConfig(d=params.get("d", 4), p=params.get("p", 8), K=0), params.get("seed", 0))
        B0 = model.B[0]
        M = B0 @ model.H
        H_alt, scales = normalize_rows(M)
        # B_alt @ H_alt equals B0 @ H up to row signs, which the precision cannot see
        return ParameterBundle((B0,), model.H), ParameterBundle((np.diag(np.abs(scales)),), H_alt)

    if kind == "missing-intervention":
        model = params.get("model")
        if model is None:
            model = _model_without_target(params.get("d", 4), params.get("p", 8), params.get("seed", 0))
        if 0 in model.targets:
            raise InvalidInputError("node 0 must not be an intervention target")
        B = model.B
        e1 = np.eye(model.d)[0]
        B_alt = tuple(np.vstack([e1, b[1:]]) for b in B)
        H_alt = np.vstack([B[0][0] @ model.H, model.H[1:]])
        return ParameterBundle(B, model.H), ParameterBundle(B_alt, H_alt)

    if kind == "soft-parameter":
        B0 = np.asarray(params.get("B0", [[1.0, 0.5], [0.0, 2.0]]), dtype=float)
        B1 = np.asarray(params.get("B1", [[1.5, -0.7], [0.0, 2.0]]), dtype=float)
        B2 = np.asarray(params.get("B2", [[1.0, 0.5], [0.0, 0.6]]), dtype=float)
        h12 = float(params.get("h12", 0.3))
        g12 = float(params.get("h12_alt", -0.4))
        H = np.array([[1.0, h12], [0.0, 1.0]])
        H_alt = np.array([[1.0, g12], [0.0, 1.0]])

        def shift(b):
            out = b.copy()
            out[0, 1] = b[0, 1] + b[0, 0] * h12 - b[0, 0] * g12
            return out
        B = (B0, B1, B2)
        return ParameterBundle(B, H), ParameterBundle(tuple(shift(b) for b in B), H_alt)

    if kind == "soft-graph":
        B0 = np.asarray(params.get("B0", [[1.0, 0.6, -0.8], [0.0, 1.3, 0.7], [0.0, 0.0, 0.9]]), float)
        B1 = np.asarray(params.get("B1", [[2.0, -0.5, 0.4], [0.0, 1.3, 0.7], [0.0, 0.0, 0.9]]), float)
        B2 = np.asarray(params.get("B2", [[1.0, 0.6, -0.8], [0.0, 0.5, -0.9], [0.0, 0.0, 0.9]]), float)
        B3 = np.asarray(params.get("B3", [[1.0, 0.6, -0.8], [0.0, 1.3, 0.7], [0.0, 0.0, 1.7]]), float)
        H = np.asarray(params.get("H", [[1.0, 0.2, -0.3], [0.0, 1.0, 0.5], [0.0, 0.0, 1.0]]), float)
        g12 = float(params.get("h12_alt", 0.9))
        h12, h13, h23 = H[0, 1], H[0, 2], H[1, 2]
        lhs = np.array([[b[0, 0], b[0, 1] + b[0, 0] * (h12 - g12)] for b in (B0, B1)])
        rhs = np.array([b[0, 0] * h13 + b[0, 1] * h23 + b[0, 2] for b in (B0, B1)])
        g13, g23 = np.linalg.solve(lhs, rhs)
        H_alt = np.array([[1.0, g12, g13], [0.0, 1.0, g23], [0.0, 0.0, 1.0]])

        def reweight(b):
            out = np.zeros_like(b)
            out[0, 0] = b[0, 0]
            out[0, 1] = b[0, 1] + b[0, 0] * (h12 - g12)
            out[1, 1] = b[1, 1]
            out[1, 2] = b[1, 2] + b[1, 1] * (h23 - g23)
            out[2, 2] = b[2, 2]
            return out
        B = (B0, B1, B2, B3)
        return ParameterBundle(B, H), ParameterBundle(tuple(reweight(b) for b in B), H_alt)

    raise InvalidInputError(f"unknown counterexample kind {kind!r}; expected one of {COUNTEREXAMPLE_KINDS}")


def _model_without_target(d, p, seed):
    """Random perfect model where node 0 has a parent and is never intervened on."""
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        model = generate_random_model(GeneratorConfig(d=d, p=p, K=d), rng.integers(2**32))
        if model.dag.parents(0):
            break
    else:  # pragma: no cover
        raise InvalidConfigError("could not draw a model where node 0 has a parent")
    keep = [k for k in range(1, model.K + 1) if model.targets[k - 1] != 0]
    return LatentModel((model.A[0],) + tuple(model.A[k] for k in keep),
                       (model.omega[0],) + tuple(model.omega[k] for k in keep),
                       model.H, model.G, tuple(model.targets[k - 1] for k in keep),
                       seed=model.seed, config=model.config)
