"""Strict partial orders on latent node labels.

Labels are 0-based. A relation ``(i, j)`` reads ``i ≺ j``: node ``j`` is an
ancestor of node ``i`` in the latent DAG. Under the canonical labeling every
relation satisfies ``i < j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import InvalidOrderError


@dataclass(frozen=True)
class PartialOrder:
    d: int
    relations: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        rel = frozenset((int(i), int(j)) for i, j in self.relations)
        for i, j in rel:
            if not (0 <= i < self.d and 0 <= j < self.d):
                raise InvalidOrderError(f"relation {(i, j)} out of range for d={self.d}")
            if i == j:
                raise InvalidOrderError(f"relation {(i, j)} is reflexive")
        closed = _transitive_closure(self.d, rel)
        if any(closed[i, i] for i in range(self.d)):
            raise InvalidOrderError("relations contain a cycle")
        object.__setattr__(self, "relations",
                           frozenset(zip(*map(lambda a: a.tolist(), np.nonzero(closed)))))

    @classmethod
    def chain(cls, d: int) -> "PartialOrder":
        """Total order 0 < 1 < ... < d-1."""
        return cls(d, frozenset((i, j) for i in range(d) for j in range(i + 1, d)))

    @classmethod
    def from_adjacency(cls, A) -> "PartialOrder":
        """Order of a DAG whose weight matrix has ``A[i, j] != 0`` for edges ``j -> i``."""
        A = np.asarray(A)
        d = A.shape[0]
        return cls(d, frozenset(zip(*map(lambda a: a.tolist(), np.nonzero(A != 0)))))

    def matrix(self) -> np.ndarray:
        """Boolean matrix ``M[i, j] = (i ≺ j)``."""
        M = np.zeros((self.d, self.d), dtype=bool)
        for i, j in self.relations:
            M[i, j] = True
        return M

    def less(self, i: int, j: int) -> bool:
        return (i, j) in self.relations

    def above(self, i: int) -> list[int]:
        """Labels ``j`` with ``i ≺ j``, sorted."""
        return sorted(j for a, j in self.relations if a == i)

    def below(self, j: int) -> list[int]:
        return sorted(i for i, b in self.relations if b == j)

    def is_consistent(self) -> bool:
        """True when ``i ≺ j`` implies ``i < j``."""
        return all(i < j for i, j in self.relations)

    def relabel(self, perm: Iterable[int]) -> "PartialOrder":
        """Image of the order under ``label -> perm[label]``."""
        perm = list(perm)
        return PartialOrder(self.d, frozenset((perm[i], perm[j]) for i, j in self.relations))

    def preserved_by(self, sigma) -> bool:
        """True when ``i ≺ j`` implies ``sigma[i] < sigma[j]``, i.e. ``sigma`` lies in S(G)."""
        return all(sigma[i] < sigma[j] for i, j in self.relations)

    def sorted_relations(self) -> list[tuple[int, int]]:
        return sorted(self.relations)

    def __len__(self):
        return len(self.relations)


def _transitive_closure(d, relations):
    M = np.zeros((d, d), dtype=bool)
    for i, j in relations:
        M[i, j] = True
    # Warshall
    for k in range(d):
        M |= np.outer(M[:, k], M[k, :])
    return M
