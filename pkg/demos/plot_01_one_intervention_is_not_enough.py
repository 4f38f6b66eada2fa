"""
One intervention is not enough
==============================

Two latent variables, one observational context and one intervention on
the source node. Two different models (one with an edge, one without)
produce exactly the same observed covariance in both contexts, so the
latent graph cannot be recovered from this data.
"""

import numpy as np

from lincd import exact_covariance, motivating_models

np.set_printoptions(precision=4, suppress=True)

with_edge, without_edge = motivating_models()

# the first model has an edge 1 -> 0, the second has none
print("edge weights, first model:\n", with_edge.A[0])
print("edge weights, second model:\n", without_edge.A[0])

# yet both give the same covariance in every context
for k in range(2):
    print(f"context {k}")
    print(exact_covariance(with_edge, k))
    print(exact_covariance(without_edge, k))

###############################################################################
# The fix is one intervention per latent node. With an extra context that
# intervenes on node 0 the two models separate.

a = with_edge.with_intervention(0, 4.0)
b = without_edge.with_intervention(0, 4.0)
print("context 2 differs:", not np.allclose(exact_covariance(a, 2), exact_covariance(b, 2)))
