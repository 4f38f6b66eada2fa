"""
Shuffled contexts, repeated targets and model checking
======================================================

Real collections of contexts arrive unlabeled: the observational one is
not marked and some interventions hit the same node twice. Pairwise ranks
of precision differences sort this out. A rank-two test then checks
whether each context looks like a single-node intervention.
"""

import numpy as np

from lincd import (GeneratorConfig, canonicalize, exact_precision, generate_random_model, identify,
                   membership_test, reduce_contexts, roc_auc, sample_precision_set)
from lincd.reduction import membership_scores

model = generate_random_model(GeneratorConfig(), seed=3)
# add a second intervention on the first context's target, then shuffle
model = model.with_intervention(model.targets[0], 7.0)
ps = exact_precision(model).subset([4, 0, 6, 1, 2, 3, 5])

report = reduce_contexts(ps)
print("observational context:", report.observational_index)
print("groups of contexts with the same target:", report.duplicate_groups)
print("deviation scores:", report.deviation_scores)

result = identify(canonicalize(ps, report))
print("identified targets:", result.targets_hat)

###############################################################################
# With exact inputs every single-node context passes the rank-two test.

print("exact single-target, all accepted:", membership_test(exact_precision(model), 0.999).all_accept)

###############################################################################
# With 2500 samples the test is noisy but still separates single-target
# contexts from two-target ones better than chance.

pos, neg = [], []
for seed in range(40):
    one = generate_random_model(GeneratorConfig(), seed)
    two = generate_random_model(GeneratorConfig(targets_per_context=2), seed)
    pos += membership_scores(sample_precision_set(one, 2500, seed=seed))
    neg += membership_scores(sample_precision_set(two, 2500, seed=seed))
print(f"AUC of the rank-two score: {roc_auc(pos, neg):.3f}")
for t in np.linspace(0.97, 0.999, 5):
    print(f"  threshold {t:.4f}: accept {np.mean(np.array(pos) >= t):.2f} single, "
          f"{np.mean(np.array(neg) >= t):.2f} double")
