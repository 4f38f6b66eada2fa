import numpy as np
import pytest

from lincd.errors import AmbiguousGroupingWarning, AmbiguousObservationalError, InconsistentRankError, InvalidInputError
from lincd.model import GeneratorConfig, LatentModel, PrecisionSet, exact_precision, generate_random_model
from lincd.reduction import (canonicalize, dedup_targets, deviation_scores, difference_rank, find_observational,
                             infer_latent_dimension, membership_scores, membership_test, pairwise_rank_table,
                             reduce_contexts)


def model_with_targets(targets, seed=0, density=0.75, d=5, p=10):
    base = generate_random_model(GeneratorConfig(d=d, p=p, K=0, density=density), seed)
    rng = np.random.default_rng(seed)
    m = base
    for t in targets:
        m = m.with_intervention(t, rng.uniform(6, 8))
    return m


def test_infer_dimension():
    model = generate_random_model(GeneratorConfig(), 0)
    assert infer_latent_dimension(exact_precision(model)) == 5
    assert infer_latent_dimension(PrecisionSet((np.eye(7),))) == 7


def test_infer_dimension_inconsistent():
    rng = np.random.default_rng(0)
    mats = []
    for r in (3, 3, 4):
        X = rng.standard_normal((6, r))
        mats.append(X @ X.T)
    with pytest.raises(InconsistentRankError) as info:
        infer_latent_dimension(PrecisionSet(tuple(mats)))
    assert info.value.ranks == [3, 3, 4]


def test_difference_rank_cases():
    m = model_with_targets([2, 2, 1], seed=3)
    ps = exact_precision(m)
    assert difference_rank(ps.thetas[1], ps.thetas[2]) == 1
    assert difference_rank(ps.thetas[1], ps.thetas[3]) >= 2
    assert difference_rank(ps.thetas[1], ps.thetas[1]) == 0


def test_difference_rank_sample_mode_levels():
    u = np.array([1.0, 0.0, 0.0])
    v = np.array([0.0, 1.0, 0.0])
    base = np.eye(3)
    assert difference_rank(base + np.outer(u, u), base, "sample") == 1
    assert difference_rank(base + np.outer(u, u) + np.outer(v, v), base, "sample") == 2
    assert difference_rank(2 * base, base, "sample") == 3


def test_dedup_repeated_target():
    ps = exact_precision(model_with_targets([2, 2, 1], seed=1))
    table = pairwise_rank_table(ps)
    groups, ambiguous = dedup_targets(table, [1, 2, 3])
    assert groups == [[1, 2], [3]] and not ambiguous


def test_dedup_distinct_and_single():
    ps = exact_precision(model_with_targets([0, 1, 2, 3, 4], seed=2))
    groups, _ = dedup_targets(pairwise_rank_table(ps), range(1, 6))
    assert groups == [[1], [2], [3], [4], [5]]
    groups, _ = dedup_targets(np.zeros((2, 2), dtype=int), [1])
    assert groups == [[1]]


def test_dedup_non_transitive_warns():
    table = np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    with pytest.warns(AmbiguousGroupingWarning):
        groups, ambiguous = dedup_targets(table)
    assert groups == [[0, 1, 2]] and ambiguous


def brute_deviation(ps):
    n = len(ps)
    return [sum(np.linalg.matrix_rank(ps.thetas[k] - ps.thetas[l], tol=1e-7 * np.abs(ps.thetas[k] - ps.thetas[l]).max() if k != l else 1.0)
                for l in range(n) if l != k) for k in range(n)]


def test_find_observational_shuffled_chain():
    # chain 3 -> 2 -> 1 -> 0 over d = K = 4, observational moved to position 2
    A0 = np.diag([0.8, -0.6, 0.9], k=1)
    base = LatentModel((A0,), (np.full(4, 2.0),), np.eye(4), np.eye(4))
    m = base
    for t, w in zip(range(4), (6.0, 6.5, 7.0, 7.5)):
        m = m.with_intervention(t, w)
    ps = exact_precision(m).subset([1, 2, 0, 3, 4])
    table = pairwise_rank_table(ps)
    assert find_observational(table) == 2
    assert deviation_scores(table).tolist() == brute_deviation(ps)
    # one source, so r_0 = 2K - 1
    assert deviation_scores(table)[2] == 7


def test_find_observational_all_equal():
    ps = PrecisionSet((np.eye(3),) * 3)
    with pytest.raises(AmbiguousObservationalError) as info:
        find_observational(pairwise_rank_table(ps))
    assert info.value.tied == [0, 1, 2]


@pytest.mark.parametrize("seed", range(10))
def test_reduce_contexts_recovers_structure(seed):
    rng = np.random.default_rng(seed)
    model = generate_random_model(GeneratorConfig(), seed)
    dup = int(rng.integers(5))
    m = model.with_intervention(model.targets[dup], 7.9)
    ps = exact_precision(m)
    perm = rng.permutation(len(ps))
    shuffled = ps.subset(perm)
    rep = reduce_contexts(shuffled)
    pos = {int(c): i for i, c in enumerate(perm)}
    assert rep.d == 5
    assert rep.observational_index == pos[0]
    big = [g for g in rep.duplicate_groups if len(g) > 1]
    assert big == [sorted([pos[dup + 1], pos[6]])]
    sources = len(model.dag.sources())
    assert rep.deviation_scores[rep.observational_index] == 2 * 6 - (sources + (model.targets[dup] in model.dag.sources()))
    canon = canonicalize(shuffled, rep)
    assert len(canon) == 6 and canon.observational_index == 0
    np.testing.assert_array_equal(canon.thetas[0], ps.thetas[0])


def test_reduce_single_context():
    rep = reduce_contexts(PrecisionSet((np.diag([1.0, 2.0, 0.0]),)))
    assert rep.d == 2 and rep.observational_index == 0 and rep.keep == [0]
    assert rep.to_dict()["duplicate_groups"] == []


def test_reduce_respects_given_observational_index():
    ps = exact_precision(model_with_targets([0, 1], seed=4))
    rep = reduce_contexts(PrecisionSet(ps.thetas, observational_index=0))
    assert rep.observational_index == 0 and rep.keep == [0, 1, 2]


def test_membership_exact_single_target():
    ps = exact_precision(generate_random_model(GeneratorConfig(), 5))
    res = membership_test(ps, 0.999)
    assert res.all_accept
    assert min(res.scores) > 1 - 1e-10


def test_membership_exact_two_targets():
    model = generate_random_model(GeneratorConfig(targets_per_context=2), 5)
    ps = exact_precision(model)
    res = membership_test(ps, 0.999)
    for k, ok in enumerate(res.accept, start=1):
        D = ps.thetas[k] - ps.thetas[0]
        s = np.linalg.svd(D, compute_uv=False)
        assert ok == (np.sum(s > 1e-7 * s[0]) <= 2)
    assert not res.all_accept


def test_membership_zero_difference():
    ps = PrecisionSet((np.eye(2), np.eye(2)), 0)
    assert membership_scores(ps) == [1.0]
    assert membership_test(ps).all_accept


def test_membership_errors():
    ps = PrecisionSet((np.eye(2), np.eye(2)))
    with pytest.raises(InvalidInputError):
        membership_scores(ps)
    with pytest.raises(InvalidInputError):
        membership_test(PrecisionSet((np.eye(2), np.eye(2)), 0), gamma2=0.0)
