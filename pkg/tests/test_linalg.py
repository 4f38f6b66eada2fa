import numpy as np
import numpy.testing as npt
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from lincd.errors import (DegenerateInputError, InvalidInputError, InvalidOrderError,
                          NotPositiveDefiniteError, RankDeficientError)
from lincd.linalg import (cholesky_upper, fix_sign, leading_right_vector, max_abs_scales,
                          normalize_rows, numerical_rank, orthonormalize_rows, partial_order_rq,
                          project_complement, pseudoinverse, rank_score)
from lincd.order import PartialOrder


def random_order(rng, d, density=0.5):
    rel = [(i, j) for i in range(d) for j in range(i + 1, d) if rng.random() < density]
    return PartialOrder(d, frozenset(rel))


# pseudoinverse

def test_pinv_identity():
    npt.assert_array_equal(pseudoinverse(np.eye(3), tol=1e-12), np.eye(3))


def test_pinv_of_mixing_matrix():
    G = np.array([[-2.0, 2.0], [2.0, -1.0]])
    Gi = pseudoinverse(G)
    npt.assert_allclose(Gi, [[0.5, 1.0], [1.0, 1.0]], atol=1e-14)
    npt.assert_allclose(G @ Gi, np.eye(2), atol=1e-14)


def test_pinv_rank_one_penrose():
    M = np.array([[1.0, 2.0], [2.0, 4.0]])
    P = pseudoinverse(M)
    assert np.linalg.matrix_rank(P) == 1
    npt.assert_allclose(M @ P @ M, M, atol=1e-12)
    npt.assert_allclose(P @ M @ P, P, atol=1e-12)
    npt.assert_allclose((M @ P).T, M @ P, atol=1e-12)
    npt.assert_allclose((P @ M).T, P @ M, atol=1e-12)
    # closed form for a rank-one matrix: M+ = M^T / ||M||_F^2
    npt.assert_allclose(P, M.T / 25.0, atol=1e-14)


def test_pinv_wide_matrix_matches_numpy():
    rng = np.random.default_rng(0)
    H = rng.uniform(-2, 2, (4, 9))
    npt.assert_allclose(pseudoinverse(H), np.linalg.pinv(H), atol=1e-12)
    npt.assert_allclose(H @ pseudoinverse(H), np.eye(4), atol=1e-12)


def test_pinv_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        pseudoinverse(np.array([[1.0, np.nan], [0.0, 1.0]]))


# Cholesky

def test_cholesky_identity():
    npt.assert_array_equal(cholesky_upper(np.eye(4)), np.eye(4))


@pytest.mark.parametrize("M, U", [
    ([[1.0, 1.0], [1.0, 2.0]], [[1.0, 1.0], [0.0, 1.0]]),
    ([[4.0, 4.0], [4.0, 5.0]], [[2.0, 2.0], [0.0, 1.0]]),
])
def test_cholesky_goldens(M, U):
    npt.assert_allclose(cholesky_upper(np.array(M)), U, atol=1e-15)


def test_cholesky_matches_scipy():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((8, 6))
    M = X.T @ X
    U = cholesky_upper(M)
    npt.assert_allclose(U, scipy.linalg.cholesky(M, lower=False), rtol=1e-10, atol=1e-12)
    assert np.allclose(np.tril(U, -1), 0)
    assert np.all(np.diag(U) > 0)


def test_cholesky_reports_pivot():
    M = np.diag([1.0, 2.0, -1.0])
    with pytest.raises(NotPositiveDefiniteError) as info:
        cholesky_upper(M)
    assert info.value.pivot == 2


def test_cholesky_singular():
    with pytest.raises(NotPositiveDefiniteError):
        cholesky_upper(np.ones((3, 3)))


def test_cholesky_rejects_asymmetric():
    with pytest.raises(InvalidInputError):
        cholesky_upper(np.array([[2.0, 1.0], [0.0, 2.0]]))


# projections

def test_project_empty_basis():
    M = np.arange(6.0).reshape(2, 3)
    npt.assert_array_equal(project_complement(M, np.zeros((0, 3))), M)


def test_project_coordinate():
    M = np.array([[3.0, 4.0, 0.0], [-1.0, 2.0, 0.0]])
    out = project_complement(M, np.array([[2.0, 0.0, 0.0]]))
    npt.assert_allclose(out, [[0.0, 4.0, 0.0], [0.0, 2.0, 0.0]], atol=1e-15)


def test_project_random_orthogonal():
    rng = np.random.default_rng(2)
    M = rng.standard_normal((4, 6))
    basis = rng.standard_normal((2, 6))
    out = project_complement(M, basis)
    assert np.abs(out @ basis.T).max() < 1e-10
    # oracle: explicit projector from the pseudoinverse
    P = basis.T @ np.linalg.pinv(basis.T)
    npt.assert_allclose(out, M - M @ P, atol=1e-12)


def test_project_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        project_complement(np.ones((2, 3)), np.ones((1, 4)))


def test_orthonormalize_drops_dependent_rows():
    B = np.array([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
    Q = orthonormalize_rows(B)
    assert Q.shape == (2, 3)
    npt.assert_allclose(Q @ Q.T, np.eye(2), atol=1e-15)


# rank scores

def test_rank_score_outer_product():
    u, v = np.array([1.0, -2.0, 0.5]), np.array([0.3, 1.0, 2.0, -1.0])
    s = rank_score(np.outer(u, v))
    assert s.rho1 == pytest.approx(1.0, abs=1e-14)
    assert s.rho2 == pytest.approx(1.0, abs=1e-14)


def test_rank_score_identity():
    s = rank_score(np.eye(3))
    assert s.rho1 == pytest.approx(1 / 3)
    assert s.rho2 == pytest.approx(2 / 3)


def test_rank_score_difference_of_goldens():
    D = np.array([[4.0, 4.0], [4.0, 5.0]]) - np.array([[1.0, 1.0], [1.0, 2.0]])
    assert rank_score(D).rho1 == pytest.approx(1.0, abs=1e-15)


def test_rank_score_zero_matrix():
    with pytest.raises(DegenerateInputError):
        rank_score(np.zeros((3, 3)))


def test_rank_score_matches_energy():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((5, 5))
    s = np.linalg.svd(M, compute_uv=False)
    r = rank_score(M)
    assert r.rho1 == pytest.approx(s[0] ** 2 / np.sum(s ** 2))
    assert r.rho2 == pytest.approx((s[0] ** 2 + s[1] ** 2) / np.sum(s ** 2))


def test_numerical_rank():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((6, 3))
    assert numerical_rank(X @ X.T) == 3
    assert numerical_rank(np.zeros((3, 3))) == 0


# sign and scale conventions

def test_fix_sign_first_significant_entry():
    npt.assert_array_equal(fix_sign(np.array([0.0, -2.0, 1.0])), [0.0, 2.0, -1.0])
    npt.assert_array_equal(fix_sign(np.array([1e-15, -2.0])), [-1e-15, 2.0])


def test_leading_right_vector_rank_one():
    v = np.array([0.0, -3.0, 4.0])
    q = leading_right_vector(np.outer([1.0, 2.0], v))
    npt.assert_allclose(q, [0.0, 0.6, -0.8], atol=1e-14)


def test_normalize_rows_ties_pick_leftmost():
    H = np.array([[2.0, -2.0, 1.0], [0.5, -1.0, 0.25]])
    Hn, s = normalize_rows(H)
    npt.assert_allclose(s, [2.0, -1.0])
    npt.assert_allclose(Hn, [[1.0, -1.0, 0.5], [-0.5, 1.0, -0.25]])
    npt.assert_allclose(max_abs_scales(H), s)


# partial-order RQ

def test_rq_identity_any_order():
    rng = np.random.default_rng(5)
    for _ in range(5):
        order = random_order(rng, 4)
        f = partial_order_rq(np.eye(4), order)
        npt.assert_allclose(f.R, np.eye(4), atol=1e-15)
        npt.assert_allclose(f.Q, np.eye(4), atol=1e-15)


def test_rq_hand_example():
    H = np.array([[1.0, 1.0], [0.0, 1.0]])
    f = partial_order_rq(H, PartialOrder(2, {(0, 1)}))
    npt.assert_allclose(f.Q, np.eye(2), atol=1e-15)
    npt.assert_allclose(f.R, H, atol=1e-15)


def test_rq_empty_order_is_row_normalization():
    rng = np.random.default_rng(6)
    H = rng.uniform(-2, 2, (5, 10))
    f = partial_order_rq(H, PartialOrder(5))
    norms = np.linalg.norm(H, axis=1)
    npt.assert_allclose(f.R, np.diag(norms), atol=1e-14)
    npt.assert_allclose(f.Q, H / norms[:, None], atol=1e-14)


def test_rq_chain_matches_scipy():
    rng = np.random.default_rng(7)
    H = rng.standard_normal((4, 7))
    f = partial_order_rq(H, PartialOrder.chain(4))
    R, Q = scipy.linalg.rq(H, mode="economic")
    S = np.diag(np.sign(np.diag(R)))
    npt.assert_allclose(f.R, R @ S, atol=1e-10)
    npt.assert_allclose(f.Q, S @ Q, atol=1e-10)


def test_rq_rank_deficient():
    H = np.array([[1.0, 2.0, 0.0], [2.0, 4.0, 0.0]])
    with pytest.raises(RankDeficientError):
        partial_order_rq(H, PartialOrder(2, {(0, 1)}))


def test_rq_inconsistent_order():
    with pytest.raises(InvalidOrderError):
        partial_order_rq(np.eye(2), PartialOrder(2, {(1, 0)}))


def test_rq_wrong_size_order():
    with pytest.raises(InvalidOrderError):
        partial_order_rq(np.eye(3), PartialOrder(2))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 6), extra=st.integers(0, 4),
       density=st.floats(0.0, 1.0))
def test_rq_properties(seed, d, extra, density):
    rng = np.random.default_rng(seed)
    H = rng.uniform(-2, 2, (d, d + extra))
    order = random_order(rng, d, density)
    f = partial_order_rq(H, order)
    assert np.linalg.norm(f.R @ f.Q - H) <= 1e-8 * np.linalg.norm(H)
    allowed = np.eye(d, dtype=bool) | order.matrix()
    assert np.all(f.R[~allowed] == 0.0)
    assert np.all(np.diag(f.R) > 0)
    npt.assert_allclose(np.linalg.norm(f.Q, axis=1), 1.0, atol=1e-12)
    for i, j in order.relations:
        assert abs(f.Q[i] @ f.Q[j]) <= 1e-8
