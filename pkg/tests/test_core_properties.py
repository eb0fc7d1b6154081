"""Property-based checks for the comparison-matrix invariants."""
import numpy as np
from hypothesis import given, strategies as st

from ahpkit.core import (
    ComparisonMatrix,
    Judgment,
    SCALE_VALUES,
    analyze,
    build_matrix,
    derive_priorities,
    lambda_max,
    principal_eigenvector,
)

scale_value = st.sampled_from(sorted(SCALE_VALUES))
order = st.integers(min_value=2, max_value=10)


def labels_for(n):
    return tuple(f"item-{i}" for i in range(n))


@st.composite
def judgment_matrices(draw):
    n = draw(order)
    judgments = [
        Judgment(i, j, draw(scale_value))
        for i in range(n)
        for j in range(i + 1, n)
    ]
    return build_matrix(labels_for(n), judgments)


@given(judgment_matrices())
def test_reciprocity_holds_everywhere(m):
    products = m.entries * m.entries.T
    assert np.allclose(products, 1.0, rtol=1e-12)
    assert np.all(np.diag(m.entries) == 1.0)


@given(judgment_matrices())
def test_priorities_are_a_distribution(m):
    pv = derive_priorities(m)
    assert abs(float(pv.weights.sum()) - 1.0) <= 1e-9
    assert np.all(pv.weights > 0)
    assert np.all(pv.weights <= 1.0 + 1e-12)


@given(judgment_matrices())
def test_lambda_max_at_least_order(m):
    """For any positive reciprocal matrix the estimate is >= n.

    Pairing terms t + 1/t >= 2 in the row-ratio sum gives the bound for any
    positive weight vector, so this holds for the derived priorities too.
    """
    pv = derive_priorities(m)
    assert lambda_max(m, pv) >= m.n - 1e-9


@given(judgment_matrices())
def test_consistency_fields_cohere(m):
    _, report = analyze(m)
    assert report.ci >= 0.0
    assert report.cr >= 0.0
    if report.ri > 0:
        assert report.cr == report.ci / report.ri
    else:
        assert report.cr == 0.0
    assert report.consistent == (report.cr < report.threshold)


@st.composite
def positive_weight_vectors(draw):
    n = draw(order)
    raw = draw(
        st.lists(
            st.floats(min_value=0.05, max_value=1.0, allow_nan=False),
            min_size=n,
            max_size=n,
        )
    )
    w = np.asarray(raw)
    return w / w.sum()


@given(positive_weight_vectors())
def test_consistent_matrix_recovers_generating_weights(w):
    """Ratios w_i/w_j form a consistent matrix whose priorities are w again."""
    n = w.shape[0]
    entries = w[:, None] / w[None, :]
    m = ComparisonMatrix(entries=entries, labels=labels_for(n))
    pv, report = analyze(m)
    assert np.max(np.abs(pv.weights - w)) < 1e-9
    assert report.lambda_max >= n - 1e-9
    assert report.cr < 1e-9
    assert report.consistent


@given(judgment_matrices(), st.randoms(use_true_random=False))
def test_priorities_commute_with_relabeling(m, rng):
    perm = list(range(m.n))
    rng.shuffle(perm)
    perm = np.asarray(perm)
    permuted = ComparisonMatrix(
        entries=m.entries[np.ix_(perm, perm)],
        labels=tuple(m.labels[i] for i in perm),
    )
    original = derive_priorities(m)
    shuffled = derive_priorities(permuted)
    assert np.allclose(shuffled.weights, original.weights[perm], atol=1e-12)
    _, rep_a = analyze(m)
    _, rep_b = analyze(permuted)
    assert abs(rep_a.lambda_max - rep_b.lambda_max) < 1e-9


@given(judgment_matrices())
def test_power_iteration_fixed_point(m):
    pv, lam = principal_eigenvector(m, tol=1e-13, max_iterations=5000)
    image = m.entries @ pv.weights
    assert np.allclose(image / image.sum(), pv.weights, atol=1e-10)
    assert lam >= m.n - 1e-9
