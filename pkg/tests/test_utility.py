import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from noisy_indicators import DimensionError, UtilityModel, dominates, sample_weights, utility, weight_grid
from noisy_indicators.utility import WeightSampleSet, default_ideal_point, resolve_model

from . import oracles


def test_linear_examples():
    lin = UtilityModel.linear()
    assert utility(lin, (1, 2), (0.5, 0.5)) == 1.5
    assert utility(lin, (3, 7), (1, 0)) == 3


def test_chebycheff_example():
    # max(0.5 * 2, 0.5 * 5)
    assert utility(UtilityModel.chebycheff((0, 0)), (2, 5), (0.5, 0.5)) == 2.5


def test_chebycheff_clamps_below_ideal():
    assert utility(UtilityModel.chebycheff((1, 1)), (0, 3), (0.5, 0.5)) == 1.0
    assert utility(UtilityModel.chebycheff((1, 1)), (0, 0), (0.5, 0.5)) == 0.0


def test_utility_errors():
    with pytest.raises(DimensionError):
        utility(UtilityModel.linear(), (1, 2), (1, 0, 0))
    with pytest.raises(ValueError):
        utility(UtilityModel.chebycheff(), (1, 2), (0.5, 0.5))
    with pytest.raises(DimensionError):
        utility(UtilityModel.chebycheff((0, 0, 0)), (1, 2), (0.5, 0.5))
    with pytest.raises(ValueError):
        UtilityModel("cobb-douglas")


def test_default_ideal_point_is_componentwise_min_minus_margin():
    z = default_ideal_point([[1, 5], [2, 3]], [[4, 0.5]])
    np.testing.assert_allclose(z, [1 - 1e-6, 0.5 - 1e-6], rtol=0, atol=1e-15)
    resolved = resolve_model(UtilityModel.chebycheff(), [[1, 5]])
    assert resolved.ideal_point is not None
    assert resolve_model(UtilityModel.linear(), [[1, 5]]) == UtilityModel.linear()


@given(
    st.lists(st.floats(0, 100), min_size=3, max_size=3),
    st.floats(0, 50),
    st.integers(0, 2**32 - 1),
)
def test_linear_homogeneity(f, c, seed):
    lam = sample_weights(3, 1, seed).samples[0]
    lin = UtilityModel.linear()
    assert utility(lin, np.multiply(c, f), lam) == pytest.approx(c * utility(lin, f, lam), rel=1e-12, abs=1e-9)


def test_weak_monotonicity_under_dominance(rng):
    W = sample_weights(3, 50, 1)
    cheb = UtilityModel.chebycheff((0.2, 0.2, 0.2))
    for _ in range(200):
        u = rng.uniform(0, 1, 3)
        v = u + rng.uniform(0, 1, 3) * (rng.uniform(size=3) < 0.6)
        if not dominates(u, v):
            continue
        for lam in W.samples:
            for model in (UtilityModel.linear(), cheb):
                assert utility(model, u, lam) <= utility(model, v, lam)


def test_utility_matches_oracle(rng):
    z = (-0.1, -0.2)
    for _ in range(100):
        f = rng.uniform(-1, 2, 2)
        lam = sample_weights(2, 1, int(rng.integers(1 << 30))).samples[0]
        assert utility(UtilityModel.linear(), f, lam) == pytest.approx(oracles.linear_u(f, lam), abs=1e-15)
        assert utility(UtilityModel.chebycheff(z), f, lam) == oracles.cheb_u(f, lam, z)


def test_sample_weights_two_objectives():
    W = sample_weights(2, 1000, 7).samples
    assert np.all((W[:, 0] >= 0) & (W[:, 0] <= 1))
    np.testing.assert_allclose(W[:, 1], 1 - W[:, 0], atol=1e-15)


def test_sample_weights_uniform_on_simplex_has_symmetric_means():
    W = sample_weights(3, 100_000, 3).samples
    np.testing.assert_allclose(W.mean(axis=0), 1 / 3, atol=0.01)


def test_sample_weights_two_objectives_first_weight_uniform():
    # Dirichlet(1, 1) marginal is U[0, 1]: mean 1/2, variance 1/12
    w = sample_weights(2, 200_000, 11).samples[:, 0]
    assert abs(w.mean() - 0.5) < 0.005
    assert abs(w.var() - 1 / 12) < 0.002


def test_sample_weights_deterministic_and_valid():
    a = sample_weights(4, 500, 42)
    b = sample_weights(4, 500, 42)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert a.seed == 42
    assert np.all(a.samples >= 0)
    np.testing.assert_allclose(a.samples.sum(axis=1), 1, atol=1e-9)
    assert not np.array_equal(a.samples, sample_weights(4, 500, 43).samples)


def test_sample_weights_rejects_one_objective():
    with pytest.raises(ValueError):
        sample_weights(1, 10, 0)


def test_weight_grid_examples():
    np.testing.assert_array_equal(weight_grid(2, 2).samples, [[0, 1], [0.5, 0.5], [1, 0]])
    assert len(weight_grid(2, 4)) == 5
    assert len(weight_grid(3, 3)) == 10


@pytest.mark.parametrize("D, k", [(2, 1), (2, 7), (3, 3), (3, 6), (4, 4), (5, 2)])
def test_weight_grid_matches_enumeration(D, k):
    expected = np.array(sorted(oracles.simplex_lattice(D, k)), dtype=float) / k
    np.testing.assert_array_equal(weight_grid(D, k).samples, expected)


def test_weight_set_validation():
    with pytest.raises(ValueError):
        WeightSampleSet(np.array([[0.5, 0.6]]))
    with pytest.raises(ValueError):
        WeightSampleSet(np.array([[-0.5, 1.5]]))
    with pytest.raises(ValueError):
        WeightSampleSet(np.empty((0, 2)))
