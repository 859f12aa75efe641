import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import hermite_e

from ousector.errors import QuadratureOrderError
from ousector.grid import GridFunction, GridSpec
from ousector.hermite import (
    HermiteExpansion,
    apply_semigroup_spectral,
    expand_mu,
    gauss_hermite,
    hermite_table,
    hermite_value,
    multi_indices,
    synthesize,
)
from ousector.mehler import apply_semigroup_quadrature
from ousector.sector_geometry import compute_params


def test_low_degrees():
    x = np.linspace(-3, 3, 11)
    np.testing.assert_allclose(hermite_value(0, x), 1.0)
    np.testing.assert_allclose(hermite_value(1, x), x)
    np.testing.assert_allclose(hermite_value(2, x), (x * x - 1) / math.sqrt(2), rtol=1e-15, atol=1e-15)


@pytest.mark.parametrize("n", range(13))
def test_recurrence_matches_numpy(n):
    # independent construction from the He_n power series
    x = np.linspace(-4, 4, 41)
    ref = hermite_e.hermeval(x, [0] * n + [1]) / math.sqrt(math.factorial(n))
    np.testing.assert_allclose(hermite_value(n, x), ref, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("order", [1, 2, 5, 16, 40, 64])
def test_golub_welsch_matches_numpy(order):
    nodes, weights = gauss_hermite(order)
    ref_nodes, ref_weights = hermite_e.hermegauss(order)
    np.testing.assert_allclose(nodes, ref_nodes, atol=1e-12 * max(1, np.abs(ref_nodes).max()))
    np.testing.assert_allclose(weights, ref_weights / math.sqrt(2 * math.pi), rtol=1e-10, atol=0)
    assert weights.sum() == pytest.approx(1.0, abs=1e-14)


def test_gauss_hermite_exactness():
    nodes, weights = gauss_hermite(6)
    # E[X^{2k}] = (2k-1)!!
    for k, moment in enumerate([1, 1, 3, 15, 105, 945]):
        assert weights @ nodes ** (2 * k) == pytest.approx(moment, rel=1e-12)
        assert abs(weights @ nodes ** (2 * k + 1)) < 1e-10


def test_gauss_hermite_bad_order():
    with pytest.raises(QuadratureOrderError):
        gauss_hermite(0)


def test_orthonormality():
    nodes, weights = gauss_hermite(20)
    H = hermite_table(8, nodes)
    gram = (H * weights) @ H.T
    np.testing.assert_allclose(gram, np.eye(9), atol=1e-12)


def test_multi_indices_graded_lex():
    assert multi_indices(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert multi_indices(3, 1) == [(0,), (1,), (2,), (3,)]
    idx = multi_indices(4, 3)
    assert len(idx) == math.comb(7, 3)
    assert [sum(a) for a in idx] == sorted(sum(a) for a in idx)


def test_expand_h3():
    e = expand_mu(lambda x: hermite_value(3, x[:, 0]), 6)
    target = np.zeros(7)
    target[3] = 1
    np.testing.assert_allclose(e.coefficients, target, atol=1e-13)


def test_expand_x_squared():
    e = expand_mu(lambda x: x[:, 0] ** 2, 5)
    np.testing.assert_allclose(e.coefficients, [1, 0, math.sqrt(2), 0, 0, 0], atol=1e-13)


def test_expand_product_d2():
    f = lambda x: hermite_value(1, x[:, 0]) * hermite_value(2, x[:, 1])  # noqa: E731
    e = expand_mu(f, 4, d=2)
    expected = HermiteExpansion.from_terms({(1, 2): 1.0}, 4, 2)
    np.testing.assert_allclose(e.coefficients, expected.coefficients, atol=1e-13)


def test_expand_grid_function():
    spec = GridSpec.default(1)
    f = GridFunction(spec, spec.axis() ** 2)
    e = expand_mu(f, 4)
    np.testing.assert_allclose(e.coefficients, [1, 0, math.sqrt(2), 0, 0], atol=1e-10)


def test_expand_order_guard():
    with pytest.raises(QuadratureOrderError):
        expand_mu(lambda x: x[:, 0], 6, order=5)


def test_parseval():
    coeffs = np.array([0.5, -1.0, 0.25, 2.0, 0.0, -0.3])
    f = lambda x: coeffs @ hermite_table(5, x[:, 0])  # noqa: E731
    nodes, weights = gauss_hermite(12)
    norm2 = weights @ np.abs(f(nodes[:, None])) ** 2
    e = expand_mu(f, 5)
    assert np.sum(np.abs(e.coefficients) ** 2) == pytest.approx(norm2, rel=1e-12)


def test_spectral_identity_at_zero():
    e = HermiteExpansion(1, 4, np.arange(5) + 1j)
    np.testing.assert_array_equal(apply_semigroup_spectral(0, e).coefficients, e.coefficients)


@settings(max_examples=50)
@given(st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3))
def test_multiplier_composition(z1, z2):
    e = HermiteExpansion(2, 5, np.linspace(-1, 1, 21) + 0.5j)
    two = apply_semigroup_spectral(z1, apply_semigroup_spectral(z2, e))
    one = apply_semigroup_spectral(z1 + z2, e)
    np.testing.assert_allclose(two.coefficients, one.coefficients, rtol=1e-13, atol=1e-300)


def test_synthesize_examples():
    spec = GridSpec(3, 0.5)
    e = HermiteExpansion.from_terms({1: 1.0}, 3)
    np.testing.assert_allclose(synthesize(e, spec).values, spec.axis())


def test_synthesize_linear():
    spec = GridSpec(2, 0.1, 2)
    rng = np.random.default_rng(0)
    e1 = HermiteExpansion(2, 4, rng.standard_normal(15) + 1j * rng.standard_normal(15))
    e2 = HermiteExpansion(2, 4, rng.standard_normal(15))
    a = 0.7 - 1.2j
    lhs = synthesize(a * e1 + e2, spec).values
    rhs = a * synthesize(e1, spec).values + synthesize(e2, spec).values
    np.testing.assert_allclose(lhs, rhs, rtol=1e-14, atol=1e-14)


def test_json_round_trip():
    e = HermiteExpansion(2, 3, np.arange(10) * (1 - 0.5j))
    back = HermiteExpansion.from_json(e.to_json())
    assert (back.d, back.max_degree) == (2, 3)
    np.testing.assert_array_equal(back.coefficients, e.coefficients)
    assert '"entries": [[[0, 0], 0.0, 0.0], [[1, 0], 1.0, -0.5]' in e.to_json()


@pytest.mark.parametrize("z", [1.0, 0.5 + 0.3j, 2.0 - 0.5j])
def test_oracle_agreement(z):
    spec = GridSpec.default(1)
    params = compute_params(2)
    x = spec.axis()
    inside = np.abs(x) <= spec.radius / 2
    for n in range(9):
        out = apply_semigroup_quadrature(z, GridFunction(spec, hermite_value(n, x)), params)
        ref = synthesize(apply_semigroup_spectral(z, HermiteExpansion.from_terms({n: 1.0}, 8)), spec)
        assert np.max(np.abs(out.values - ref.values)[inside]) <= 1e-8


def test_oracle_agreement_d2():
    # R = 8: the default d = 2 box truncates the kernel tail at the 1e-5 level
    spec = GridSpec(8, 0.1, 2)
    params = compute_params(2, 2)
    e = HermiteExpansion.from_terms({(1, 0): 1.0, (1, 2): 0.5, (0, 3): -0.25j}, 3, 2)
    z = 0.6 + 0.2j
    out = apply_semigroup_quadrature(z, synthesize(e, spec), params)
    ref = synthesize(apply_semigroup_spectral(z, e), spec)
    inside = np.all(np.abs(spec.points()) <= spec.radius / 2, axis=1)
    assert np.max(np.abs(out.values - ref.values)[inside]) <= 1e-8
