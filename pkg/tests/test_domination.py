import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ousector.domination import (
    chain_bound,
    check_domination,
    g_l1_closed_form,
    g_l1_quadrature,
    g_peak,
    g_value,
    margin,
    radial_envelope_integrals,
    sample_E_eps_delta,
    sup_integral_bound,
)
from ousector.errors import (
    DegenerateInputError,
    DivergentIntegralError,
    DomainError,
    PoleProximityError,
    SamplingError,
)
from ousector.grid import GridSpec
from ousector.mehler import conjugated_kernel
from ousector.operator_norms import z_from_s
from ousector.sector_geometry import DomainSpec, compute_params, cos2_arg, in_E, s_map

SPEC = DomainSpec(0.05, 0.3)


def random_E(params, n, seed):
    rng = np.random.default_rng(seed)
    z = rng.uniform(0.01, 6, 8 * n) + 1j * rng.uniform(-3, 3, 8 * n)
    return z[in_E(z, params)][:n]


# --- margin -------------------------------------------------------------------

def test_margin_real_p2():
    # s real: margin = 1/s
    t = 0.8
    assert margin(t, compute_params(2)) == pytest.approx(1 / math.tanh(t / 2), rel=1e-14)


def test_margin_degenerate():
    with pytest.raises(DegenerateInputError):
        margin(1j * math.pi / 2, compute_params(4))


@pytest.mark.parametrize("p", [4 / 3, 3.0, 4.0])
def test_margin_sign_equivalence(p):
    params = compute_params(p)
    rng = np.random.default_rng(7)
    # straddle |arg s| = critical angle
    phi = params.critical_angle + rng.uniform(-0.3, 0.3, 10_000)
    s = rng.uniform(0.05, 0.95, 10_000) * np.exp(1j * phi * rng.choice([-1, 1], 10_000))
    for w in s:
        z = z_from_s(w)
        c2 = cos2_arg(s_map(z))
        if abs(c2 - params.m_p ** 2) > 1e-12:
            assert (margin(z, params) > 0) == bool(c2 > params.m_p ** 2)


# --- g_z ----------------------------------------------------------------------

def test_g_radial_decreasing():
    params = compute_params(4, 2)
    z = 0.5 + 0.2j
    r = np.linspace(0, 6, 200)
    pts = np.stack([r * math.cos(0.3), r * math.sin(0.3)], axis=1)
    g = g_value(z, pts, params)
    assert g[0] == pytest.approx(g_peak(z, 2), rel=1e-15)
    assert np.all(np.diff(g) < 0) and np.all(g > 0)
    rot = np.stack([r * math.cos(2.0), r * math.sin(2.0)], axis=1)
    np.testing.assert_allclose(g_value(z, rot, params), g, rtol=1e-14)


def test_g_pole():
    with pytest.raises(PoleProximityError):
        g_value(1j * math.pi, [0.0], compute_params(2))


# --- L1 norms -----------------------------------------------------------------

@pytest.mark.parametrize("p,d", [(4 / 3, 1), (2.0, 1), (4.0, 1), (4.0, 2), (3.0, 3)])
def test_l1_closed_vs_quadrature(p, d):
    params = compute_params(p, d)
    for z in random_E(params, 100, seed=int(10 * p) + d):
        a, b = g_l1_closed_form(z, params), g_l1_quadrature(z, params)
        assert abs(a - b) <= 1e-8 * a


@pytest.mark.parametrize("d", [1, 2, 3])
def test_l1_p2_real_time(d):
    params = compute_params(2, d)
    for t in np.geomspace(1e-3, 30, 60):
        assert g_l1_closed_form(t, params) == pytest.approx((2 / (1 + math.exp(-t))) ** d, rel=1e-12)
    assert g_l1_closed_form(40.0, params) == pytest.approx(2.0 ** d, rel=1e-12)
    assert g_l1_closed_form(1e-9, params) == pytest.approx(1.0, rel=1e-6)


@settings(max_examples=200)
@given(st.floats(0.01, 5), st.floats(-3, 3), st.sampled_from([4 / 3, 2.0, 4.0]))
def test_l1_conjugate_invariant(re, im, p):
    params = compute_params(p)
    z = complex(re, im)
    if in_E(z, params):
        assert g_l1_closed_form(z, params) == pytest.approx(g_l1_closed_form(z.conjugate(), params), rel=1e-13)


def test_l1_divergent_outside():
    params = compute_params(4)
    z = z_from_s(0.5 * np.exp(1j * math.radians(75)))
    assert margin(z, params) < 0
    with pytest.raises(DivergentIntegralError):
        g_l1_closed_form(z, params)
    with pytest.raises(DivergentIntegralError):
        g_l1_quadrature(z, params)


@pytest.mark.parametrize("z", [1.0, 0.4 + 0.3j, 2 - 1j])
def test_radial_envelope(z):
    params = compute_params(4)
    env, plain = radial_envelope_integrals(z, params, GridSpec(20, 0.02))
    assert env == pytest.approx(plain, rel=1e-8)
    assert plain == pytest.approx(g_l1_closed_form(z, params), rel=1e-8)


def test_radial_envelope_d2():
    params = compute_params(4, 2)
    env, plain = radial_envelope_integrals(0.8 + 0.2j, params, GridSpec(8, 0.1, 2))
    assert env == pytest.approx(plain, rel=1e-8)


# --- domination ---------------------------------------------------------------

def test_domination_example():
    rep = check_domination(1 + 0j, compute_params(4), GridSpec(5, 0.05))
    assert rep.certified and rep.min_margin >= -1e-12
    out = json.loads(json.dumps(rep.to_dict()))
    assert set(out) >= {"z", "p", "d", "min_margin", "argmin", "grid", "samples"}
    assert out["samples"] == 201 ** 2


def test_domination_pointwise_recheck():
    params = compute_params(4)
    z = 0.3 + 0.5j
    rep = check_domination(z, params, GridSpec(5, 0.1))
    x, y = np.array(rep.argmin[0]), np.array(rep.argmin[1])
    gap = float(g_value(z, x - y, params)) - abs(conjugated_kernel(z, x, y, params))
    assert gap == pytest.approx(rep.min_margin, abs=1e-13)


@pytest.mark.parametrize("p", [4 / 3, 4.0])
def test_domination_d2(p):
    params = compute_params(p, 2)
    for z in random_E(params, 3, seed=11):
        assert check_domination(z, params, GridSpec(3, 0.25, 2)).certified


def test_domination_outside_E():
    params = compute_params(4)
    with pytest.raises(DomainError):
        check_domination(z_from_s(0.5 * np.exp(1j * math.radians(75))), params, GridSpec(2, 0.5))


def test_domination_dimension_mismatch():
    with pytest.raises(ValueError):
        check_domination(1.0, compute_params(4, 2), GridSpec(2, 0.5, 1))


# --- uniform bound ------------------------------------------------------------

def test_chain_bound_example():
    rep = sup_integral_bound(compute_params(4), SPEC, 1000)
    assert rep.samples == 1000 and rep.all_hold and rep.violations == 0
    assert rep.max_ratio <= 1
    assert rep.min_abs_one_plus_exp > 0


def test_chain_bound_d2():
    rep = sup_integral_bound(compute_params(4 / 3, 2), DomainSpec(0.1, 0.5), 300)
    assert rep.all_hold


def test_re_s_vs_abs_s_tight_on_real_axis():
    for t in (0.1, 1.0, 5.0):
        s = s_map(t)
        assert s.real == abs(s)
    s = s_map(0.5 + 0.3j)
    assert s.real < abs(s)


def test_chain_bound_formula():
    params = compute_params(4, 2)
    z = 0.7 - 0.4j
    assert chain_bound(z, params, SPEC) == pytest.approx(
        SPEC.epsilon ** -1 * 4 * abs(1 + np.exp(-z)) ** -2, rel=1e-15)


def test_sampling_deterministic_and_inside():
    params = compute_params(4)
    a = sample_E_eps_delta(params, SPEC, 200, seed=3)
    b = sample_E_eps_delta(params, SPEC, 200, seed=3)
    np.testing.assert_array_equal(a, b)
    assert np.all((a.real > 1e-3) & (a.real <= 8) & (np.abs(a.imag) <= math.pi - SPEC.delta))


def test_sampling_error():
    with pytest.raises(SamplingError):
        sample_E_eps_delta(compute_params(4), DomainSpec(0.05, 3.5), 10)
