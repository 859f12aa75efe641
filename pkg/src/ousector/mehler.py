"""Mehler kernel, its reparametrized form, the weight map U_p, and quadrature
application of the complex-time Ornstein-Uhlenbeck semigroup.

Points are arrays whose last axis is the spatial dimension: a single point
of R^d has shape ``(d,)``, a batch has shape ``(..., d)``.  Plain scalars
are treated as points of R^1.  For complex time, squared norms ``|v|^2``
are the bilinear sums ``sum v_k^2`` (no conjugation), which is what keeps
the kernels analytic in z.

Every power (1 - e^{-2z})^{-d/2} is taken on the principal branch.  Since
Re z > 0 forces Re(1 - e^{-2z}) > 0, this branch is continuous on the whole
evaluation domain, and evaluation is refused for Re z <= 0.
"""
from __future__ import annotations

import numpy as np

from . import _backend
from .errors import DomainError, ResolutionError
from .grid import GridFunction, GridSpec
from .sector_geometry import CalculusParams, s_map

MIN_QUADRATURE_TIME = 1e-3
MEASURES = ("mu", "lambda")


def _check_time(z):
    z = complex(z)
    if not z.real > 0:
        raise DomainError(f"kernel evaluation needs Re z > 0, got z = {z}")
    return z


def _as_points(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    return x


def _real_if_real_time(z, value):
    return np.real(value) if z.imag == 0 else value


def one_minus_exp2(z):
    """1 - e^{-2z} without cancellation for small z."""
    return -np.expm1(-2.0 * complex(z))


def prefactor(z, d: int):
    """(2π)^{-d/2} (1 - e^{-2z})^{-d/2}, principal branch."""
    return (2.0 * np.pi) ** (-0.5 * d) * complex(one_minus_exp2(z) ** (-0.5 * d))


def mehler(z, x, y):
    """Defining form of the Mehler kernel M_z(x, y)."""
    z = _check_time(z)
    x, y = _as_points(x), _as_points(y)
    d = x.shape[-1]
    v = one_minus_exp2(z)
    diff = np.exp(-z) * x - y
    value = prefactor(z, d) * np.exp(-np.sum(diff * diff, axis=-1) / (2.0 * v))
    return _real_if_real_time(z, value)


def _alt_form(z, x, y, c):
    z = _check_time(z)
    x, y = _as_points(x), _as_points(y)
    d = x.shape[-1]
    s = s_map(z)
    plus = np.sum((x + y) ** 2, axis=-1) / 8.0
    minus = np.sum((x - y) ** 2, axis=-1) / 2.0
    weight = 0.5 * (np.sum(x * x, axis=-1) - np.sum(y * y, axis=-1))
    value = prefactor(z, d) * np.exp(-s * plus - minus / (4.0 * s) + c * weight)
    return _real_if_real_time(z, value)


def mehler_alt(z, x, y):
    """Mehler kernel in the s_z-reparametrized form.

    exp(-s|x+y|^2/8 - |x-y|^2/(8s)) times the weight exp((φ(x) - φ(y))/2),
    with φ(x) = |x|^2/2.
    """
    return _alt_form(z, x, y, 0.5)


def conjugated_kernel(z, x, y, params: CalculusParams):
    """Kernel of U_p exp(-zL) U_p^{-1} on L^p(λ).

    Same Gaussian part as :func:`mehler_alt`, weight exponent (1/2 - 1/p)(φ(x) - φ(y)).
    """
    return _alt_form(z, x, y, 0.5 - 1.0 / params.p)


def phi(x):
    """φ(x) = |x|^2 / 2 on points with last axis d."""
    x = _as_points(x)
    return 0.5 * np.sum(x * x, axis=-1)


def u_p_apply(f: GridFunction, params: CalculusParams) -> GridFunction:
    """f -> f e^{-φ/p}, a multiple of an isometry L^p(μ) -> L^p(λ)."""
    return GridFunction(f.spec, f.values * np.exp(-phi(f.spec.points()) / params.p))


def u_p_invert(f: GridFunction, params: CalculusParams) -> GridFunction:
    return GridFunction(f.spec, f.values * np.exp(phi(f.spec.points()) / params.p))


def kernel_pairs(z, xs, ys, measure: str, params: CalculusParams | None = None):
    """Dense matrix of kernel values K[i, j] = kernel(z, xs[i], ys[j]).

    ``measure="mu"`` uses the defining Mehler form, ``"lambda"`` the
    conjugated kernel k_z (needs ``params``).  Dispatches to the selected
    backend.
    """
    z = _check_time(z)
    xs = np.ascontiguousarray(np.atleast_2d(np.asarray(xs, dtype=float)))
    ys = np.ascontiguousarray(np.atleast_2d(np.asarray(ys, dtype=float)))
    d = xs.shape[1]
    pref = prefactor(z, d)
    if measure == "mu":
        v = one_minus_exp2(z)
        return _backend.core.mehler_pairs(xs, ys, pref, np.exp(-z), 1.0 / (2.0 * v))
    if measure == "lambda":
        if params is None:
            raise ValueError("the lambda-conjugated kernel needs params")
        return _backend.core.alt_pairs(xs, ys, pref, s_map(z), 0.5 - 1.0 / params.p)
    raise ValueError(f"unknown measure {measure!r}")


def axis_operator(z, spec: GridSpec, measure: str, params: CalculusParams | None = None):
    """One-dimensional factor K[i, j] w_j of the tensor quadrature operator."""
    ax = spec.axis()[:, None]
    return kernel_pairs(z, ax, ax, measure, params) * spec.axis_weights()[None, :]


def apply_semigroup_quadrature(z, f: GridFunction, params: CalculusParams, measure: str = "mu") -> GridFunction:
    """x -> sum_y K(x, y) w_y f(y) with trapezoid weights w.

    ``measure="mu"`` applies exp(-zL) to f in L^p(μ) via the Mehler kernel;
    ``"lambda"`` applies U_p exp(-zL) U_p^{-1} via k_z.  Both kernels are
    products over coordinates, so the d-dimensional sum is applied one axis
    at a time.
    """
    z = _check_time(z)
    if z.real < MIN_QUADRATURE_TIME:
        raise ResolutionError(
            f"Re z = {z.real:.3g} < {MIN_QUADRATURE_TIME}: kernel too close to a delta for the grid"
        )
    spec = f.spec
    op = axis_operator(z, spec, measure, params)
    vals = f.values.reshape(spec.shape)
    for axis in range(spec.d):
        vals = np.moveaxis(np.tensordot(op, vals, axes=([1], [axis])), 0, axis)
    return GridFunction(spec, vals.ravel())


def pairing(z, f: GridFunction, g: GridFunction, params: CalculusParams, measure: str = "mu") -> complex:
    """Bilinear pairing <exp(-zL) f, g> against μ (or λ for the conjugated picture)."""
    tf = apply_semigroup_quadrature(z, f, params, measure)
    w = f.spec.weights()
    if measure == "mu":
        w = w * f.spec.gaussian_density()
    return complex(np.sum(w * tf.values * g.values))


def analyticity_residual(z, f: GridFunction, g: GridFunction, step: float, params: CalculusParams,
                         measure: str = "mu") -> complex:
    """Cauchy-Riemann defect (∂_x + i ∂_y) <exp(-zL) f, g> by central differences.

    Zero for an analytic pairing; of order step^2 in practice.
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step!r}")
    z = complex(z)
    for w in (z + step, z - step, z + 1j * step, z - 1j * step):
        _check_time(w)
    F = lambda w: pairing(w, f, g, params, measure)  # noqa: E731
    d_re = (F(z + step) - F(z - step)) / (2.0 * step)
    d_im = (F(z + 1j * step) - F(z - 1j * step)) / (2.0 * step)
    return d_re + 1j * d_im
