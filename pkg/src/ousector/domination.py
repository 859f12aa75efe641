"""Gaussian domination of the conjugated kernel and the L^1 bounds that follow.

For z in E the conjugated kernel satisfies |k_z(x, y)| <= g_z(x - y), where

    g_z(x) = (2π)^{-d/2} |1 - e^{-2z}|^{-d/2} exp(-margin(z) |x|^2 / 8),
    margin(z) = Re(1/s_z) - m_p^2 / Re(s_z).

The bound comes from completing the square in u = |x+y|/(2√2) against
k = |x-y|/√2 after replacing the weight (1/2 - 1/p)(φ(x) - φ(y)) by its
worst case m_p u k.  ``check_domination`` tests the signed kernel itself.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import qmc

from . import _backend
from .defaults import TOLERANCES
from .errors import DegenerateInputError, DivergentIntegralError, DomainError, SamplingError
from .grid import GridSpec
from .mehler import one_minus_exp2
from .sector_geometry import CalculusParams, DomainSpec, in_E, in_E_eps_delta, s_map

DOMINATION_TOL = TOLERANCES["domination"]
CHAIN_RTOL = TOLERANCES["chain"]
SAMPLE_RE_MIN = 1e-3
SAMPLE_RE_MAX = 8.0


def margin(z, params: CalculusParams) -> float:
    """Re(1/s_z) - m_p^2 / Re(s_z) = (cos^2(arg s_z) - m_p^2) / Re(s_z)."""
    s = s_map(z)
    if s.real == 0:
        raise DegenerateInputError(f"Re s_z = 0 at z = {z}")
    return (1.0 / s).real - params.m_p ** 2 / s.real


def g_peak(z, d: int) -> float:
    """g_z(0) = (2π)^{-d/2} |1 - e^{-2z}|^{-d/2}."""
    s_map(z)  # pole check
    return (2.0 * math.pi) ** (-0.5 * d) * abs(one_minus_exp2(z)) ** (-0.5 * d)


def g_value(z, x, params: CalculusParams):
    """Dominating kernel g_z at points ``x`` (last axis d)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    d = x.shape[-1]
    return g_peak(z, d) * np.exp(-0.125 * margin(z, params) * np.sum(x * x, axis=-1))


def g_l1_closed_form(z, params: CalculusParams) -> float:
    """||g_z||_{L^1(λ)} = 2^{-d/2} |1 - e^{-2z}|^{-d/2} (margin/8)^{-d/2}."""
    mg = margin(z, params)
    if not mg > 0:
        raise DivergentIntegralError(f"margin(z) = {mg:.6g} <= 0: g_z is not integrable")
    d = params.d
    return 2.0 ** (-0.5 * d) * abs(one_minus_exp2(z)) ** (-0.5 * d) * (0.125 * mg) ** (-0.5 * d)


def g_l1_quadrature(z, params: CalculusParams, nodes: int = 801) -> float:
    """Trapezoid value of ∫ g_z dλ on a grid scaled to the width of g_z.

    g_z is a product of one-dimensional Gaussians, so the d-dimensional
    integral is the d-th power of a one-dimensional one.
    """
    mg = margin(z, params)
    if not mg > 0:
        raise DivergentIntegralError(f"margin(z) = {mg:.6g} <= 0: g_z is not integrable")
    half_width = 40.0 / math.sqrt(mg)  # exp(-mg R^2/8) = e^{-200}
    x = np.linspace(-half_width, half_width, nodes)
    one_d = trapezoid(np.exp(-0.125 * mg * x * x), x)
    return g_peak(z, params.d) * one_d ** params.d


def radial_envelope_integrals(z, params: CalculusParams, spec: GridSpec):
    """(∫ sup_{|y|>=|x|} g_z(y) dx, ∫ g_z dx) by trapezoid quadrature on ``spec``.

    The supremum runs over grid nodes, so both integrals use the same
    sampling; they coincide when g_z is radially decreasing.
    """
    pts = spec.points()
    g = g_value(z, pts, params)
    r = np.sqrt(np.sum(pts * pts, axis=-1))
    order = np.argsort(-r, kind="stable")
    env = np.empty_like(g)
    env[order] = np.maximum.accumulate(g[order])
    # nodes sharing a radius share the envelope value
    _, inverse = np.unique(np.round(r, 12), return_inverse=True)
    shared = np.zeros(inverse.max() + 1)
    np.maximum.at(shared, inverse, env)
    env = shared[inverse]
    w = spec.weights()
    return float(np.sum(w * env)), float(np.sum(w * g))


@dataclass
class DominationReport:
    z: complex
    p: float
    d: int
    grid: GridSpec
    min_margin: float
    argmin: tuple
    samples: int
    backend: str

    @property
    def certified(self) -> bool:
        return self.min_margin >= -DOMINATION_TOL

    def to_dict(self):
        return {
            "z": [self.z.real, self.z.imag],
            "p": self.p,
            "d": self.d,
            "min_margin": self.min_margin,
            "argmin": [list(map(float, self.argmin[0])), list(map(float, self.argmin[1]))],
            "grid": self.grid.to_dict(),
            "samples": self.samples,
            "certified": self.certified,
            "tolerance": DOMINATION_TOL,
        }


def check_domination(z, params: CalculusParams, spec: GridSpec) -> DominationReport:
    """min over node pairs of g_z(x - y) - |k_z(x, y)|.

    Certified when the minimum is >= -1e-12.  Raises :class:`DomainError`
    for z outside E, where the bound is not claimed.
    """
    z = complex(z)
    if not in_E(z, params):
        raise DomainError(f"z = {z} is not in E for p = {params.p}")
    if spec.d != params.d:
        raise ValueError(f"grid dimension {spec.d} != params dimension {params.d}")
    pts = np.ascontiguousarray(spec.points())
    best, i, j = _backend.core.domination_scan(
        pts, pts, g_peak(z, spec.d), s_map(z), 0.5 - 1.0 / params.p, margin(z, params)
    )
    return DominationReport(
        z=z,
        p=params.p,
        d=spec.d,
        grid=spec,
        min_margin=float(best),
        argmin=(tuple(pts[i]), tuple(pts[j])),
        samples=pts.shape[0] ** 2,
        backend=_backend.BACKEND,
    )


def sample_E_eps_delta(params: CalculusParams, spec: DomainSpec, count: int, seed: int = 42,
                       max_draws: int = 1 << 22) -> np.ndarray:
    """First ``count`` scrambled-Halton points of Re z in (1e-3, 8],
    |Im z| <= π - δ that lie in E(eps, delta)."""
    spec.validate(params)
    gen = qmc.Halton(d=2, scramble=True, seed=seed)
    im_half = math.pi - spec.delta
    if im_half <= 0:
        raise SamplingError("delta >= π leaves no sampling window")
    kept, drawn, batch = [], 0, max(1024, 4 * count)
    while sum(len(k) for k in kept) < count and drawn < max_draws:
        u = gen.random(batch)
        drawn += batch
        z = (SAMPLE_RE_MIN + (SAMPLE_RE_MAX - SAMPLE_RE_MIN) * (1.0 - u[:, 0])) + 1j * im_half * (2.0 * u[:, 1] - 1.0)
        kept.append(z[in_E_eps_delta(z, params, spec)])
    z = np.concatenate(kept)[:count] if kept else np.empty(0, dtype=complex)
    if len(z) < count:
        raise SamplingError(f"found only {len(z)} of {count} points of E(eps, delta) in the window")
    return z


@dataclass
class SupBoundReport:
    p: float
    d: int
    epsilon: float
    delta: float
    samples: int
    seed: int
    all_hold: bool
    violations: int
    sup_l1: float
    sup_chain_bound: float
    max_ratio: float
    min_abs_one_plus_exp: float
    worst_z: complex

    def to_dict(self):
        out = asdict(self)
        out["worst_z"] = [self.worst_z.real, self.worst_z.imag]
        return out


def chain_bound(z, params: CalculusParams, spec: DomainSpec) -> float:
    """ε^{-d/2} 2^d |1 + e^{-z}|^{-d}, the z-wise bound on ||g_z||_1 over E(eps, delta)."""
    d = params.d
    return spec.epsilon ** (-0.5 * d) * 2.0 ** d * abs(1.0 + np.exp(-complex(z))) ** (-d)


def sup_integral_bound(params: CalculusParams, spec: DomainSpec, sample_count: int = 1000,
                       seed: int = 42) -> SupBoundReport:
    """Check ||g_z||_1 <= ε^{-d/2} 2^d |1 + e^{-z}|^{-d} at sampled z in E(eps, delta).

    Since g_z is radial and decreasing, ||g_z||_1 equals the radial-envelope
    integral whose uniform finiteness is the R-boundedness criterion.
    """
    zs = sample_E_eps_delta(params, spec, sample_count, seed)
    lhs = np.array([g_l1_closed_form(z, params) for z in zs])
    rhs = np.array([chain_bound(z, params, spec) for z in zs])
    ok = lhs <= rhs * (1.0 + CHAIN_RTOL)
    ratio = lhs / rhs
    k = int(np.argmax(ratio))
    return SupBoundReport(
        p=params.p,
        d=params.d,
        epsilon=spec.epsilon,
        delta=spec.delta,
        samples=len(zs),
        seed=seed,
        all_hold=bool(ok.all()),
        violations=int((~ok).sum()),
        sup_l1=float(lhs.max()),
        sup_chain_bound=float(rhs.max()),
        max_ratio=float(ratio[k]),
        min_abs_one_plus_exp=float(np.min(np.abs(1.0 + np.exp(-zs)))),
        worst_z=complex(zs[k]),
    )
