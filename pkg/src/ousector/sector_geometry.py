"""Complex-time geometry: the map z -> s_z, sectors, and the domains E, E(eps, delta).

All predicates accept a scalar or an array of complex numbers.  Scalar input
gives a Python ``bool``; array input gives a boolean array of the same shape.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import qmc

from .errors import (
    DomainError,
    InvalidDomainSpecError,
    InvalidExponentError,
    PoleProximityError,
    SearchFailureError,
)

POLE_TOL = 1e-12

# Search grids for verify_sector_containment.
EPS_GRID = tuple(2.0 ** -k for k in range(1, 21))
DELTA_GRID = tuple(2.0 ** -k for k in range(1, 11))

OUTSIDE, IN_E, IN_E_EPS_DELTA = 0, 1, 2


@dataclass(frozen=True)
class CalculusParams:
    """Exponent ``p`` of L^p(mu) with its critical constants.

    ``m_p = |1 - 2/p|`` and ``theta_p = arcsin(m_p)``.
    """

    p: float
    d: int = 1
    m_p: float = field(init=False)
    theta_p: float = field(init=False)

    def __post_init__(self):
        p = float(self.p)
        if not math.isfinite(p) or p <= 1.0:
            raise InvalidExponentError(f"exponent must satisfy 1 < p < inf, got {self.p!r}")
        if int(self.d) != self.d or self.d < 1:
            raise InvalidExponentError(f"dimension must be a positive integer, got {self.d!r}")
        m_p = abs(1.0 - 2.0 / p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "m_p", m_p)
        object.__setattr__(self, "theta_p", math.asin(m_p))

    @property
    def conjugate_exponent(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def critical_angle(self) -> float:
        """Half-angle pi/2 - theta_p of the s-sector defining E."""
        return 0.5 * math.pi - self.theta_p

    def to_dict(self):
        return asdict(self)


def compute_params(p: float, d: int = 1) -> CalculusParams:
    return CalculusParams(p, d)


@dataclass(frozen=True)
class DomainSpec:
    """Margin ``epsilon`` on cos^2(arg s_z) and clearance ``delta`` from iπ(2Z+1)."""

    epsilon: float
    delta: float

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise InvalidDomainSpecError(f"epsilon must be positive, got {self.epsilon!r}")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise InvalidDomainSpecError(f"delta must be positive, got {self.delta!r}")

    def validate(self, params: CalculusParams) -> "DomainSpec":
        if params.m_p ** 2 + self.epsilon > 1.0:
            raise InvalidDomainSpecError(
                f"m_p^2 + epsilon = {params.m_p ** 2 + self.epsilon:.6g} > 1: E(eps, delta) is empty"
            )
        return self

    def to_dict(self):
        return asdict(self)


def _finish(mask, scalar):
    return bool(mask) if scalar else mask


def odd_pole_distance(z):
    """Distance from ``z`` to the nearest point of iπ(2Z+1)."""
    z = np.asarray(z, dtype=complex)
    k = np.round((z.imag / np.pi - 1.0) / 2.0)
    return np.abs(z - 1j * np.pi * (2.0 * k + 1.0))


def _lattice_distance(z, period):
    z = np.asarray(z, dtype=complex)
    k = np.round(z.imag / period)
    return np.abs(z - 1j * period * k)


def s_map(z):
    """(1 - e^{-z}) / (1 + e^{-z}), evaluated as tanh(z/2).

    The tanh form avoids overflow of e^{-z} for Re z << 0 and agrees with the
    quotient to rounding everywhere else.
    """
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    if np.any(odd_pole_distance(z) < POLE_TOL):
        raise PoleProximityError("z lies within 1e-12 of a pole iπ(2k+1) of s_z")
    s = np.tanh(0.5 * z)
    return complex(s) if scalar else s


def _s_map_masked(z):
    """s_z with poles replaced by nan, plus the finite mask."""
    z = np.asarray(z, dtype=complex)
    ok = odd_pole_distance(z) >= POLE_TOL
    s = np.full(z.shape, np.nan + 0j)
    s[ok] = np.tanh(0.5 * z[ok])
    return s, ok


def in_sector(z, theta: float):
    """``z != 0`` and ``|arg z| < theta`` (open sector)."""
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"sector angle must lie in [0, pi], got {theta!r}")
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    with np.errstate(invalid="ignore"):
        mask = (z != 0) & (np.abs(np.angle(z)) < theta)
    return _finish(mask, scalar)


def in_E(z, params: CalculusParams):
    """Membership in E = {z : s_z in Σ_{π/2 - θ_p}, z not in iπZ}."""
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    s, ok = _s_map_masked(z)
    ok &= _lattice_distance(z, np.pi) >= POLE_TOL
    mask = np.zeros(z.shape, dtype=bool)
    mask[ok] = in_sector(s[ok], params.critical_angle)
    return _finish(mask, scalar)


def cos2_arg(s):
    s = np.asarray(s, dtype=complex)
    with np.errstate(invalid="ignore", divide="ignore"):
        return s.real ** 2 / np.abs(s) ** 2


def in_E_eps_delta(z, params: CalculusParams, spec: DomainSpec):
    """Membership in E(eps, delta).

    Requires cos^2(arg s_z) > m_p^2 + eps with Re s_z > 0, distance to
    iπ(2Z+1) greater than delta, and z not in 2πiZ.
    """
    spec.validate(params)
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    s, ok = _s_map_masked(z)
    ok &= odd_pole_distance(z) > spec.delta
    ok &= _lattice_distance(z, 2.0 * np.pi) >= POLE_TOL
    mask = np.zeros(z.shape, dtype=bool)
    sv = s[ok]
    mask[ok] = (sv.real > 0) & (cos2_arg(sv) > params.m_p ** 2 + spec.epsilon)
    return _finish(mask, scalar)


@dataclass
class ContainmentReport:
    p: float
    d: int
    eps_prime: float
    sector_angle: float
    radius_cap: float
    samples: int
    seed: int
    worst_margin: float
    min_pole_distance: float
    epsilon: float
    delta: float
    all_inside: bool

    def to_dict(self):
        return asdict(self)


def sample_truncated_sector(angle: float, radius: float, count: int, seed: int = 42):
    """Scrambled-Halton points of the closed sector |arg z| <= angle, 0 < |z| <= radius.

    Radii are drawn area-uniformly.
    """
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(count)
    r = radius * np.sqrt(u[:, 0])
    r[r == 0] = radius * 1e-12
    phi = angle * (2.0 * u[:, 1] - 1.0)
    return r * np.exp(1j * phi)


def verify_sector_containment(
    params: CalculusParams,
    eps_prime: float,
    sample_count: int = 10_000,
    radius_cap: float = 10.0,
    seed: int = 42,
):
    """Find (eps, delta) with Σ_{π/2-θ_p-eps'} ∩ {|z| <= radius_cap} inside E(eps, delta).

    The check is empirical: ``sample_count`` quasi-random points of the
    truncated sector must all pass :func:`in_E_eps_delta`.  Returns the
    largest passing pair on the search grid and a :class:`ContainmentReport`.
    """
    if not 0.0 < eps_prime < params.critical_angle:
        raise DomainError(
            f"eps_prime must lie in (0, {params.critical_angle:.6g}), got {eps_prime!r}"
        )
    angle = params.critical_angle - eps_prime
    z = sample_truncated_sector(angle, radius_cap, sample_count, seed)

    if np.any(_lattice_distance(z, 2.0 * np.pi) < POLE_TOL):
        raise SearchFailureError("a sample hit 2πiZ")
    dist = odd_pole_distance(z)
    s, ok = _s_map_masked(z)
    if not ok.all() or np.any(s.real <= 0):
        raise SearchFailureError("a sample has Re s_z <= 0; no (eps, delta) can contain it")
    worst_margin = float(np.min(cos2_arg(s)) - params.m_p ** 2)
    min_dist = float(np.min(dist))

    eps_ok = [e for e in EPS_GRID if e < worst_margin and params.m_p ** 2 + e <= 1.0]
    delta_ok = [dl for dl in DELTA_GRID if dl < min_dist]
    if not eps_ok or not delta_ok:
        raise SearchFailureError(
            f"no (eps, delta) on the search grid contains the sampled sector "
            f"(worst margin {worst_margin:.3g}, min pole distance {min_dist:.3g})"
        )
    spec = DomainSpec(eps_ok[0], delta_ok[0])
    inside = bool(np.all(in_E_eps_delta(z, params, spec)))
    if not inside:
        raise SearchFailureError("selected (eps, delta) rejected by the membership predicate")
    report = ContainmentReport(
        p=params.p,
        d=params.d,
        eps_prime=eps_prime,
        sector_angle=angle,
        radius_cap=radius_cap,
        samples=sample_count,
        seed=seed,
        worst_margin=worst_margin,
        min_pole_distance=min_dist,
        epsilon=spec.epsilon,
        delta=spec.delta,
        all_inside=inside,
    )
    return spec, report


@dataclass
class DomainRaster:
    """Membership labels on a rectangle of the complex plane.

    ``labels[i, j]`` belongs to the point ``re[j] + 1j * im[i]``; rows run
    over ascending imaginary part.  Labels: 0 outside, 1 in E only, 2 in E(eps, delta).
    """

    params: CalculusParams
    spec: DomainSpec
    window: tuple
    re: np.ndarray
    im: np.ndarray
    labels: np.ndarray

    @property
    def resolution(self):
        return (len(self.re), len(self.im))

    def sidecar(self):
        return {
            "params": self.params.to_dict(),
            "spec": self.spec.to_dict(),
            "window": {
                "re_min": self.window[0],
                "re_max": self.window[1],
                "im_min": self.window[2],
                "im_max": self.window[3],
            },
            "resolution": {"re": len(self.re), "im": len(self.im)},
            "order": "row-major, rows by ascending im",
        }

    def write_csv(self, path):
        path = Path(path)
        rr, ii = np.meshgrid(self.re, self.im)
        with open(path, "w") as fh:
            fh.write("re,im,label\n")
            for a, b, lab in zip(rr.ravel(), ii.ravel(), self.labels.ravel()):
                fh.write(f"{float(a)!r},{float(b)!r},{int(lab)}\n")
        sidecar = path.with_suffix(".json")
        sidecar.write_text(json.dumps(self.sidecar(), indent=2, sort_keys=True) + "\n")
        return path, sidecar


def domain_map_raster(params: CalculusParams, spec: DomainSpec, window, resolution) -> DomainRaster:
    """Label every pixel of ``window = (re_min, re_max, im_min, im_max)``."""
    re_min, re_max, im_min, im_max = map(float, window)
    if not (re_min < re_max and im_min < im_max):
        raise DomainError(f"empty window {window!r}")
    if np.ndim(resolution) == 0:
        resolution = (int(resolution), int(resolution))
    nx, ny = map(int, resolution)
    if nx < 2 or ny < 2:
        raise DomainError(f"resolution must be at least 2x2, got {resolution!r}")
    spec.validate(params)

    re = np.linspace(re_min, re_max, nx)
    im = np.linspace(im_min, im_max, ny)
    z = re[None, :] + 1j * im[:, None]
    labels = np.full(z.shape, OUTSIDE, dtype=np.int8)
    labels[in_E(z, params)] = IN_E
    labels[in_E_eps_delta(z, params, spec)] = IN_E_EPS_DELTA
    return DomainRaster(params, spec, (re_min, re_max, im_min, im_max), re, im, labels)
