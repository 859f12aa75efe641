"""Discretized L^p operator norms of the semigroup and a Gaussian-trial probe
beyond the critical angle.

Upper bounds always come from the entrywise modulus of the discretized
operator, whose induced l^p norm dominates that of the complex matrix.
Lower bounds come from explicit witness vectors.  The gap is reported as is.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .defaults import SEED, TOLERANCES
from .domination import g_l1_closed_form, margin
from .errors import (
    ConvergenceError,
    DomainError,
    InconclusiveProbeError,
    ResolutionError,
    SizeError,
    TrialInvalidError,
)
from .grid import GridSpec
from .mehler import MIN_QUADRATURE_TIME, _check_time, kernel_pairs, one_minus_exp2
from .sector_geometry import CalculusParams

MAX_MATRIX_ENTRIES = 10 ** 8
POWER_MAX_ITER = 500
POWER_RTOL = 1e-12
CONTRACTION_SLACK = TOLERANCES["contraction"]
BOUNDARY_MASS_TOL = 1e-8
DEFAULT_SEED = SEED


def kernel_matrix(z, params: CalculusParams, spec: GridSpec, measure: str = "mu") -> np.ndarray:
    """K[i, j] = kernel(z, x_i, x_j) w_j on the nodes of ``spec``.

    ``measure="mu"`` uses the Mehler kernel (to be normed in L^p(μ)),
    ``"lambda"`` the conjugated kernel k_z (normed in L^p(λ)).
    """
    _check_time(z)
    if spec.size ** 2 > MAX_MATRIX_ENTRIES:
        raise SizeError(f"{spec.size}^2 matrix entries exceed the limit {MAX_MATRIX_ENTRIES:.0e}")
    pts = spec.points()
    return kernel_pairs(z, pts, pts, measure, params) * spec.weights()[None, :]


def weighted_operator(z, params: CalculusParams, spec: GridSpec, measure: str = "mu") -> np.ndarray:
    """D^{1/p} K D^{-1/p}: the discretized operator as a map on plain l^p.

    D holds the quadrature weights (times the Gaussian density for ``mu``),
    so ||f||_{L^p} on the grid equals the l^p norm of D^{1/p} f.
    """
    K = kernel_matrix(z, params, spec, measure)
    D = spec.weights()
    if measure == "mu":
        D = D * spec.gaussian_density()
    dp = D ** (1.0 / params.p)
    return dp[:, None] * K / dp[None, :]


def _lp(v, p):
    return float(np.sum(np.abs(v) ** p) ** (1.0 / p))


@dataclass
class PowerResult:
    lower: float
    upper: float
    witness: np.ndarray
    iterations: int
    converged: bool


def p_norm_power(B, p: float, x0=None, max_iter: int = POWER_MAX_ITER, rtol: float = POWER_RTOL) -> PowerResult:
    """Induced l^p -> l^p norm of a nonnegative matrix.

    Nonlinear power iteration x <- ψ_{p'}(B^T ψ_p(B x)) with ψ_r(v) = v^{r-1}.
    Each iterate gives a lower bound ||Bx||_p / ||x||_p and, through the
    weighted Schur test, the upper bound

        ||B|| <= max_j ( (B^T (Bx)^{p-1})_j / x_j^{p-1} )^{1/p},

    valid for any positive x; both meet at the fixed point.  Zero rows and
    columns are dropped first.
    """
    B = np.asarray(B, dtype=float)
    if np.any(B < 0):
        raise ValueError("p_norm_power needs a nonnegative matrix")
    if not 1 < p < math.inf:
        raise ValueError(f"need 1 < p < inf, got {p}")
    rows = np.any(B > 0, axis=1)
    cols = np.any(B > 0, axis=0)
    full_n = B.shape[1]
    if not cols.any():
        return PowerResult(0.0, 0.0, np.ones(full_n), 0, True)
    B = B[np.ix_(rows, cols)]

    x = np.ones(B.shape[1]) if x0 is None else np.asarray(x0, dtype=float)[cols].copy()
    if np.any(x <= 0):
        raise ValueError("starting vector must be positive")
    x /= _lp(x, p)
    best_lower, best_upper, best_x = 0.0, math.inf, x
    prev = None
    for it in range(1, max_iter + 1):
        y = B @ x
        lower = _lp(y, p)
        w = B.T @ y ** (p - 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            upper = float(np.max(w / x ** (p - 1.0)) ** (1.0 / p))
        if not math.isfinite(upper):
            upper = math.inf
        if lower > best_lower:
            best_lower, best_x = lower, x
        best_upper = min(best_upper, upper)
        if best_upper - best_lower <= rtol * best_upper:
            break
        if prev is not None:
            lo_prev, up_prev = prev
            if abs(lower - lo_prev) <= rtol * lower and up_prev - best_upper <= rtol * best_upper:
                break
        prev = (lower, best_upper)
        x = w ** (1.0 / (p - 1.0))
        x /= _lp(x, p)
    else:
        raise ConvergenceError(
            f"power iteration did not converge in {max_iter} steps", last_iterate=x, estimate=best_upper
        )
    witness = np.zeros(full_n)
    witness[cols] = best_x
    converged = best_upper - best_lower <= 1e3 * rtol * best_upper
    return PowerResult(best_lower, best_upper, witness, it, converged)


def p_norm_upper(matrix_magnitudes, p: float) -> float:
    """Certified upper bound for the induced l^p norm of a nonnegative matrix."""
    return p_norm_power(matrix_magnitudes, p).upper


@dataclass
class NormEstimate:
    lower: float
    upper: float
    method: str
    seed: int
    grid: GridSpec
    p: float
    z: complex
    witness: np.ndarray = field(repr=False)
    slack: float = CONTRACTION_SLACK
    bound: float = 1.0

    @property
    def certified(self) -> bool:
        return self.upper <= self.bound + self.slack

    def quotient(self, B) -> float:
        """||B w||_p / ||w||_p for the stored witness w."""
        return _lp(B @ self.witness, self.p) / _lp(self.witness, self.p)

    def to_dict(self):
        return {
            "z": [self.z.real, self.z.imag],
            "p": self.p,
            "lower": self.lower,
            "upper": self.upper,
            "gap": self.upper - self.lower,
            "method": self.method,
            "seed": self.seed,
            "grid": self.grid.to_dict(),
            "bound": self.bound,
            "slack": self.slack,
            "certified": self.certified,
        }


def operator_norm_estimate(z, params: CalculusParams, spec: GridSpec, measure: str = "mu",
                           seed: int = DEFAULT_SEED, random_witnesses: int = 4) -> NormEstimate:
    """Lower/upper bounds for the discretized norm of exp(-zL) on L^p(μ)
    (``mu``) or of its U_p-conjugate on L^p(λ) (``lambda``)."""
    z = complex(z)
    B = weighted_operator(z, params, spec, measure)
    power = p_norm_power(np.abs(B), params.p)

    rng = np.random.default_rng(seed)
    n = B.shape[1]
    D = spec.weights() * (spec.gaussian_density() if measure == "mu" else 1.0)
    candidates = [power.witness, D ** (1.0 / params.p)]
    candidates += [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(random_witnesses)]
    quotients = [_lp(B @ w, params.p) / _lp(w, params.p) for w in candidates]
    k = int(np.argmax(quotients))
    return NormEstimate(
        lower=float(quotients[k]),
        upper=power.upper,
        method="schur-power-upper/witness-lower",
        seed=seed,
        grid=spec,
        p=params.p,
        z=z,
        witness=candidates[k],
    )


def boundary_mass(spec: GridSpec) -> float:
    """μ-mass outside the box [-R, R]^d."""
    inside = erf(spec.radius / math.sqrt(2.0)) ** spec.d
    return float(1.0 - inside)


def contraction_check(t: float, params: CalculusParams, spec: GridSpec | None = None,
                      seed: int = DEFAULT_SEED) -> NormEstimate:
    """Discretized L^p(μ) norm of T_t for real t; certified when upper <= 1 + 1e-3."""
    if spec is None:
        spec = GridSpec.default(params.d)
    if not t >= MIN_QUADRATURE_TIME:
        raise ResolutionError(f"t = {t} below the resolution guard {MIN_QUADRATURE_TIME}")
    if boundary_mass(spec) > BOUNDARY_MASS_TOL:
        raise ResolutionError(f"grid radius {spec.radius} leaves μ-mass {boundary_mass(spec):.2e} outside")
    return operator_norm_estimate(float(t), params, spec, "mu", seed)


# --- Gaussian trial functions -------------------------------------------------

def _trial(z, a, p, d):
    """Ratio ||T_z f_a|| / ||f_a|| in L^p(μ) for f_a = exp(-a|x|^2), vectorized in a.

    T_z f_a(x) = (1 + 2 a v)^{-d/2} exp(-b |x|^2), v = 1 - e^{-2z},
    b = a e^{-2z} / (1 + 2 a v), and ||exp(-c|x|^2)||_p = (1 + 2p Re c)^{-d/(2p)}.
    Returns nan where the trial is not in L^p or the y-integral diverges,
    inf where the output is not in L^p.
    """
    a = np.asarray(a, dtype=complex)
    v = one_minus_exp2(z)
    q2 = np.exp(-2.0 * z)
    one_2av = 1.0 + 2.0 * a * v
    alpha = one_2av / (2.0 * v)
    in_ok = (alpha.real > 0) & (1.0 + 2.0 * p * a.real > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        b = a * q2 / one_2av
        out_arg = 1.0 + 2.0 * p * b.real
        ratio = (
            np.abs(one_2av) ** (-0.5 * d)
            * (1.0 + 2.0 * p * a.real) ** (d / (2.0 * p))
            * np.where(out_arg > 0, out_arg, 1.0) ** (-d / (2.0 * p))
        )
    ratio = np.where(out_arg > 0, ratio, np.inf)
    return np.where(in_ok, ratio, np.nan)


def trial_ratio_gaussian(z, params: CalculusParams, a) -> float:
    """||T_z f_a||_{L^p(μ)} / ||f_a||_{L^p(μ)} for f_a(x) = exp(-a|x|^2), closed form."""
    z = _check_time(z)
    r = float(_trial(z, complex(a), params.p, params.d))
    if math.isnan(r):
        raise TrialInvalidError(f"trial a = {a} is not admissible at z = {z}")
    if math.isinf(r):
        raise TrialInvalidError(f"T_z f_a is not in L^p(μ) for a = {a}, z = {z}")
    return r


def z_from_s(s):
    """Inverse of s_z on Re s > 0: z = log((1 + s) / (1 - s))."""
    s = complex(s)
    return complex(np.log((1.0 + s) / (1.0 - s)))


def default_a_grid(params: CalculusParams, n: int = 121, extent: float = 3.0) -> np.ndarray:
    lo = -1.0 / (2.0 * params.p)
    re = np.linspace(lo, extent, n + 1)[1:]
    im = np.linspace(-extent, extent, n)
    return (re[None, :] + 1j * im[:, None]).ravel()


@dataclass
class BlowupReport:
    p: float
    applicable: bool
    target_arg_s: float
    critical_angle: float
    s_moduli: list
    z_values: list = field(default_factory=list)
    margins: list = field(default_factory=list)
    max_ratio: float = float("nan")
    argmax_a: complex = complex("nan")
    argmax_z: complex = complex("nan")
    divergent_trials: int = 0
    growth: list = field(default_factory=list)
    contrast_arg_s: float = float("nan")
    contrast_max_ratio: float = float("nan")
    young_bound: float = float("nan")
    contrast_bounded: bool = True
    factor: float = float("nan")
    status: str = "not-applicable"

    def to_dict(self):
        cz = lambda w: [w.real, w.imag]  # noqa: E731
        return {
            "p": self.p,
            "applicable": self.applicable,
            "target_arg_s": self.target_arg_s,
            "critical_angle": self.critical_angle,
            "s_moduli": list(self.s_moduli),
            "z_values": [cz(w) for w in self.z_values],
            "margins": list(self.margins),
            "max_ratio": self.max_ratio,
            "argmax_a": cz(self.argmax_a),
            "argmax_z": cz(self.argmax_z),
            "divergent_trials": self.divergent_trials,
            "growth": list(self.growth),
            "contrast_arg_s": self.contrast_arg_s,
            "contrast_max_ratio": self.contrast_max_ratio,
            "young_bound": self.young_bound,
            "contrast_bounded": self.contrast_bounded,
            "factor": self.factor,
            "status": self.status,
        }


def _refine_towards_divergence(z, p, d, a_lo, a_hi, steps):
    """Bisect the segment from an admissible trial ``a_lo`` to a divergent one
    ``a_hi``; returns the running maximum of the ratio after each step."""
    best, hist = float(_trial(z, a_lo, p, d)), []
    for _ in range(steps):
        mid = 0.5 * (a_lo + a_hi)
        r = float(_trial(z, mid, p, d))
        if math.isnan(r):
            break
        if math.isinf(r):
            a_hi = mid
        else:
            a_lo = mid
            best = max(best, r)
        hist.append(best)
    return best, a_lo, hist


def _scan_one(z, a_grid, p, d, refinements):
    """Max trial ratio at one time z, refining toward the divergence boundary."""
    ratios = _trial(z, a_grid, p, d)
    finite = np.isfinite(ratios)
    divergent = np.isinf(ratios)
    growth = np.zeros(refinements)
    if not finite.any():
        return -math.inf, complex("nan"), growth, int(divergent.sum())
    k = int(np.nanargmax(np.where(finite, ratios, np.nan)))
    best, best_a = float(ratios[k]), complex(a_grid[k])
    if divergent.any():
        fin_a, div_a = a_grid[finite], a_grid[divergent]
        for a_hi in div_a[:: max(1, len(div_a) // 16)]:
            a_lo = fin_a[int(np.argmin(np.abs(fin_a - a_hi)))]
            val, a_at, hist = _refine_towards_divergence(z, p, d, a_lo, a_hi, refinements)
            if hist:
                hist = np.asarray(hist + [hist[-1]] * (refinements - len(hist)))
                growth = np.maximum(growth, hist)
            if val > best:
                best, best_a = val, complex(a_at)
    return best, best_a, growth, int(divergent.sum())


def blowup_scan(params: CalculusParams, target_arg_s: float = math.radians(75.0), a_grid=None,
                s_moduli=(0.2, 0.5, 0.9, 2.0, 5.0), refinements: int = 60,
                evidence_factor: float = TOLERANCES["blowup_factor"]) -> BlowupReport:
    """Maximize the Gaussian trial ratio at times z with arg s_z = target_arg_s.

    For every modulus r in ``s_moduli`` the probe time has s_z = r e^{i target}
    and the contrast time has s_z = r e^{0.9 i (π/2 - θ_p)}.  Cells of the
    a-grid where the output leaves L^p(μ) next to an admissible trial are
    refined by bisection toward that boundary; ``growth`` records the best
    ratio after each refinement level.  ``factor`` is the largest ratio of
    the probe maximum to the Young bound ||g_z||_1 of the contrast time with
    the same modulus.  This is evidence of unboundedness, not a proof.
    """
    crit = params.critical_angle
    report = BlowupReport(params.p, False, target_arg_s, crit, list(s_moduli))
    if params.m_p == 0.0:
        # the critical sector is already the whole right half-plane
        return report
    if not crit < target_arg_s < 0.5 * math.pi:
        raise DomainError(
            f"target arg s_z must lie in ({crit:.6g}, π/2) to be outside the sector with Re z > 0"
        )
    a_grid = default_a_grid(params) if a_grid is None else np.asarray(a_grid, dtype=complex).ravel()
    p, d = params.p, params.d
    report.applicable = True
    report.contrast_arg_s = contrast_arg = 0.9 * crit

    best = -math.inf
    growth = np.zeros(refinements)
    factor = 0.0
    for r in s_moduli:
        z = z_from_s(r * np.exp(1j * target_arg_s))
        report.z_values.append(z)
        report.margins.append(margin(z, params))
        val, a_at, g, n_div = _scan_one(z, a_grid, p, d, refinements)
        report.divergent_trials += n_div
        growth = np.maximum(growth, g)
        if val > best:
            best, report.argmax_a, report.argmax_z = val, a_at, z

        zc = z_from_s(r * np.exp(1j * contrast_arg))
        young = g_l1_closed_form(zc, params)
        ratios = _trial(zc, a_grid, p, d)
        finite = np.isfinite(ratios)
        mx = float(np.max(ratios[finite])) if finite.any() else 0.0
        if np.isinf(ratios).any() or mx > young * (1.0 + 1e-9):
            report.contrast_bounded = False
        report.contrast_max_ratio = max(0.0 if math.isnan(report.contrast_max_ratio)
                                        else report.contrast_max_ratio, mx)
        report.young_bound = young if math.isnan(report.young_bound) else max(report.young_bound, young)
        if val > -math.inf:
            factor = max(factor, val / young)
    if best == -math.inf:
        raise InconclusiveProbeError("every trial on the a-grid was inadmissible")

    report.max_ratio = best
    report.growth = [float(g) for g in growth if g > 0]
    report.factor = factor
    report.status = "evidence" if factor >= evidence_factor else "inconclusive"
    return report
