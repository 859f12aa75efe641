"""Verification sweeps behind the CLI commands.

Each function returns a plain dict report with a ``pass`` flag and the
tolerance it was judged against.
"""
from __future__ import annotations

import math

import numpy as np

from .defaults import SEED, TOLERANCES
from .domination import margin
from .grid import GridFunction, GridSpec
from .hermite import hermite_value
from .mehler import apply_semigroup_quadrature, mehler, mehler_alt
from .operator_norms import z_from_s
from .sector_geometry import CalculusParams


def kernel_identity_sweep(samples: int = 10_000, d: int = 1, seed: int = SEED,
                          tol: float = TOLERANCES["kernel_identity"], re_range=(0.05, 5.0),
                          im_max: float = 1.0, x_max: float = 5.0) -> dict:
    """Max relative deviation between the defining and reparametrized kernels."""
    rng = np.random.default_rng(seed)
    z = rng.uniform(*re_range, samples) + 1j * rng.uniform(-im_max, im_max, samples)
    x = rng.uniform(-x_max, x_max, (samples, d))
    y = rng.uniform(-x_max, x_max, (samples, d))
    worst, k = 0.0, 0
    for i in range(samples):
        a = mehler(z[i], x[i], y[i])
        b = mehler_alt(z[i], x[i], y[i])
        err = abs(a - b) / abs(a)
        if err > worst:
            worst, k = err, i
    return {
        "check": "kernel_identity",
        "samples": samples,
        "d": d,
        "seed": seed,
        "max_rel_error": worst,
        "worst": {"z": [float(z[k].real), float(z[k].imag)], "x": x[k].tolist(), "y": y[k].tolist()},
        "tolerance": tol,
        "pass": bool(worst <= tol),
    }


def conservativity_check(ts=(0.1, 1.0, 10.0), xs=(0.0, 1.0, 3.0), step: float = 0.05,
                         tol: float = TOLERANCES["conservativity"]) -> dict:
    """|∑_y M_t(x, y) w_y - 1| on a grid of radius 10 + |x| (d = 1)."""
    rows = []
    for t in ts:
        for x0 in xs:
            spec = GridSpec(10.0 + abs(x0), step, 1)
            total = float(np.sum(mehler(t, [x0], spec.points()) * spec.weights()))
            rows.append({"t": t, "x": x0, "integral": total, "defect": abs(total - 1.0)})
    worst = max(r["defect"] for r in rows)
    return {"check": "conservativity", "rows": rows, "max_defect": worst, "tolerance": tol,
            "pass": bool(worst <= tol)}


def semigroup_check(params: CalculusParams, pairs=((0.3, 0.7), (1.0, 1.0)), max_degree: int = 4,
                    spec: GridSpec | None = None, window: float = 5.0,
                    tol: float = TOLERANCES["semigroup"]) -> dict:
    """sup_{|x| <= window} |T_t T_s h_n - T_{t+s} h_n| for n <= max_degree (d = 1)."""
    spec = spec or GridSpec.default(1)
    x = spec.axis()
    inside = np.abs(x) <= window
    rows = []
    for n in range(max_degree + 1):
        f = GridFunction(spec, hermite_value(n, x))
        for t, s in pairs:
            two_step = apply_semigroup_quadrature(t, apply_semigroup_quadrature(s, f, params), params)
            one_step = apply_semigroup_quadrature(t + s, f, params)
            defect = float(np.max(np.abs(two_step.values - one_step.values)[inside]))
            rows.append({"n": n, "t": t, "s": s, "defect": defect})
    worst = max(r["defect"] for r in rows)
    return {"check": "semigroup", "grid": spec.to_dict(), "window": window, "rows": rows,
            "max_defect": worst, "tolerance": tol, "pass": bool(worst <= tol)}


def spectral_check(params: CalculusParams, zs=(1.0, 0.5 + 0.3j), max_degree: int = 8,
                   spec: GridSpec | None = None, tol: float = TOLERANCES["spectral"]) -> dict:
    """Quadrature semigroup on h_n against the multiplier e^{-nz} on |x| <= R/2 (d = 1)."""
    spec = spec or GridSpec.default(1)
    x = spec.axis()
    inside = np.abs(x) <= 0.5 * spec.radius
    rows = []
    for z in zs:
        z = complex(z)
        for n in range(max_degree + 1):
            hn = hermite_value(n, x)
            out = apply_semigroup_quadrature(z, GridFunction(spec, hn), params)
            err = float(np.max(np.abs(out.values - np.exp(-n * z) * hn)[inside]))
            rows.append({"z": [z.real, z.imag], "n": n, "sup_error": err})
    worst = max(r["sup_error"] for r in rows)
    return {"check": "spectral", "grid": spec.to_dict(), "rows": rows, "max_error": worst,
            "tolerance": tol, "pass": bool(worst <= tol)}


def critical_angle_bisection(params: CalculusParams, modulus: float = 0.5,
                             tol: float = TOLERANCES["bisection"]) -> dict:
    """Locate the sign change of margin(z) along arg s_z by bisection.

    Times are z = s^{-1}(modulus e^{iφ}); the change should sit at
    φ = π/2 - θ_p.
    """
    crit = params.critical_angle
    f = lambda phi: margin(z_from_s(modulus * np.exp(1j * phi)), params)  # noqa: E731
    lo, hi = 0.5 * crit, 0.5 * (crit + 0.5 * math.pi)
    f_lo, f_hi = f(lo), f(hi)
    if not (f_lo > 0 > f_hi):
        return {"check": "critical_angle", "pass": False, "reason": "no sign change on bracket",
                "bracket": [lo, hi], "margins": [f_lo, f_hi]}
    while hi - lo > 0.25 * tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    return {
        "check": "critical_angle",
        "p": params.p,
        "modulus": modulus,
        "root": root,
        "critical_angle": crit,
        "deviation": abs(root - crit),
        "margin_below": f(lo),
        "margin_above": f(hi),
        "tolerance": tol,
        "pass": bool(abs(root - crit) <= tol and f(lo) > 0 > f(hi)),
    }
