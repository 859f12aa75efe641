"""Default tolerances and grids, shared by the library, the CLI and the test suite.

``ousector --show-defaults`` prints this table.
"""
import math

TOLERANCES = {
    # max relative deviation between the two forms of the Mehler kernel
    "kernel_identity": 1e-12,
    # |∫ M_t(x, y) dy - 1| by trapezoid quadrature
    "conservativity": 1e-8,
    # sup |T_t T_s f - T_{t+s} f| on |x| <= 5
    "semigroup": 1e-6,
    # sup |quadrature T_z h_n - e^{-nz} h_n| on |x| <= R/2
    "spectral": 1e-8,
    # discretized L^p(μ) norm of T_t may exceed 1 by this much
    "contraction": 1e-3,
    # min over grid pairs of g_z(x - y) - |k_z(x, y)| must be >= -this
    "domination": 1e-12,
    # relative gap between closed-form and quadrature ||g_z||_1
    "l1_quadrature": 1e-8,
    # rounding slack (relative) on ||g_z||_1 <= eps^{-d/2} 2^d |1 + e^{-z}|^{-d}
    "chain": 1e-12,
    # angular resolution when bisecting the sign change of margin(z)
    "bisection": 1e-8,
    # required ratio of blow-up trial maximum to the inside-sector Young bound
    "blowup_factor": 10.0,
}

SEED = 42

# verify_sector_containment
CONTAINMENT_EPS_PRIME = math.pi / 36
CONTAINMENT_SAMPLES = 10_000
CONTAINMENT_RADIUS = 10.0

# domination / sup-bound sampling
DOMAIN_EPSILON = 0.05
DOMAIN_DELTA = 0.3
DOMINATION_RADIUS = 5.0
DOMINATION_STEP = 0.05
SUP_BOUND_SAMPLES = 1000

BLOWUP_TARGET_DEG = 75.0
BLOWUP_MODULI = (0.2, 0.5, 0.9, 2.0, 5.0)


def table():
    """Flat mapping of every default, for display."""
    out = {f"tol.{k}": v for k, v in TOLERANCES.items()}
    out.update(
        {
            "seed": SEED,
            "containment.eps_prime": CONTAINMENT_EPS_PRIME,
            "containment.samples": CONTAINMENT_SAMPLES,
            "containment.radius": CONTAINMENT_RADIUS,
            "domain.epsilon": DOMAIN_EPSILON,
            "domain.delta": DOMAIN_DELTA,
            "domination.radius": DOMINATION_RADIUS,
            "domination.step": DOMINATION_STEP,
            "sup_bound.samples": SUP_BOUND_SAMPLES,
            "blowup.target_deg": BLOWUP_TARGET_DEG,
            "blowup.moduli": list(BLOWUP_MODULI),
            "grid.d1": "R=10, h=0.05",
            "grid.d2": "R=6, h=0.1",
        }
    )
    return out
