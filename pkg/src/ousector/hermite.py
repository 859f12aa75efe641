"""Spectral oracle: the OU semigroup as the multiplier e^{-|α| z} on the
L^2(μ)-orthonormal Hermite basis.

Probabilists' convention throughout: h_n = He_n / sqrt(n!) is orthonormal
against the standard Gaussian μ, and h_α(x) = prod_k h_{α_k}(x_k).
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import QuadratureOrderError
from .grid import GridFunction, GridSpec


def hermite_table(n_max: int, x) -> np.ndarray:
    """h_0(x), ..., h_{n_max}(x) stacked along a new leading axis.

    Uses the normalized three-term recurrence
    h_{k+1} = (x h_k - sqrt(k) h_{k-1}) / sqrt(k+1).
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for k in range(1, n_max):
        out[k + 1] = (x * out[k] - math.sqrt(k) * out[k - 1]) / math.sqrt(k + 1)
    return out


def hermite_value(n: int, x):
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    return hermite_table(n, x)[n]


@lru_cache(maxsize=None)
def _gauss_hermite(order: int):
    # Jacobi matrix of the monic He_n: zero diagonal, off-diagonal sqrt(k).
    off = np.sqrt(np.arange(1, order, dtype=float))
    nodes = eigh_tridiagonal(np.zeros(order), off, eigvals_only=True)
    # Christoffel weights 1 / sum_k h_k(x_i)^2 instead of squared eigenvector
    # entries, which underflow in the tails for large orders.
    weights = 1.0 / np.sum(hermite_table(order - 1, nodes) ** 2, axis=0)
    return nodes, weights / weights.sum()


def gauss_hermite(order: int):
    """Nodes and weights for ∫ f dμ in one dimension.

    Nodes are the eigenvalues of the Jacobi matrix (Golub-Welsch); weights
    come from the Christoffel function, so tail weights keep full relative
    accuracy.  Weights sum to one; the rule is exact for polynomials of degree
    ``2 * order - 1``.
    """
    if order < 1:
        raise QuadratureOrderError(f"quadrature order must be >= 1, got {order}")
    nodes, weights = _gauss_hermite(int(order))
    return nodes.copy(), weights.copy()


def multi_indices(max_degree: int, d: int) -> list:
    """All α in N^d with |α| <= max_degree, graded lexicographic order.

    Degree blocks are contiguous; inside a block, larger leading components
    come first, e.g. (2, 0), (1, 1), (0, 2).
    """
    out = []
    for deg in range(max_degree + 1):
        block = [a for a in itertools.product(range(deg + 1), repeat=d) if sum(a) == deg]
        out.extend(sorted(block, reverse=True))
    return out


def _basis_on_points(indices, points, max_degree):
    """Matrix B[a, i] = h_α(points[i]) for α = indices[a]."""
    points = np.atleast_2d(points)
    tables = [hermite_table(max_degree, points[:, k]) for k in range(points.shape[1])]
    B = np.ones((len(indices), points.shape[0]))
    for a, alpha in enumerate(indices):
        for k, ak in enumerate(alpha):
            B[a] *= tables[k][ak]
    return B


@dataclass
class HermiteExpansion:
    d: int
    max_degree: int
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=complex).ravel()
        expected = math.comb(self.max_degree + self.d, self.d)
        if self.coefficients.size != expected:
            raise ValueError(f"expected {expected} coefficients, got {self.coefficients.size}")
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("non-finite coefficient")

    @classmethod
    def zeros(cls, max_degree: int, d: int = 1):
        return cls(d, max_degree, np.zeros(math.comb(max_degree + d, d)))

    @classmethod
    def from_terms(cls, terms: dict, max_degree: int, d: int = 1):
        """Build from ``{alpha: coefficient}``; ``alpha`` an int when d = 1."""
        e = cls.zeros(max_degree, d)
        pos = {a: i for i, a in enumerate(e.indices)}
        for alpha, c in terms.items():
            alpha = (alpha,) if isinstance(alpha, int) else tuple(alpha)
            e.coefficients[pos[alpha]] = c
        return e

    @property
    def indices(self):
        return multi_indices(self.max_degree, self.d)

    @property
    def degrees(self) -> np.ndarray:
        return np.array([sum(a) for a in self.indices])

    def _check(self, other):
        if (self.d, self.max_degree) != (other.d, other.max_degree):
            raise ValueError("expansions have different shapes")

    def __add__(self, other):
        self._check(other)
        return HermiteExpansion(self.d, self.max_degree, self.coefficients + other.coefficients)

    def __mul__(self, a):
        return HermiteExpansion(self.d, self.max_degree, a * self.coefficients)

    __rmul__ = __mul__

    def to_json(self) -> str:
        entries = [
            [list(a), float(c.real), float(c.imag)] for a, c in zip(self.indices, self.coefficients)
        ]
        return json.dumps({"d": self.d, "N": self.max_degree, "entries": entries})

    @classmethod
    def from_json(cls, text: str):
        data = json.loads(text)
        terms = {tuple(a): re + 1j * im for a, re, im in data["entries"]}
        return cls.from_terms(terms, data["N"], data["d"])


def expand_mu(f, max_degree: int, d: int = 1, order: int | None = None) -> HermiteExpansion:
    """Coefficients c_α = ∫ f h_α dμ for |α| <= max_degree.

    ``f`` is either a callable on (n, d) point arrays, integrated by tensor
    Gauss-Hermite quadrature of ``order`` nodes per axis (default
    ``2 * max_degree + 2``), or a :class:`GridFunction`, integrated by the
    trapezoid rule against the Gaussian density on its grid.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    indices = multi_indices(max_degree, d)
    if isinstance(f, GridFunction):
        if f.spec.d != d:
            raise ValueError(f"grid dimension {f.spec.d} != {d}")
        points = f.spec.points()
        w = f.spec.weights() * f.spec.gaussian_density()
        values = f.values
    else:
        if order is None:
            order = 2 * max_degree + 2
        if order < max_degree + 1:
            raise QuadratureOrderError(
                f"order {order} < max_degree + 1 = {max_degree + 1}: projection not exact"
            )
        nodes, weights = gauss_hermite(order)
        mesh = np.meshgrid(*([nodes] * d), indexing="ij")
        points = np.stack([m.ravel() for m in mesh], axis=-1)
        wmesh = np.meshgrid(*([weights] * d), indexing="ij")
        w = np.prod(np.stack([m.ravel() for m in wmesh]), axis=0)
        values = np.asarray(f(points), dtype=complex)
    B = _basis_on_points(indices, points, max_degree)
    return HermiteExpansion(d, max_degree, B @ (w * values))


def apply_semigroup_spectral(z, e: HermiteExpansion) -> HermiteExpansion:
    """c_α -> e^{-|α| z} c_α."""
    return HermiteExpansion(e.d, e.max_degree, np.exp(-complex(z) * e.degrees) * e.coefficients)


def synthesize(e: HermiteExpansion, spec: GridSpec) -> GridFunction:
    """x -> sum_α c_α h_α(x) on the nodes of ``spec``."""
    if spec.d != e.d:
        raise ValueError(f"grid dimension {spec.d} != expansion dimension {e.d}")
    B = _basis_on_points(e.indices, spec.points(), e.max_degree)
    return GridFunction(spec, e.coefficients @ B)
