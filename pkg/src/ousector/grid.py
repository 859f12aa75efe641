"""Uniform tensor grids on [-R, R]^d and complex samples on them."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAX_DIM = 3


@dataclass(frozen=True)
class GridSpec:
    radius: float
    step: float
    d: int = 1

    def __post_init__(self):
        if not (self.radius > 0 and self.step > 0):
            raise ValueError(f"radius and step must be positive, got R={self.radius}, h={self.step}")
        if int(self.d) != self.d or not 1 <= self.d <= MAX_DIM:
            raise ValueError(f"grid dimension must be 1, 2 or 3, got {self.d!r}")
        ratio = self.radius / self.step
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError(f"R/h must be an integer, got {ratio!r}")

    @classmethod
    def default(cls, d: int = 1) -> "GridSpec":
        if d == 1:
            return cls(10.0, 0.05, 1)
        return cls(6.0, 0.1, d)

    @property
    def n_axis(self) -> int:
        return 2 * int(round(self.radius / self.step)) + 1

    @property
    def size(self) -> int:
        return self.n_axis ** self.d

    @property
    def shape(self):
        return (self.n_axis,) * self.d

    def axis(self) -> np.ndarray:
        m = self.n_axis // 2
        return self.step * np.arange(-m, m + 1, dtype=float)

    def points(self) -> np.ndarray:
        """Nodes as an (size, d) array in row-major tensor order."""
        ax = self.axis()
        mesh = np.meshgrid(*([ax] * self.d), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def axis_weights(self) -> np.ndarray:
        w = np.full(self.n_axis, self.step)
        w[0] = w[-1] = 0.5 * self.step
        return w

    def weights(self) -> np.ndarray:
        """Tensor trapezoid weights, flattened like :meth:`points`."""
        w = self.axis_weights()
        out = w
        for _ in range(self.d - 1):
            out = np.multiply.outer(out, w)
        return np.ravel(out)

    def gaussian_density(self) -> np.ndarray:
        """Standard Gaussian density (2π)^{-d/2} e^{-|x|^2/2} at the nodes."""
        x2 = np.sum(self.points() ** 2, axis=-1)
        return (2.0 * np.pi) ** (-0.5 * self.d) * np.exp(-0.5 * x2)

    def to_dict(self):
        return {"radius": self.radius, "step": self.step, "d": self.d}


@dataclass
class GridFunction:
    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).ravel()
        if self.values.size != self.spec.size:
            raise ValueError(f"expected {self.spec.size} values, got {self.values.size}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid function has non-finite entries")

    @classmethod
    def from_callable(cls, spec: GridSpec, fn) -> "GridFunction":
        """Sample ``fn`` on the nodes; ``fn`` receives an (size, d) array."""
        return cls(spec, fn(spec.points()))

    def __add__(self, other):
        if other.spec != self.spec:
            raise ValueError("grid specs differ")
        return GridFunction(self.spec, self.values + other.values)

    def __mul__(self, a):
        return GridFunction(self.spec, a * self.values)

    __rmul__ = __mul__

    def lp_norm(self, p: float, measure: str = "lambda") -> float:
        """Trapezoid L^p norm against Lebesgue (``lambda``) or Gaussian (``mu``) measure."""
        w = self.spec.weights()
        if measure == "mu":
            w = w * self.spec.gaussian_density()
        elif measure != "lambda":
            raise ValueError(f"unknown measure {measure!r}")
        return float(np.sum(w * np.abs(self.values) ** p) ** (1.0 / p))

    def write_csv(self, path):
        """CSV columns ``x1[,x2[,x3]],re,im`` plus a JSON sidecar with the grid spec."""
        path = Path(path)
        pts = self.spec.points()
        header = [f"x{k + 1}" for k in range(self.spec.d)] + ["re", "im"]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for x, v in zip(pts, self.values):
                w.writerow([repr(float(c)) for c in x] + [repr(float(v.real)), repr(float(v.imag))])
        sidecar = path.with_suffix(".json")
        sidecar.write_text(json.dumps({"grid": self.spec.to_dict()}, indent=2, sort_keys=True) + "\n")
        return path, sidecar

    @classmethod
    def read_csv(cls, path) -> "GridFunction":
        path = Path(path)
        meta = json.loads(path.with_suffix(".json").read_text())["grid"]
        spec = GridSpec(meta["radius"], meta["step"], meta["d"])
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(spec, data[:, -2] + 1j * data[:, -1])
