"""Scalar, skew-matrix and tensor fields on R^n.

Evaluators are plain callables of the state; everything here is pure with
respect to observable state, so fields are safe to evaluate concurrently.
Scalar fields carry an optional analytic gradient; when absent, central
finite differences with step 1e-6 * max(1, |x_i|) per coordinate are used.
Declared gradients can be validated against finite differences on probe
points (relative tolerance 1e-4).

Multivariate polynomials provide the exact-gradient probe family used by
the identity checks: they are closed under the sums, products and scalar
multiples that the identities require, keeping every intermediate exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .simple import SkewMatrix, simple_tensor
from .tensor import DEFAULT_TOL, Tensor4, check_symmetries

FD_STEP = 1e-6
GRADIENT_RTOL = 1e-4


class GradientMismatchError(ValueError):
    """Declared analytic gradient disagrees with finite differences."""


class FieldValidationError(ValueError):
    """A field violates its declared pointwise structure on a probe point."""


def fd_gradient(value: Callable[[np.ndarray], float], x: np.ndarray) -> np.ndarray:
    """Central finite differences with per-coordinate step 1e-6 * max(1, |x_i|)."""
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for i in range(x.size):
        h = FD_STEP * max(1.0, abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        grad[i] = (value(xp) - value(xm)) / (2.0 * h)
    return grad


class ScalarField:
    """A smooth function given by a value evaluator and optional gradient."""

    def __init__(self, value: Callable[[np.ndarray], float],
                 gradient: Callable[[np.ndarray], np.ndarray] | None = None,
                 name: str = ""):
        self._value = value
        self._gradient = gradient
        self.name = name

    def value(self, x) -> float:
        return float(self._value(np.asarray(x, dtype=float)))

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self._gradient is not None:
            return np.asarray(self._gradient(x), dtype=float)
        return fd_gradient(self._value, x)

    @property
    def has_analytic_gradient(self) -> bool:
        return self._gradient is not None

    @classmethod
    def constant(cls, c: float, name: str = "") -> "ScalarField":
        return cls(lambda x: float(c), lambda x: np.zeros_like(x, dtype=float),
                   name=name or f"const({c})")

    # Sums, products and scalar multiples keep gradients exact (product rule).
    def __add__(self, other: "ScalarField") -> "ScalarField":
        return ScalarField(
            lambda x: self.value(x) + other.value(x),
            lambda x: self.gradient(x) + other.gradient(x),
            name=f"({self.name}+{other.name})")

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        return ScalarField(
            lambda x: self.value(x) - other.value(x),
            lambda x: self.gradient(x) - other.gradient(x),
            name=f"({self.name}-{other.name})")

    def __mul__(self, other: "ScalarField") -> "ScalarField":
        return ScalarField(
            lambda x: self.value(x) * other.value(x),
            lambda x: self.value(x) * other.gradient(x) + other.value(x) * self.gradient(x),
            name=f"({self.name}*{other.name})")

    def scaled(self, c: float) -> "ScalarField":
        return ScalarField(lambda x: c * self.value(x),
                           lambda x: c * self.gradient(x),
                           name=f"({c}*{self.name})")


def validate_gradient(field: ScalarField, points, rtol: float = GRADIENT_RTOL) -> float:
    """Compare the declared gradient with central differences at probe points.

    Returns the worst relative error; raises GradientMismatchError beyond rtol.
    No-op (returns 0) for fields without an analytic gradient.
    """
    if not field.has_analytic_gradient:
        return 0.0
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        ana = field.gradient(x)
        num = fd_gradient(field.value, x)
        err = float(np.linalg.norm(ana - num) / max(1.0, np.linalg.norm(num)))
        worst = max(worst, err)
        if err > rtol:
            raise GradientMismatchError(
                f"analytic gradient of {field.name or 'field'} deviates from finite "
                f"differences by {err:.3e} (rtol {rtol:.1e}) at x={x.tolist()}")
    return worst


class Polynomial:
    """Multivariate polynomial with exact value and gradient.

    Coefficients are keyed by exponent tuples; arithmetic collects terms
    exactly, so products and sums of probe fields stay exact.
    """

    def __init__(self, n: int, coeffs: dict[tuple[int, ...], float]):
        self.n = n
        clean = {}
        for expo, c in coeffs.items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != n or any(e < 0 for e in expo):
                raise ValueError(f"bad exponent tuple {expo} for n={n}")
            c = float(c)
            if c != 0.0:
                clean[expo] = clean.get(expo, 0.0) + c
        self.coeffs = {e: c for e, c in sorted(clean.items()) if c != 0.0}
        self._expo = np.array(sorted(self.coeffs), dtype=int).reshape(-1, n)
        self._coef = np.array([self.coeffs[tuple(e)] for e in self._expo])

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, c: float) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def coordinate(cls, n: int, i: int) -> "Polynomial":
        """The i-th coordinate function (1-based)."""
        expo = [0] * n
        expo[i - 1] = 1
        return cls(n, {tuple(expo): 1.0})

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, max_degree: int = 3,
               density: float = 0.6) -> "Polynomial":
        """Random polynomial of total degree <= max_degree with O(1) coefficients."""
        from itertools import product
        coeffs = {}
        for expo in product(range(max_degree + 1), repeat=n):
            if sum(expo) > max_degree:
                continue
            if rng.uniform() < density:
                coeffs[expo] = rng.uniform(-1.0, 1.0)
        return cls(n, coeffs)

    def value(self, x) -> float:
        if not self.coeffs:
            return 0.0
        x = np.asarray(x, dtype=float)
        return float(np.prod(x ** self._expo, axis=1) @ self._coef)

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        grad = np.zeros(self.n)
        if not self.coeffs:
            return grad
        for d in range(self.n):
            mask = self._expo[:, d] > 0
            if not mask.any():
                continue
            expo = self._expo[mask].copy()
            coef = self._coef[mask] * expo[:, d]
            expo[:, d] -= 1
            grad[d] = np.prod(x ** expo, axis=1) @ coef
        return grad

    @property
    def has_analytic_gradient(self) -> bool:
        return True

    name = property(lambda self: f"poly[{len(self.coeffs)} terms]")

    def __add__(self, other):
        if isinstance(other, Polynomial):
            merged = dict(self.coeffs)
            for e, c in other.coeffs.items():
                merged[e] = merged.get(e, 0.0) + c
            return Polynomial(self.n, merged)
        return NotImplemented

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            prod = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    prod[e] = prod.get(e, 0.0) + c1 * c2
            return Polynomial(self.n, prod)
        if isinstance(other, (int, float)):
            return Polynomial(self.n, {e: other * c for e, c in self.coeffs.items()})
        return NotImplemented

    __rmul__ = __mul__

    def to_coeff_map(self) -> dict[str, float]:
        """JSON-friendly map: "e1,e2,..." exponent keys to coefficients."""
        return {",".join(str(e) for e in expo): c for expo, c in self.coeffs.items()}

    @classmethod
    def from_coeff_map(cls, n: int, data: dict[str, float]) -> "Polynomial":
        coeffs = {}
        for key, c in data.items():
            expo = tuple(int(p) for p in str(key).split(","))
            coeffs[expo] = float(c)
        return cls(n, coeffs)


class SkewField:
    """Pointwise skew-symmetric matrix field x -> J(x)."""

    def __init__(self, n: int, fn: Callable[[np.ndarray], np.ndarray], name: str = ""):
        self.n = n
        self._fn = fn
        self.name = name

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self._fn(np.asarray(x, dtype=float)), dtype=float)

    def matrix(self, x) -> SkewMatrix:
        return SkewMatrix.from_array(self(x), antisymmetrize=False)

    @classmethod
    def constant(cls, j, name: str = "constant") -> "SkewField":
        mat = j.values if isinstance(j, SkewMatrix) else np.asarray(j, dtype=float)
        mat = SkewMatrix.from_array(mat).values  # reject non-skew input
        return cls(mat.shape[0], lambda x: mat, name=name)

    @classmethod
    def rigid_body(cls) -> "SkewField":
        """The so(3) structure J(x) = [[0,-x3,x2],[x3,0,-x1],[-x2,x1,0]]; J(x) x = 0."""
        def fn(x):
            return np.array([[0.0, -x[2], x[1]],
                             [x[2], 0.0, -x[0]],
                             [-x[1], x[0], 0.0]])
        return cls(3, fn, name="rigid_body")

    @classmethod
    def from_polynomials(cls, n: int, upper: dict[tuple[int, int], Polynomial],
                         name: str = "matrix_poly") -> "SkewField":
        """Entry polynomials for the strict upper triangle (1-based keys)."""
        for (i, k) in upper:
            if not (1 <= i < k <= n):
                raise ValueError(f"upper-triangle key ({i},{k}) invalid for n={n}")

        def fn(x):
            mat = np.zeros((n, n))
            for (i, k), poly in upper.items():
                v = poly.value(x)
                mat[i - 1, k - 1] = v
                mat[k - 1, i - 1] = -v
            return mat
        return cls(n, fn, name=name)

    def validate_on(self, points, tol: float = DEFAULT_TOL) -> None:
        for x in points:
            m = self(x)
            if np.abs(m + m.T).max() > tol:
                raise FieldValidationError(
                    f"skew field {self.name} is not antisymmetric at x={list(x)}")


class TensorField:
    """Order-4 tensor field x -> Tensor4, optionally declared conservative.

    A conservative-irreversible field must lie in the symmetry class and
    the PSD cone pointwise; ``validate_on`` checks this on probe points.
    """

    def __init__(self, n: int, fn: Callable[[np.ndarray], Tensor4],
                 conservative: bool = True, name: str = ""):
        self.n = n
        self._fn = fn
        self.conservative = conservative
        self.name = name

    def __call__(self, x) -> Tensor4:
        return self._fn(np.asarray(x, dtype=float))

    @classmethod
    def constant(cls, t: Tensor4, conservative: bool = True, name: str = "constant"):
        return cls(t.n, lambda x: t, conservative=conservative, name=name)

    @classmethod
    def zero(cls, n: int) -> "TensorField":
        t = Tensor4.zeros(n)
        return cls(n, lambda x: t, conservative=True, name="zero")

    @classmethod
    def simple(cls, skew: SkewField, weight=1.0, name: str = "simple") -> "TensorField":
        """x -> simple_tensor(J(x), w(x)); w a number or a scalar-field-like."""
        weight_fn = (lambda x: float(weight)) if isinstance(weight, (int, float)) \
            else (lambda x: weight.value(x))

        def fn(x):
            return simple_tensor(skew.matrix(x), weight_fn(x))
        return cls(skew.n, fn, conservative=True, name=name)

    @classmethod
    def total(cls, parts: list["TensorField"], n: int | None = None,
              name: str = "sum") -> "TensorField":
        """Finite sum of tensor fields."""
        if not parts:
            if n is None:
                raise ValueError("empty sum needs an explicit dimension")
            return cls.zero(n)
        dim = parts[0].n
        if any(p.n != dim for p in parts):
            raise ValueError("summands have mismatched dimensions")

        def fn(x):
            acc = np.zeros((dim,) * 4)
            for p in parts:
                acc = acc + p(x).values
            return Tensor4(dim, acc)
        return cls(dim, fn, conservative=all(p.conservative for p in parts), name=name)

    def validate_on(self, points, tol: float = DEFAULT_TOL,
                    n_random: int = 32, seed: int = 0) -> None:
        """Check pointwise membership on probes; PSD only if declared conservative."""
        for x in points:
            report = check_symmetries(self(x), tol=tol, n_random=n_random, seed=seed)
            if report.symmetry_residual > tol:
                raise FieldValidationError(
                    f"tensor field {self.name} leaves the symmetry class at "
                    f"x={list(np.asarray(x))}: residual {report.symmetry_residual:.3e}")
            if self.conservative and not report.psd_ok:
                raise FieldValidationError(
                    f"tensor field {self.name} violates positive semi-definiteness at "
                    f"x={list(np.asarray(x))}: min eigenvalue {report.psd_min_eig:.3e}")
