"""Dimension, explicit bases and the PSD cone of the symmetry class.

The symmetry class on R^n has dimension C(n,2) + C(n,3) + 2*C(n,4),
equivalently n(n-1)(n^2/6 - n/2 + 4/3)/2.  It carries an explicit basis
indexed by strictly increasing index tuples: one generator per pair
(kind ``a``), one per triple (kind ``b``) and two per quadruple (kinds
``c`` and ``d``).  The raw b/c/d generators are not PSD, but the combined
elements

    eB(i,k,l)   = a(i,l) + a(k,l) + b(i,k,l)
    eC(i,k,l,m) = a(i,m) + a(k,l) + c(i,k,l,m)
    eD(i,k,l,m) = a(i,k) + a(l,m) + d(i,k,l,m)

have perfect-square contracted forms, so {a} + {eB} + {eC} + {eD} is a
basis of the symmetry class lying inside the PSD cone.  All entry tables
are locked by exact integer identities against the skew generator matrices
of :mod:`citensor.simple` (see the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .tensor import (
    DEFAULT_TOL,
    NotInSymmetryClassError,
    Tensor4,
    check_symmetries,
    symmetry_residuals,
)

#: Tuple length per basis kind.
KIND_ARITY = {"a": 2, "b": 3, "c": 4, "d": 4, "eB": 3, "eC": 4, "eD": 4}

#: Kinds of psd_basis elements, in enumeration order.
CONE_KINDS = ("a", "eB", "eC", "eD")


class RankDeficientBasisError(ValueError):
    """The flattened basis matrix is rank deficient (a construction bug)."""


def symmetry_class_dim(n: int) -> int:
    """Dimension of the symmetry class: C(n,2) + C(n,3) + 2*C(n,4)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return comb(n, 2) + comb(n, 3) + 2 * comb(n, 4)


def check_index_tuple(kind: str, indices: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Validate a strictly increasing index tuple for the given kind."""
    if kind not in KIND_ARITY:
        raise ValueError(f"unknown basis kind {kind!r}")
    indices = tuple(int(x) for x in indices)
    if len(indices) != KIND_ARITY[kind]:
        raise ValueError(f"kind {kind!r} needs {KIND_ARITY[kind]} indices, "
                         f"got {indices}")
    if any(not 1 <= x <= n for x in indices):
        raise ValueError(f"indices {indices} out of range 1..{n}")
    if any(x >= y for x, y in zip(indices, indices[1:])):
        raise ValueError(f"indices must be strictly increasing, got {indices}")
    return indices


def _a_entries(i, k):
    table = {(i, i, k, k): 2.0, (k, k, i, i): 2.0}
    for idx in ((i, k, k, i), (i, k, i, k), (k, i, i, k), (k, i, k, i)):
        table[idx] = -1.0
    return table


def _b_entries(i, k, l):
    table = {}
    for idx in ((i, k, l, l), (k, i, l, l), (l, l, k, i), (l, l, i, k)):
        table[idx] = 2.0
    for idx in ((l, i, l, k), (l, i, k, l), (l, k, l, i), (l, k, i, l),
                (k, l, l, i), (k, l, i, l), (i, l, l, k), (i, l, k, l)):
        table[idx] = -1.0
    return table


def _c_entries(i, k, l, m):
    table = {}
    for idx in ((i, k, l, m), (i, k, m, l), (k, i, l, m), (k, i, m, l),
                (m, l, k, i), (m, l, i, k), (l, m, k, i), (l, m, i, k)):
        table[idx] = 1.0
    for idx in ((m, k, i, l), (m, k, l, i), (k, m, i, l), (k, m, l, i),
                (i, l, m, k), (i, l, k, m), (l, i, m, k), (l, i, k, m)):
        table[idx] = -1.0
    return table


def _d_entries(i, k, l, m):
    table = {}
    for idx in ((l, k, m, i), (l, k, i, m), (k, l, m, i), (k, l, i, m),
                (m, i, l, k), (m, i, k, l), (i, m, l, k), (i, m, k, l)):
        table[idx] = 1.0
    for idx in ((m, k, i, l), (m, k, l, i), (k, m, i, l), (k, m, l, i),
                (l, i, k, m), (l, i, m, k), (i, l, k, m), (i, l, m, k)):
        table[idx] = -1.0
    return table


_RAW_TABLES = {"a": _a_entries, "b": _b_entries, "c": _c_entries, "d": _d_entries}


@dataclass(frozen=True)
class BasisElement:
    """A tagged basis tensor: kind, defining index tuple, materialized tensor."""

    kind: str
    indices: tuple[int, ...]
    tensor: Tensor4


def make_basis_element(kind: str, indices: tuple[int, ...], n: int) -> BasisElement:
    """Materialize one raw basis generator (kinds a, b, c, d)."""
    if kind not in _RAW_TABLES:
        raise ValueError(f"raw basis kind must be one of a/b/c/d, got {kind!r}")
    indices = check_index_tuple(kind, indices, n)
    tensor = Tensor4.from_entries(n, _RAW_TABLES[kind](*indices))
    return BasisElement(kind, indices, tensor)


def make_cone_element(kind: str, indices: tuple[int, ...], n: int) -> BasisElement:
    """Materialize one PSD basis element (kinds a, eB, eC, eD)."""
    indices = check_index_tuple(kind, indices, n)
    if kind == "a":
        return make_basis_element("a", indices, n)
    if kind == "eB":
        i, k, l = indices
        t = (make_basis_element("a", (i, l), n).tensor.values
             + make_basis_element("a", (k, l), n).tensor.values
             + make_basis_element("b", (i, k, l), n).tensor.values)
    elif kind == "eC":
        i, k, l, m = indices
        t = (make_basis_element("a", (i, m), n).tensor.values
             + make_basis_element("a", (k, l), n).tensor.values
             + make_basis_element("c", (i, k, l, m), n).tensor.values)
    elif kind == "eD":
        i, k, l, m = indices
        t = (make_basis_element("a", (i, k), n).tensor.values
             + make_basis_element("a", (l, m), n).tensor.values
             + make_basis_element("d", (i, k, l, m), n).tensor.values)
    else:
        raise ValueError(f"unknown cone kind {kind!r}")
    return BasisElement(kind, indices, Tensor4(n, t))


def enumerate_basis(n: int) -> list[BasisElement]:
    """Raw basis of the symmetry class: a per pair, b per triple, c and d per quadruple."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = [make_basis_element("a", t, n) for t in combinations(range(1, n + 1), 2)]
    out += [make_basis_element("b", t, n) for t in combinations(range(1, n + 1), 3)]
    out += [make_basis_element("c", t, n) for t in combinations(range(1, n + 1), 4)]
    out += [make_basis_element("d", t, n) for t in combinations(range(1, n + 1), 4)]
    return out


def psd_basis(n: int) -> list[BasisElement]:
    """Basis of the symmetry class consisting of cone elements (a, eB, eC, eD)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = [make_cone_element("a", t, n) for t in combinations(range(1, n + 1), 2)]
    out += [make_cone_element("eB", t, n) for t in combinations(range(1, n + 1), 3)]
    out += [make_cone_element("eC", t, n) for t in combinations(range(1, n + 1), 4)]
    out += [make_cone_element("eD", t, n) for t in combinations(range(1, n + 1), 4)]
    return out


def basis_matrix(basis: list[BasisElement]) -> np.ndarray:
    """Column-stack the flattened basis tensors (n^4 x len(basis))."""
    return np.column_stack([b.tensor.flat() for b in basis])


def coordinates(t: Tensor4, basis: list[BasisElement],
                tol: float = DEFAULT_TOL) -> np.ndarray:
    """Coefficients c with sum_i c_i basis_i = t, by least squares.

    Requires t in the symmetry class (symmetry residual <= tol) and a
    full-rank basis; raises otherwise.  The reconstruction is checked to
    Frobenius residual <= tol * max(1, ||t||_F).
    """
    (r12, _), (r34, _), (rc, _) = symmetry_residuals(t)
    residual = max(r12, r34, rc)
    if residual > tol:
        raise NotInSymmetryClassError(residual)
    if not basis:
        if np.abs(t.values).max() > tol:
            raise RankDeficientBasisError("empty basis cannot represent a nonzero tensor")
        return np.zeros(0)
    mat = basis_matrix(basis)
    if np.linalg.matrix_rank(mat) < len(basis):
        raise RankDeficientBasisError(
            f"basis matrix rank < {len(basis)}; generators are not independent")
    coeff, *_ = np.linalg.lstsq(mat, t.flat(), rcond=None)
    recon = mat @ coeff
    err = float(np.linalg.norm(recon - t.flat()))
    if err > tol * max(1.0, float(np.linalg.norm(t.flat()))):
        raise NotInSymmetryClassError(
            err, f"tensor is outside the span of the basis (residual {err:.3e})")
    return coeff


@dataclass(frozen=True)
class ConeEvidence:
    """Reproducible evidence for a cone membership verdict.

    ``verdict`` is ``"in_S"`` or ``"not_in_S"``.  A negative verdict always
    records concrete evidence: a direction whose contracted matrix has an
    eigenvalue below -tol, or the worst index quadruple of a violated
    linear symmetry.
    """

    constraint_residual: float
    psd_min_eig: float
    verdict: str
    witness_direction: np.ndarray | None = None
    witness_index: tuple[int, int, int, int] | None = None

    @property
    def in_cone(self) -> bool:
        return self.verdict == "in_S"


def cone_membership(t: Tensor4, tol: float = DEFAULT_TOL, **psd_kwargs) -> ConeEvidence:
    """Decide membership in the PSD cone over the deterministic sample.

    ``in_S`` iff all symmetry residuals are <= tol and the sampled minimum
    eigenvalue is >= -tol.  The sampling plan is deterministic, so the
    verdict is always decided (never inconclusive); it is honest evidence,
    not an exact certificate for all directions.
    """
    report = check_symmetries(t, tol=tol, **psd_kwargs)
    if not (report.pair12_ok and report.pair34_ok and report.cyclic_ok):
        worst = max(
            (report.pair12_residual, report.worst_pair12),
            (report.pair34_residual, report.worst_pair34),
            (report.cyclic_residual, report.worst_cyclic),
        )
        return ConeEvidence(
            constraint_residual=report.symmetry_residual,
            psd_min_eig=report.psd_min_eig,
            verdict="not_in_S",
            witness_index=worst[1],
        )
    if not report.psd_ok:
        return ConeEvidence(
            constraint_residual=report.symmetry_residual,
            psd_min_eig=report.psd_min_eig,
            verdict="not_in_S",
            witness_direction=report.psd_witness,
        )
    return ConeEvidence(
        constraint_residual=report.symmetry_residual,
        psd_min_eig=report.psd_min_eig,
        verdict="in_S",
    )
