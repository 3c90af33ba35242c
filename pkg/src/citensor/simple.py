"""Simple tensors as symmetrized squares of skew matrices, and decompositions.

A *simple* tensor is ``w * (J_ik J_jl + J_il J_jk)`` for a skew-symmetric
matrix J and a scalar weight w.  Every tensor in the symmetry class is a
weighted sum of simple tensors: each PSD basis element equals the
symmetrized square of an explicit skew generator matrix (exact integer
identity), so the coordinate expansion in the PSD basis *is* a simple
decomposition.  Weights may be negative; cone membership of the total is a
separate question (see :func:`citensor.basis.cone_membership`).

``is_simple`` decides whether a tensor admits a single-(J, w)
representation and recovers a gauge-fixed witness:

* magnitudes from the diagonal blocks t[i,i,k,k] = 2 w J_ik^2,
* relative signs from t[i,i,k,l] = 2 w J_ik J_il and t[i,j,k,k] = 2 w J_ik J_jk,
  propagated over the connectivity graph of nonzero entries (entries with
  four distinct indices stitch otherwise disconnected components when one
  of their two products is negligible),
* final arbiter: full reconstruction against the input.

The pair (J, w) is only defined up to (cJ, w/c^2) and J -> -J, so the
recovered witness is normalized to max |J_ik| = 1 with the first nonzero
entry in lexicographic order positive (per free sign component).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .basis import CONE_KINDS, check_index_tuple, coordinates, psd_basis
from .tensor import DEFAULT_TOL, Tensor4, require_symmetry_class


class NotSkewError(ValueError):
    """Matrix is not exactly antisymmetric."""


@dataclass(frozen=True)
class SkewMatrix:
    """Immutable skew-symmetric matrix; the constructor enforces J = -J^T exactly."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.n, self.n):
            raise ValueError(f"expected shape ({self.n},{self.n}), got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("matrix entries must be finite")
        if np.abs(values + values.T).max() != 0.0:
            raise NotSkewError("matrix is not exactly skew-symmetric; "
                               "use SkewMatrix.from_array(a, antisymmetrize=True)")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, a, antisymmetrize: bool = False) -> "SkewMatrix":
        """Build from an array, optionally replacing it by (A - A^T)/2."""
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if antisymmetrize:
            a = 0.5 * (a - a.T)
        return cls(a.shape[0], a)

    @classmethod
    def zeros(cls, n: int) -> "SkewMatrix":
        return cls(n, np.zeros((n, n)))


def simple_tensor(j: SkewMatrix, weight: float) -> Tensor4:
    """The symmetrized square: entries weight * (J_ik J_jl + J_il J_jk).

    Always lies in the symmetry class; for weight >= 0 it lies in the PSD
    cone.  Contracted against gradients it evaluates to
    2 * weight * {f,h}_J {g,h}_J, so a tensor encoding the product
    lam * {f,h}{g,h} is ``simple_tensor(J, lam / 2)``.
    """
    v = j.values
    t = np.einsum("ik,jl->ijkl", v, v) + np.einsum("il,jk->ijkl", v, v)
    return Tensor4(j.n, weight * t)


def generator_matrix(kind: str, indices: tuple[int, ...], n: int) -> SkewMatrix:
    """Skew matrix whose symmetrized square is the named PSD basis element.

    kind ``a`` (pair i<k):        +1 at (i,k)
    kind ``eB`` (triple i<k<l):   +1 at (i,l) and (k,l)
    kind ``eC`` (quad i<k<l<m):   +1 at (i,m) and (k,l)
    kind ``eD`` (quad i<k<l<m):   +1 at (k,i) and (l,m)
    (mirrored entries are -1; simple_tensor(result, 1) reproduces the
    element exactly in integer arithmetic).
    """
    if kind not in CONE_KINDS:
        raise ValueError(f"generator kind must be one of {CONE_KINDS}, got {kind!r}")
    indices = check_index_tuple(kind, indices, n)
    mat = np.zeros((n, n))
    if kind == "a":
        i, k = indices
        plus = [(i, k)]
    elif kind == "eB":
        i, k, l = indices
        plus = [(i, l), (k, l)]
    elif kind == "eC":
        i, k, l, m = indices
        plus = [(i, m), (k, l)]
    else:  # eD
        i, k, l, m = indices
        plus = [(k, i), (l, m)]
    for r, c in plus:
        mat[r - 1, c - 1] = 1.0
        mat[c - 1, r - 1] = -1.0
    return SkewMatrix(n, mat)


@dataclass(frozen=True)
class SimpleComponent:
    """One weighted simple term; weight sign is unrestricted."""

    weight: float
    j: SkewMatrix

    def tensor(self) -> Tensor4:
        return simple_tensor(self.j, self.weight)


@dataclass(frozen=True)
class Decomposition:
    """Weighted simple components with the Frobenius reconstruction error."""

    n: int
    components: tuple[SimpleComponent, ...]
    kinds: tuple[tuple[str, tuple[int, ...]], ...]
    residual: float

    def reconstruct(self) -> Tensor4:
        total = np.zeros((self.n,) * 4)
        for comp in self.components:
            total = total + comp.tensor().values
        return Tensor4(self.n, total)


def decompose(t: Tensor4, tol: float = DEFAULT_TOL,
              drop_tol: float = 1e-12) -> Decomposition:
    """Expand t over the PSD basis and emit (weight, generator) pairs.

    The weight of each component is the raw basis coefficient; components
    with |weight| <= drop_tol are dropped.  The sum of
    ``weight * simple_tensor(J, 1)`` reconstructs t (the bracket-product
    factor 2 is absorbed into the simple-tensor normalization and
    documented there).  Raises if t is outside the symmetry class.
    """
    require_symmetry_class(t, tol)
    basis = psd_basis(t.n)
    coeff = coordinates(t, basis, tol=tol)
    components = []
    kinds = []
    total = np.zeros((t.n,) * 4)
    for c, elem in zip(coeff, basis):
        if abs(c) <= drop_tol:
            continue
        j = generator_matrix(elem.kind, elem.indices, t.n)
        components.append(SimpleComponent(float(c), j))
        kinds.append((elem.kind, elem.indices))
        total += float(c) * elem.tensor.values
    residual = float(np.linalg.norm((total - t.values).reshape(-1)))
    return Decomposition(t.n, tuple(components), tuple(kinds), residual)


@dataclass(frozen=True)
class SimplicityResult:
    """Outcome of the single-component recovery.

    On success ``j``/``weight`` hold the gauge-fixed witness and
    ``residual`` the Frobenius reconstruction error.  On refutation
    ``witness_index`` is the first (1-based, row-major) index quadruple
    where the best possible reconstruction disagrees with the input, and
    ``message`` states the incompatibility.
    """

    simple: bool
    j: SkewMatrix | None
    weight: float | None
    residual: float
    witness_index: tuple[int, int, int, int] | None = None
    message: str = ""


def _pair(i, k):
    """Unordered pair key and orientation sign of J_ik relative to J_{min,max}."""
    return ((i, k), 1.0) if i < k else ((k, i), -1.0)


def is_simple(t: Tensor4, tol: float = DEFAULT_TOL) -> SimplicityResult:
    """Decide whether t = weight * (J_ik J_jl + J_il J_jk) for some skew J.

    Raises if t is outside the symmetry class.  The zero tensor is simple
    by convention with (J, weight) = (0, 0).
    """
    require_symmetry_class(t, tol)
    n, v = t.n, t.values
    scale = max(1.0, float(np.abs(v).max()))
    atol = tol * scale

    if np.abs(v).max() <= atol:
        return SimplicityResult(True, SkewMatrix.zeros(n), 0.0,
                                float(np.linalg.norm(v.reshape(-1))))

    # Magnitudes: t[i,i,k,k] = 2 w J_ik^2.
    diag = {(i, k): v[i - 1, i - 1, k - 1, k - 1] / 2.0
            for i, k in itertools.combinations(range(1, n + 1), 2)}
    active = {p for p, d in diag.items() if abs(d) > atol}
    if not active:
        return _refute(t, SkewMatrix.zeros(n), 0.0, atol,
                       "all diagonal blocks t[i,i,k,k] vanish, forcing J = 0")
    anchor = max(sorted(active), key=lambda p: abs(diag[p]))
    weight = diag[anchor]  # gauge max |J_ik| = 1, so |w| = max |t[iikk]| / 2
    mag = {p: float(np.sqrt(abs(diag[p]) / abs(weight))) for p in active}

    # Sign constraints s_p * s_q = rhs from entries coupling two pairs.
    edges: list[tuple[tuple, tuple, float, tuple]] = []

    def add_edge(pa, oa, pb, ob, value, idx):
        if pa not in active or pb not in active or pa == pb:
            return
        rhs = np.sign(value / weight) * oa * ob
        edges.append((pa, pb, rhs, idx))

    for i, k, l in itertools.permutations(range(1, n + 1), 3):
        if k >= l:
            continue
        val = v[i - 1, i - 1, k - 1, l - 1]  # = 2 w J_ik J_il
        if abs(val) > atol:
            pa, oa = _pair(i, k)
            pb, ob = _pair(i, l)
            add_edge(pa, oa, pb, ob, val, (i, i, k, l))
        val = v[k - 1, l - 1, i - 1, i - 1]  # = 2 w J_ki J_li
        if abs(val) > atol:
            pa, oa = _pair(k, i)
            pb, ob = _pair(l, i)
            add_edge(pa, oa, pb, ob, val, (k, l, i, i))

    # Entries with four distinct indices stitch components when exactly one
    # of the two products J_ik J_jl, J_il J_jk is non-negligible.
    for i, j, k, l in itertools.permutations(range(1, n + 1), 4):
        if i >= j or k >= l:
            continue
        val = v[i - 1, j - 1, k - 1, l - 1]
        if abs(val) <= atol:
            continue
        p1a, o1a = _pair(i, k)
        p1b, o1b = _pair(j, l)
        p2a, o2a = _pair(i, l)
        p2b, o2b = _pair(j, k)
        prod1 = mag.get(p1a, 0.0) * mag.get(p1b, 0.0)
        prod2 = mag.get(p2a, 0.0) * mag.get(p2b, 0.0)
        negligible = 0.5 * atol / abs(weight)
        if prod1 > negligible >= prod2:
            add_edge(p1a, o1a, p1b, o1b, val, (i, j, k, l))
        elif prod2 > negligible >= prod1:
            add_edge(p2a, o2a, p2b, o2b, val, (i, j, k, l))

    # Propagate signs over connected components (BFS); unconstrained
    # components take an independent choice, canonicalized below.
    adjacency: dict[tuple, list[tuple]] = {p: [] for p in active}
    for pa, pb, rhs, _ in edges:
        adjacency[pa].append((pb, rhs))
        adjacency[pb].append((pa, rhs))
    sign: dict[tuple, float] = {}
    for root in sorted(active):
        if root in sign:
            continue
        component = [root]
        sign[root] = 1.0
        queue = [root]
        while queue:
            p = queue.pop()
            for q, rhs in adjacency[p]:
                if q not in sign:
                    sign[q] = sign[p] * rhs
                    component.append(q)
                    queue.append(q)
        if sign[min(component)] < 0:  # lexicographically first entry positive
            for p in component:
                sign[p] = -sign[p]

    mat = np.zeros((n, n))
    for (i, k), m in mag.items():
        mat[i - 1, k - 1] = sign[(i, k)] * m
        mat[k - 1, i - 1] = -sign[(i, k)] * m
    j = SkewMatrix(n, mat)
    return _refute(t, j, float(weight), atol, "") if _mismatch(t, j, weight, atol) \
        else _success(t, j, float(weight))


def _mismatch(t, j, weight, atol):
    return np.abs(simple_tensor(j, weight).values - t.values).max() > atol


def _success(t, j, weight):
    resid = float(np.linalg.norm(
        (simple_tensor(j, weight).values - t.values).reshape(-1)))
    return SimplicityResult(True, j, weight, resid)


def _refute(t, j, weight, atol, note):
    recon = simple_tensor(j, weight).values
    diff = np.abs(recon - t.values)
    witness = None
    for idx in itertools.product(range(t.n), repeat=4):
        if diff[idx] > atol:
            witness = tuple(x + 1 for x in idx)
            break
    resid = float(np.linalg.norm((recon - t.values).reshape(-1)))
    i, jx, k, l = witness
    message = (f"entry t[{i},{jx},{k},{l}] = {t.values[i-1,jx-1,k-1,l-1]:.6g} is "
               f"incompatible with the recovered magnitudes, which force "
               f"w*(J[{i},{k}]J[{jx},{l}] + J[{i},{l}]J[{jx},{k}]) = {recon[i-1,jx-1,k-1,l-1]:.6g}")
    if note:
        message = f"{note}; {message}"
    return SimplicityResult(False, None, None, resid,
                            witness_index=witness, message=message)
