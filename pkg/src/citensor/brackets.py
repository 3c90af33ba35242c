"""Pointwise bracket evaluations over R^n.

An almost Poisson bracket is {f,g}_J(x) = grad f(x)^T J(x) grad g(x) for a
pointwise skew J; no Jacobi identity is assumed (a residual is available
as a diagnostic).  A conservative-irreversible tensor field eps induces

    E(f,g,h)(x)   = eps(x)(grad f, grad g, grad h, grad h)    (ci_eval)
    e(f,g,h,k)(x) = eps(x)(grad f, grad g, grad h, grad k)    (e_eval)

and the biquadratic map [[f,g]] = E(f,f,g) (sqps_eval), which determines E
back through polarization.  A metriplectic 4-bracket is kept in component
form ((f,g,h,k)) = sum_i lam_i {f,g}_i {h,k}_i with lam_i >= 0; its
symmetrization in the (2,4) slots is the conservative-irreversible tensor
field sum_i simple_tensor(J_i, lam_i / 2).

Note on the cyclic axiom ((f,g,h,k)) + ((f,h,k,g)) + ((f,k,g,h)) = 0: for a
product component it equals lam/2 times the wedge square of the bivector
contracted with the four gradients, so it holds identically iff every
component matrix has rank <= 2 (e.g. the a/eB generator matrices), and
fails for generic rank-4 components.  ``mp4_cyclic_residual`` exposes the
value; the symmetrization is conservative-irreversible either way.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import Polynomial, ScalarField, SkewField, TensorField
from .tensor import eval_tensor


def poisson_eval(j: SkewField, f, g, x) -> float:
    """{f,g}_J(x) = grad f(x)^T J(x) grad g(x)."""
    x = np.asarray(x, dtype=float)
    gf = np.asarray(f.gradient(x), dtype=float)
    gg = np.asarray(g.gradient(x), dtype=float)
    if gf.shape != (j.n,) or gg.shape != (j.n,):
        raise ValueError(f"gradient shapes {gf.shape}, {gg.shape} do not match n={j.n}")
    return float(gf @ j(x) @ gg)


def ci_eval(eps: TensorField, f, g, h, x) -> float:
    """E(f,g,h)(x) = eps(x)(grad f, grad g, grad h, grad h)."""
    x = np.asarray(x, dtype=float)
    gh = h.gradient(x)
    return eval_tensor(eps(x), f.gradient(x), g.gradient(x), gh, gh)


def e_eval(eps: TensorField, f, g, h, k, x) -> float:
    """e(f,g,h,k)(x) = eps(x)(grad f, grad g, grad h, grad k).

    Agrees with the slot-(3,4) polarization of ci_eval; that agreement is
    the uniqueness of the 4-argument extension, pinned by tests.
    """
    x = np.asarray(x, dtype=float)
    return eval_tensor(eps(x), f.gradient(x), g.gradient(x),
                       h.gradient(x), k.gradient(x))


def sqps_eval(eps: TensorField, f, g, x) -> float:
    """The biquadratic map [[f,g]](x) = E(f,f,g)(x); nonnegative for
    conservative-irreversible eps."""
    return ci_eval(eps, f, f, g, x)


def polarize_sqps(eps: TensorField, f, g, h, x) -> float:
    """Recover E(f,g,h) from the biquadratic map:
    0.5 * ([[f+g,h]] - [[f,h]] - [[g,h]])."""
    return 0.5 * (sqps_eval(eps, f + g, h, x)
                  - sqps_eval(eps, f, h, x)
                  - sqps_eval(eps, g, h, x))


@dataclass(frozen=True)
class Metriplectic4Bracket:
    """Finite component sum ((f,g,h,k)) = sum_i lam_i {f,g}_i {h,k}_i.

    Each component is a (lambda field, skew field) pair; lambda fields must
    be nonnegative on probe points (checked by validate_on).
    """

    n: int
    components: tuple[tuple[ScalarField, SkewField], ...] = field(default=())

    def __post_init__(self):
        for lam, skew in self.components:
            if skew.n != self.n:
                raise ValueError("component dimension mismatch")

    def validate_on(self, points, tol: float = 0.0) -> None:
        for idx, (lam, skew) in enumerate(self.components):
            skew.validate_on(points)
            for x in points:
                v = lam.value(x)
                if v < -abs(tol):
                    raise ValueError(
                        f"component {idx}: lambda = {v:.3e} < 0 at x={list(np.asarray(x))}")


def mp4_eval(bracket: Metriplectic4Bracket, f, g, h, k, x) -> float:
    """((f,g,h,k))(x) = sum_i lam_i(x) {f,g}_i(x) {h,k}_i(x)."""
    x = np.asarray(x, dtype=float)
    total = 0.0
    for lam, skew in bracket.components:
        total += lam.value(x) * poisson_eval(skew, f, g, x) * poisson_eval(skew, h, k, x)
    return float(total)


def mp4_cyclic_residual(bracket: Metriplectic4Bracket, f, g, h, k, x) -> float:
    """((f,g,h,k)) + ((f,h,k,g)) + ((f,k,g,h)); zero iff all components
    have rank <= 2 bivectors (see module docstring)."""
    return (mp4_eval(bracket, f, g, h, k, x)
            + mp4_eval(bracket, f, h, k, g, x)
            + mp4_eval(bracket, f, k, g, h, x))


def symmetrize_mp4(bracket: Metriplectic4Bracket) -> TensorField:
    """Symmetrize in the (2,4) slots: e(f,g,h,k) = 0.5 (((f,h,g,k)) + ((f,k,g,h))).

    Returns the conservative-irreversible tensor field
    x -> sum_i simple_tensor(J_i(x), lam_i(x) / 2), for which
    ci_eval(result, f, g, h, x) == mp4_eval(bracket, f, h, g, h, x).
    """
    parts = [TensorField.simple(skew, _HalfWeight(lam), name=f"component{i}")
             for i, (lam, skew) in enumerate(bracket.components)]
    out = TensorField.total(parts, n=bracket.n, name="symmetrized_4bracket")
    out.conservative = True
    return out


class _HalfWeight:
    def __init__(self, lam):
        self._lam = lam

    def value(self, x) -> float:
        return 0.5 * self._lam.value(x)


def bracket_field(j: SkewField, f, g) -> ScalarField:
    """The function x -> {f,g}_J(x) as a scalar field (finite-difference gradient)."""
    return ScalarField(lambda x: poisson_eval(j, f, g, x),
                       name=f"{{{getattr(f, 'name', 'f')},{getattr(g, 'name', 'g')}}}")


def jacobi_residual(j: SkewField, f, g, h, x) -> float:
    """{f,{g,h}} + {g,{h,f}} + {h,{f,g}} at x, via finite differences.

    Diagnostic only: almost Poisson structures need not satisfy it, and no
    operation in this package gates on it.
    """
    return (poisson_eval(j, f, bracket_field(j, g, h), x)
            + poisson_eval(j, g, bracket_field(j, h, f), x)
            + poisson_eval(j, h, bracket_field(j, f, g), x))


# ---------------------------------------------------------------------------
# Biquadratic identity suite.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SqpsProbe:
    """One probe: polynomial fields (p1, p2, p3), a bracketing field h,
    a scalar lam, and an evaluation point."""

    fields: tuple[Polynomial, Polynomial, Polynomial]
    h: Polynomial
    lam: float
    point: np.ndarray


def make_probes(n: int, count: int, seed: int, max_degree: int = 3) -> list[SqpsProbe]:
    """Deterministic probe family: degree <= 3 polynomials with exact gradients."""
    rng = np.random.default_rng(seed)
    probes = []
    for _ in range(count):
        fields = tuple(Polynomial.random(n, rng, max_degree=max_degree) for _ in range(3))
        h = Polynomial.random(n, rng, max_degree=max_degree)
        lam = float(rng.uniform(-2.0, 2.0))
        point = rng.uniform(-1.0, 1.0, size=n)
        probes.append(SqpsProbe(fields, h, lam, point))
    return probes


def check_sqps_identities(eps: TensorField, probes: list[SqpsProbe]) -> dict[str, float]:
    """Max residual per biquadratic identity over the probe family.

    Identities, with d(u) := [[u, h]](x) for the probe's h and point:

    * inclusion_exclusion:
      d(p+q+r) - d(p+q) - d(p+r) - d(q+r) + d(p) + d(q) + d(r) = 0
    * generalized_binomial:
      d(lam p + q) = lam^2 d(p) + lam (d(p+q) - d(p) - d(q)) + d(q)
    * product_expansion (the quadratic-biderivation identity):
      d(pq + lam r) = pq d(p+q) + lam p d(q+r) + lam q d(p+r)
                      + lam (lam - p - q) d(r) + q (q - p - lam) d(p)
                      + p (p - q - lam) d(q)          (multipliers pointwise)
    * h_translation: d(p + h) = d(p)
    * symmetry: [[p, q]] = [[q, p]]
    """
    worst = {"inclusion_exclusion": 0.0, "generalized_binomial": 0.0,
             "product_expansion": 0.0, "h_translation": 0.0, "symmetry": 0.0}
    for probe in probes:
        p, q, r = probe.fields
        h, lam, x = probe.h, probe.lam, probe.point

        def d(u):
            return sqps_eval(eps, u, h, x)

        worst["inclusion_exclusion"] = max(worst["inclusion_exclusion"], abs(
            d(p + q + r) - d(p + q) - d(p + r) - d(q + r) + d(p) + d(q) + d(r)))
        worst["generalized_binomial"] = max(worst["generalized_binomial"], abs(
            d(lam * p + q) - (lam ** 2) * d(p) - lam * (d(p + q) - d(p) - d(q)) - d(q)))
        pv, qv = p.value(x), q.value(x)
        lhs = d(p * q + lam * r)
        rhs = (pv * qv * d(p + q) + lam * pv * d(q + r) + lam * qv * d(p + r)
               + lam * (lam - pv - qv) * d(r) + qv * (qv - pv - lam) * d(p)
               + pv * (pv - qv - lam) * d(q))
        worst["product_expansion"] = max(worst["product_expansion"], abs(lhs - rhs))
        worst["h_translation"] = max(worst["h_translation"], abs(d(p + h) - d(p)))
        worst["symmetry"] = max(worst["symmetry"], abs(
            sqps_eval(eps, p, q, x) - sqps_eval(eps, q, p, x)))
    return worst


def check_polarization(eps: TensorField, probes: list[SqpsProbe]) -> float:
    """Max |polarize_sqps - ci_eval| over the probe family."""
    worst = 0.0
    for probe in probes:
        p, q, _ = probe.fields
        worst = max(worst, abs(polarize_sqps(eps, p, q, probe.h, probe.point)
                               - ci_eval(eps, p, q, probe.h, probe.point)))
    return worst
