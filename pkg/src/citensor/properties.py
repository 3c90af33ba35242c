"""Randomized-probe residual reports for the defining axioms.

Probes are degree <= 3 polynomials with exact gradients and points in
[-1, 1]^n, drawn from a fixed-seed generator, so identical seeds give
identical reports.  Residuals are reported raw; callers compare against
their tolerances.
"""

from __future__ import annotations

import numpy as np

from .brackets import (
    Metriplectic4Bracket,
    check_polarization,
    check_sqps_identities,
    ci_eval,
    e_eval,
    jacobi_residual,
    make_probes,
    mp4_eval,
)
from .fields import Polynomial, SkewField, TensorField


def axiom_report(eps: TensorField, count: int = 1000, seed: int = 0) -> dict[str, float]:
    """Evaluation-level residuals of the defining conditions of a
    conservative-irreversible tensor field.

    * leibniz_max: product-rule residual in each of the four slots
    * pair12_max / pair34_max: slot-pair symmetry
    * pair_exchange_max: e(f,g,h,k) = e(h,k,f,g)
    * cyclic_max: e(f,g,h,k) + e(h,g,k,f) + e(k,g,f,h) = 0
    * nonneg_min: min of E(s,s,h) over probes (>= 0 up to rounding)
    * degeneracy_max: max |E(h,g,h)| (first slot equal to the squared slot)
    * shift_max: invariance under constant shifts of the generating pair
    """
    rng = np.random.default_rng(seed)
    n = eps.n
    report = {"leibniz_max": 0.0, "pair12_max": 0.0, "pair34_max": 0.0,
              "pair_exchange_max": 0.0, "cyclic_max": 0.0,
              "nonneg_min": np.inf, "degeneracy_max": 0.0, "shift_max": 0.0}
    for _ in range(count):
        f, g, h, k, w = (Polynomial.random(n, rng) for _ in range(5))
        x = rng.uniform(-1.0, 1.0, size=n)

        lb = abs(ci_eval(eps, f * w, g, h, x)
                 - f.value(x) * ci_eval(eps, w, g, h, x)
                 - w.value(x) * ci_eval(eps, f, g, h, x))
        for slot in (1, 2, 3):
            args = [f, g, h, k]
            prod = args[slot] * w
            lhs = e_eval(eps, *[prod if i == slot else a for i, a in enumerate(args)], x)
            rhs = (args[slot].value(x)
                   * e_eval(eps, *[w if i == slot else a for i, a in enumerate(args)], x)
                   + w.value(x) * e_eval(eps, *args, x))
            lb = max(lb, abs(lhs - rhs))
        report["leibniz_max"] = max(report["leibniz_max"], lb)

        base = e_eval(eps, f, g, h, k, x)
        report["pair12_max"] = max(report["pair12_max"],
                                   abs(base - e_eval(eps, g, f, h, k, x)))
        report["pair34_max"] = max(report["pair34_max"],
                                   abs(base - e_eval(eps, f, g, k, h, x)))
        report["pair_exchange_max"] = max(report["pair_exchange_max"],
                                          abs(base - e_eval(eps, h, k, f, g, x)))
        report["cyclic_max"] = max(report["cyclic_max"],
                                   abs(base + e_eval(eps, h, g, k, f, x)
                                       + e_eval(eps, k, g, f, h, x)))
        report["nonneg_min"] = min(report["nonneg_min"], ci_eval(eps, f, f, g, x))
        report["degeneracy_max"] = max(report["degeneracy_max"],
                                       abs(ci_eval(eps, h, g, h, x)))
        c1 = Polynomial.constant(n, float(rng.uniform(-2, 2)))
        c2 = Polynomial.constant(n, float(rng.uniform(-2, 2)))
        report["shift_max"] = max(report["shift_max"],
                                  abs(ci_eval(eps, f, g + c1, h + c2, x)
                                      - ci_eval(eps, f, g, h, x)))
    return report


def sqps_report(eps: TensorField, count: int = 500, seed: int = 0) -> dict[str, float]:
    """Biquadratic identity residuals plus the polarization residual."""
    probes = make_probes(eps.n, count, seed)
    report = check_sqps_identities(eps, probes)
    report["polarization_max"] = check_polarization(eps, probes)
    return report


def mp4_report(bracket: Metriplectic4Bracket, count: int = 500,
               seed: int = 0) -> dict[str, float]:
    """Axiom residuals for a metriplectic 4-bracket in component form.

    ``cyclic_max`` vanishes only for rank <= 2 component matrices; it is
    reported as data (see :mod:`citensor.brackets`).
    """
    rng = np.random.default_rng(seed)
    n = bracket.n
    report = {"skew12_max": 0.0, "skew34_max": 0.0, "pair_exchange_max": 0.0,
              "cyclic_max": 0.0, "diag_min": np.inf}
    for _ in range(count):
        f, g, h, k = (Polynomial.random(n, rng) for _ in range(4))
        x = rng.uniform(-1.0, 1.0, size=n)
        base = mp4_eval(bracket, f, g, h, k, x)
        report["skew12_max"] = max(report["skew12_max"],
                                   abs(base + mp4_eval(bracket, g, f, h, k, x)))
        report["skew34_max"] = max(report["skew34_max"],
                                   abs(base + mp4_eval(bracket, f, g, k, h, x)))
        report["pair_exchange_max"] = max(report["pair_exchange_max"],
                                          abs(base - mp4_eval(bracket, h, k, f, g, x)))
        report["cyclic_max"] = max(report["cyclic_max"], abs(
            base + mp4_eval(bracket, f, h, k, g, x) + mp4_eval(bracket, f, k, g, h, x)))
        report["diag_min"] = min(report["diag_min"], mp4_eval(bracket, f, g, f, g, x))
    return report


def jacobi_report(j: SkewField, count: int = 50, seed: int = 0) -> float:
    """Max |Jacobi residual| of the almost Poisson structure (diagnostic only)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        f, g, h = (Polynomial.random(j.n, rng) for _ in range(3))
        x = rng.uniform(-1.0, 1.0, size=j.n)
        worst = max(worst, abs(jacobi_residual(j, f, g, h, x)))
    return worst
