"""Irreversible Hamiltonian dynamics with conservation diagnostics.

The vector field is dx/dt = J(x) grad h(x) + X(x) where
X_i = sum_{jkl} eps_{ijkl}(x) d_j s d_k h d_l h is the dissipative part
generated by a conservative-irreversible tensor field eps and the pair
(entropy s, Hamiltonian h).  At the field level, <grad h, X> = 0 exactly
and the entropy production E(s,s,h) is pointwise nonnegative, so h is
conserved and s nondecreasing along exact trajectories; a fixed-step
classical RK4 integrator makes field-level exactness versus integrator
drift legible (h drift scales as step^4).

A system declares its noninteraction condition: ``weak`` requires
{s,h}(x) = 0, ``strong`` requires J(x) grad s(x) = 0 (entropy is a
Casimir).  Both are validated on probe points around the initial state at
registration, and the weak condition is re-checked along the trajectory
(it is state dependent); violations abort with a diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .brackets import ci_eval, e_eval, poisson_eval
from .fields import ScalarField, SkewField, TensorField, validate_gradient
from .tensor import eval_tensor

NONINTERACTION_TOL = 1e-10
VALIDATION_PROBES = 100
VALIDATION_SEED = 0
PROBE_RADIUS = 0.5


class NoninteractionError(ValueError):
    """Declared noninteraction condition fails at a probe or along a trajectory."""


class IntegrationError(RuntimeError):
    """Non-finite state encountered; carries the last valid time and state."""

    def __init__(self, message, last_time, last_state):
        super().__init__(message)
        self.last_time = last_time
        self.last_state = np.asarray(last_state)


@dataclass
class SystemSpec:
    """An irreversible Hamiltonian system on R^n."""

    n: int
    poisson: SkewField
    eps: TensorField
    entropy: ScalarField
    hamiltonian: ScalarField
    noninteraction: str  # "weak" | "strong"
    name: str = ""
    default_x0: np.ndarray | None = None

    def __post_init__(self):
        if self.noninteraction not in ("weak", "strong"):
            raise ValueError(
                f"noninteraction must be 'weak' or 'strong', got {self.noninteraction!r}")
        if self.poisson.n != self.n or self.eps.n != self.n:
            raise ValueError("component dimensions do not match n")
        if self.default_x0 is not None:
            self.default_x0 = np.asarray(self.default_x0, dtype=float)


@dataclass
class IntegratorConfig:
    """Fixed-step classical RK4 configuration."""

    step: float
    t_end: float
    method: str = "rk4"
    record_every: int = 1

    def __post_init__(self):
        if self.method != "rk4":
            raise ValueError(f"only method='rk4' is supported, got {self.method!r}")
        if not (self.step > 0 and self.t_end > 0):
            raise ValueError("step and t_end must be positive")
        if self.step > self.t_end:
            raise ValueError("step must not exceed t_end")
        if self.record_every < 1:
            raise ValueError("record_every must be a positive integer")


@dataclass
class Trajectory:
    """Recorded states with pointwise diagnostics.

    ``entropy_rate_values`` is E(s,s,h) along the path -- the exact
    field-level production term, nonnegative up to rounding regardless of
    integrator error.  ``sh_bracket_values`` tracks {s,h} for the
    noninteraction condition.
    """

    times: np.ndarray
    states: np.ndarray
    h_values: np.ndarray
    s_values: np.ndarray
    entropy_rate_values: np.ndarray
    sh_bracket_values: np.ndarray


def validate_system(spec: SystemSpec, x0, tol: float = NONINTERACTION_TOL,
                    n_probes: int = VALIDATION_PROBES, seed: int = VALIDATION_SEED,
                    radius: float = PROBE_RADIUS) -> None:
    """Registration checks on probe points around x0.

    Validates declared analytic gradients against finite differences, the
    tensor field's pointwise conservative-irreversible structure, and the
    declared noninteraction condition.
    """
    x0 = np.asarray(x0, dtype=float)
    rng = np.random.default_rng(seed)
    probes = x0 + radius * rng.standard_normal((n_probes, spec.n))
    validate_gradient(spec.entropy, probes[:10])
    validate_gradient(spec.hamiltonian, probes[:10])
    spec.poisson.validate_on(probes[:10])
    spec.eps.validate_on(probes[:20])
    for x in probes:
        if spec.noninteraction == "strong":
            drift = float(np.linalg.norm(spec.poisson(x) @ spec.entropy.gradient(x)))
            if drift > tol:
                raise NoninteractionError(
                    f"strong noninteraction fails: |J grad s| = {drift:.3e} "
                    f"at x={x.tolist()}")
        else:
            sh = poisson_eval(spec.poisson, spec.entropy, spec.hamiltonian, x)
            if abs(sh) > tol:
                raise NoninteractionError(
                    f"weak noninteraction fails: {{s,h}} = {sh:.3e} at x={x.tolist()}")


def ci_field(eps: TensorField, s: ScalarField, h: ScalarField, x) -> np.ndarray:
    """Dissipative vector field X_i = sum_{jkl} eps_{ijkl} d_j s d_k h d_l h."""
    x = np.asarray(x, dtype=float)
    gs = s.gradient(x)
    gh = h.gradient(x)
    return np.einsum("ijkl,j,k,l->i", eps(x).values, gs, gh, gh)


def irr_ham_field(spec: SystemSpec, x) -> np.ndarray:
    """J(x) grad h + dissipative field."""
    x = np.asarray(x, dtype=float)
    return spec.poisson(x) @ spec.hamiltonian.gradient(x) \
        + ci_field(spec.eps, spec.entropy, spec.hamiltonian, x)


def entropy_rate(spec: SystemSpec, x) -> float:
    """E(s,s,h)(x) -- pointwise nonnegative production term."""
    return ci_eval(spec.eps, spec.entropy, spec.entropy, spec.hamiltonian, x)


def _rk4_step(fn, x, dt):
    k1 = fn(x)
    k2 = fn(x + 0.5 * dt * k1)
    k3 = fn(x + 0.5 * dt * k2)
    k4 = fn(x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(spec: SystemSpec, x0, cfg: IntegratorConfig,
              validate: bool = True,
              noninteraction_tol: float = NONINTERACTION_TOL) -> Trajectory:
    """Fixed-step RK4 on the irreversible Hamiltonian field.

    Records states and diagnostics every ``cfg.record_every`` steps (the
    initial and final states always).  The weak noninteraction condition is
    re-checked at every recorded state; ``validate=False`` skips all
    registration and noninteraction checks (used for negative controls).
    """
    x = np.asarray(x0, dtype=float)
    if x.shape != (spec.n,):
        raise ValueError(f"x0 has shape {x.shape}, expected ({spec.n},)")
    if validate:
        validate_system(spec, x, tol=noninteraction_tol)

    n_steps = int(round(cfg.t_end / cfg.step))
    if abs(n_steps * cfg.step - cfg.t_end) > 1e-9 * cfg.t_end:
        n_steps = int(np.ceil(cfg.t_end / cfg.step))
    times, states = [], []
    h_vals, s_vals, rate_vals, sh_vals = [], [], [], []

    def record(t, state):
        sh = poisson_eval(spec.poisson, spec.entropy, spec.hamiltonian, state)
        if validate and abs(sh) > noninteraction_tol:
            raise NoninteractionError(
                f"weak noninteraction violated along trajectory at t={t:.6g}: "
                f"{{s,h}} = {sh:.3e}")
        times.append(t)
        states.append(state.copy())
        h_vals.append(spec.hamiltonian.value(state))
        s_vals.append(spec.entropy.value(state))
        rate_vals.append(entropy_rate(spec, state))
        sh_vals.append(sh)

    fn = lambda state: irr_ham_field(spec, state)
    record(0.0, x)
    for step_idx in range(1, n_steps + 1):
        t = min(step_idx * cfg.step, cfg.t_end)
        dt = t - (step_idx - 1) * cfg.step if step_idx == n_steps else cfg.step
        x = _rk4_step(fn, x, dt)
        if not np.all(np.isfinite(x)):
            raise IntegrationError(
                f"non-finite state after t={times[-1]:.6g}",
                last_time=times[-1], last_state=states[-1])
        if step_idx % cfg.record_every == 0 or step_idx == n_steps:
            record(t, x)
    return Trajectory(
        times=np.asarray(times), states=np.asarray(states),
        h_values=np.asarray(h_vals), s_values=np.asarray(s_vals),
        entropy_rate_values=np.asarray(rate_vals),
        sh_bracket_values=np.asarray(sh_vals))


def diagnostics(traj: Trajectory) -> dict:
    """Thermodynamic-law report for a recorded trajectory.

    ``delta_s_min`` is the smallest entropy increment between consecutive
    recorded samples; it may dip below zero by integrator error even though
    the pointwise ``entropy_rate_min`` cannot (up to rounding).
    """
    if traj.times.size == 0:
        raise ValueError("empty trajectory")
    h0 = traj.h_values[0]
    delta_s = np.diff(traj.s_values)
    return {
        "t_final": float(traj.times[-1]),
        "samples": int(traj.times.size),
        "h_initial": float(h0),
        "h_drift_max": float(np.abs(traj.h_values - h0).max()),
        "delta_s_min": float(delta_s.min()) if delta_s.size else 0.0,
        "entropy_rate_min": float(traj.entropy_rate_values.min()),
        "sh_bracket_max_abs": float(np.abs(traj.sh_bracket_values).max()),
    }


def be_bracket(spec: SystemSpec, f: ScalarField, g: ScalarField, x) -> float:
    """Entropy-slotted view [f,g] = E(f,s,g) = eps(grad f, grad s, grad g, grad g)."""
    x = np.asarray(x, dtype=float)
    gg = g.gradient(x)
    return eval_tensor(spec.eps(x), f.gradient(x), spec.entropy.gradient(x), gg, gg)


def metriplectic_bracket(spec: SystemSpec, f: ScalarField, g: ScalarField, x) -> float:
    """Hamiltonian-slotted view [f,g] = E(f,g,h) = eps(grad f, grad g, grad h, grad h).

    Symmetric, nonnegative on the diagonal, and degenerate on h.  Both this
    and ``be_bracket`` depend on the generating pair (s, h); they are
    evaluation conveniences, not standalone bracket structures.
    """
    return e_eval(spec.eps, f, g, spec.hamiltonian, spec.hamiltonian, x)
