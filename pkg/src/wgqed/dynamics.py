"""Numerical engines built on the adjoint generator.

Time stepping uses classical fourth-order Runge-Kutta.  The free rotation
at the emitter frequency commutes with the damped part of the generator
(identical emitters), so it is factored out and applied exactly; RK4 only
sees the slow damped part.  ``field_at`` gives the matrix-exponential
second path.

All grids are uniform.  Times passed to evaluation routines must lie on the
grid; nothing is interpolated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, simpson, trapezoid
from scipy.linalg import expm

from .core import SystemConfig, spin_operator, validate_density
from .generator import GeneratorMatrix, build_generator

DEFAULT_DT = 1e-3


def max_step(omega: float, gamma: float) -> float:
    return min(0.05 / gamma, 0.02 * 2 * np.pi / (2 * omega))


def default_omegas(omega: float = 20.0, gamma: float = 1.0, half_width: float = 30.0, count: int = 4001):
    return np.linspace(omega - half_width * gamma, omega + half_width * gamma, count)


class _Stepper:
    """RK4 propagation of ``dv/dt = M v`` with the diagonal rotation split off."""

    def __init__(self, free_diag: np.ndarray, damped: np.ndarray, dt: float):
        scale = max(1.0, np.max(np.abs(damped)))
        comm = free_diag[:, None] * damped - damped * free_diag[None, :]
        if np.max(np.abs(comm)) > 1e-9 * scale * max(1.0, np.max(np.abs(free_diag))):
            damped = damped + np.diag(free_diag)
            free_diag = np.zeros_like(free_diag)
        a = damped * dt
        eye = np.eye(a.shape[0], dtype=complex)
        a2 = a @ a
        self.step = eye + a + a2 / 2 + a2 @ a / 6 + a2 @ a2 / 24
        self.free = free_diag
        self.dt = dt

    def series(self, v0: np.ndarray, n_steps: int) -> np.ndarray:
        """Rows (or stacked matrices) ``exp(M t_k) v0`` for ``k = 0..n_steps``."""
        v = np.array(v0, dtype=complex)
        out = np.empty((n_steps + 1,) + v.shape, dtype=complex)
        out[0] = v
        for k in range(1, n_steps + 1):
            v = self.step @ v
            out[k] = v
        if not np.all(np.isfinite(out)):
            raise FloatingPointError("non-finite values during time stepping")
        times = np.arange(n_steps + 1) * self.dt
        rot = np.exp(np.outer(times, self.free))
        if v.ndim == 1:
            return out * rot
        return out * rot[:, :, None]


def _steps(t_max: float, dt: float) -> int:
    n = int(round(t_max / dt))
    if n < 0 or abs(n * dt - t_max) > 1e-9 * max(1.0, t_max):
        raise ValueError(f"t_max={t_max} is not a whole number of steps dt={dt}")
    return n


def _adjoint_stepper(gen: GeneratorMatrix, dt: float) -> _Stepper:
    return _Stepper(gen.free_diag, gen.damped_superop, dt)


def _forward_stepper(gen: GeneratorMatrix, dt: float) -> _Stepper:
    # vec(rho^T) evolves with lam = superop^T; the free part is the same diagonal
    return _Stepper(gen.free_diag, gen.damped_superop.T, dt)


@dataclass(frozen=True)
class TransitionOperatorField:
    """``coeffs[k, ij, kl]``: weight of ``|k><l|`` in ``<P_ij(times[k])>``."""

    times: np.ndarray
    coeffs: np.ndarray
    dim: int

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    def index(self, t: float) -> int:
        if len(self.times) == 1:
            if abs(t - self.times[0]) > 1e-12:
                raise ValueError(f"time {t} is not on the grid")
            return 0
        k = int(round(t / self.dt))
        if k < 0 or k >= len(self.times) or abs(self.times[k] - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"time {t} is not on the grid")
        return k

    def element(self, i: int, j: int, t: float) -> np.ndarray:
        d = self.dim
        return self.coeffs[self.index(t), i * d + j].reshape(d, d)


def evolve_field(gen: GeneratorMatrix, t_max: float, dt: float = DEFAULT_DT,
                 check_step: bool = True) -> TransitionOperatorField:
    if dt <= 0:
        raise ValueError("dt must be positive")
    if check_step and dt > max_step(gen.omega, gen.gamma) * (1 + 1e-12):
        raise ValueError(f"dt={dt} exceeds the stable limit {max_step(gen.omega, gen.gamma):.3g}")
    n = _steps(t_max, dt)
    d2 = gen.dim**2
    mats = _adjoint_stepper(gen, dt).series(np.eye(d2, dtype=complex), n)
    return TransitionOperatorField(np.arange(n + 1) * dt, np.swapaxes(mats, 1, 2).copy(), gen.dim)


def field_at(gen: GeneratorMatrix, t: float) -> np.ndarray:
    """Coefficient matrix at a single time by matrix exponential."""
    return expm(gen.lam * t)


def zero_field(dim: int, t_max: float, dt: float) -> TransitionOperatorField:
    n = _steps(t_max, dt)
    eye = np.eye(dim * dim, dtype=complex)
    return TransitionOperatorField(np.arange(n + 1) * dt, np.broadcast_to(eye, (n + 1,) + eye.shape).copy(), dim)


def _vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex).reshape(-1)


def propagate_operator(field: TransitionOperatorField, x: np.ndarray, t: float) -> np.ndarray:
    """Schrodinger-picture image of ``x`` after time ``t``."""
    d = field.dim
    c = field.coeffs[field.index(t)]
    return (c @ _vec(np.asarray(x).T)).reshape(d, d).T


def heisenberg(field: TransitionOperatorField, x: np.ndarray, t: float) -> np.ndarray:
    """Vacuum-averaged Heisenberg image of a spin operator ``x``."""
    d = field.dim
    return (_vec(x) @ field.coeffs[field.index(t)]).reshape(d, d)


def density_evolution(field: TransitionOperatorField, rho0: np.ndarray, t: float) -> np.ndarray:
    rho = propagate_operator(field, validate_density(rho0, 1e-10, 1e-10), t)
    if not np.all(np.isfinite(rho)):
        raise FloatingPointError("non-finite density matrix")
    return rho


def density_series(gen: GeneratorMatrix, rho0: np.ndarray, t_max: float, dt: float = DEFAULT_DT,
                   check_step: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """``(times, rho[k])`` by forward stepping, without storing the full field."""
    rho0 = validate_density(rho0, 1e-10, 1e-10)
    if dt <= 0:
        raise ValueError("dt must be positive")
    if check_step and dt > max_step(gen.omega, gen.gamma) * (1 + 1e-12):
        raise ValueError(f"dt={dt} exceeds the stable limit {max_step(gen.omega, gen.gamma):.3g}")
    n = _steps(t_max, dt)
    return np.arange(n + 1) * dt, _expectation_series(_forward_stepper(gen, dt), rho0, n)


def transition_probability(field: TransitionOperatorField, initial: np.ndarray, final: np.ndarray, t: float) -> float:
    proj = np.outer(final, np.conj(final))
    return float(np.real(np.conj(initial) @ heisenberg(field, proj, t) @ initial))


def two_time_correlator(field: TransitionOperatorField, rho0: np.ndarray, n: int, m: int,
                        tau: float, tau_p: float) -> complex:
    """``<sigma_+^(n)(tau) sigma_-^(m)(tau_p)>`` for zero-based emitter indices."""
    nq = int(round(np.log2(field.dim)))
    sp, sm = spin_operator("raise", n, nq), spin_operator("lower", m, nq)
    if tau >= tau_p:
        rho = propagate_operator(field, rho0, tau_p)
        return complex(np.trace(rho @ heisenberg(field, sp, tau - tau_p) @ sm))
    rho = propagate_operator(field, rho0, tau)
    return complex(np.trace(heisenberg(field, sm, tau_p - tau) @ rho @ sp))


def ordered_correlator(field: TransitionOperatorField, rho0: np.ndarray, steps) -> complex:
    """Nested correlator ``<L1(s1) ... Lk(sk) Rk(sk) ... R1(s1)>``.

    ``steps`` is a sequence of ``(s, L, R)`` with non-decreasing times.  The
    reduction applies ``X -> R X L`` at each time and propagates ``X`` with
    the master-equation map in between.
    """
    steps = list(steps)
    if not steps:
        return complex(np.trace(rho0))
    times = [s for s, _, _ in steps]
    if any(b < a for a, b in zip(times, times[1:])):
        raise ValueError("correlator times must be non-decreasing")
    x = propagate_operator(field, rho0, times[0])
    prev = times[0]
    for s, left, right in steps:
        if s > prev:
            x = propagate_operator(field, x, s - prev)
            prev = s
        x = right @ x @ left
    return complex(np.trace(x))


def collective_raising(config: SystemConfig, direction: int = 1, phases=None) -> np.ndarray:
    """``sum_n exp(i b k x_n) sigma_+^(n)`` for branch ``b = direction``."""
    ph = np.asarray(config.phases if phases is None else phases, float)
    n = config.n_qubits
    return sum(np.exp(1j * direction * ph[q]) * spin_operator("raise", q, n) for q in range(n))


@dataclass(frozen=True)
class SpectrumGrid:
    omegas: np.ndarray
    values: np.ndarray
    imag_residue: float = 0.0


def _expectation_series(stepper_fwd: _Stepper, rho0: np.ndarray, n: int) -> np.ndarray:
    d = rho0.shape[0]
    vt = stepper_fwd.series(_vec(np.asarray(rho0).T), n)
    return np.swapaxes(vt.reshape(n + 1, d, d), 1, 2)


def spectrum_quadrature(config: SystemConfig, rho0: np.ndarray, omegas, t: float, dt: float = DEFAULT_DT,
                        direction: int = 1, gen: GeneratorMatrix | None = None, chunk: int = 16) -> SpectrumGrid:
    """Photon number per mode from the two-time correlators, by double trapezoid.

    The triangle ``tau > tau'`` and its complement are handled separately.
    Inner integrals are cumulative trapezoids in the time difference, outer
    ones plain trapezoids.
    """
    rho0 = validate_density(rho0, 1e-10, 1e-10)
    gen = gen if gen is not None else build_generator(config)
    omegas = np.atleast_1d(np.asarray(omegas, float))
    n = _steps(t, dt)
    d = config.dim
    splus = collective_raising(config, direction)
    sminus = splus.conj().T
    adj = _adjoint_stepper(gen, dt)
    f_plus = adj.series(_vec(splus), n)
    f_minus = adj.series(_vec(sminus), n)
    rho = _expectation_series(_forward_stepper(gen, dt), rho0, n)
    # Tr[H R] = vec(H) . vec(R^T)
    r1 = np.swapaxes(np.einsum("ab,tbc->tac", sminus, rho), 1, 2).reshape(n + 1, d * d)
    r2 = np.swapaxes(np.einsum("tab,bc->tac", rho, splus), 1, 2).reshape(n + 1, d * d)
    keep1 = np.flatnonzero(np.any(f_plus != 0, axis=0) & np.any(r1 != 0, axis=0))
    keep2 = np.flatnonzero(np.any(f_minus != 0, axis=0) & np.any(r2 != 0, axis=0))
    f_plus, r1 = f_plus[:, keep1], r1[:, keep1]
    f_minus, r2 = f_minus[:, keep2], r2[:, keep2]
    times = np.arange(n + 1) * dt
    out = np.empty(omegas.shape, dtype=complex)
    for lo in range(0, len(omegas), chunk):
        w = omegas[lo:lo + chunk]
        ph = np.exp(-1j * np.outer(w, times))
        h1 = cumulative_trapezoid(ph[:, :, None] * f_plus[None], dx=dt, axis=1, initial=0)
        b1 = trapezoid(np.einsum("wtk,tk->wt", h1[:, ::-1], r1), dx=dt, axis=1)
        h2 = cumulative_trapezoid(ph.conj()[:, :, None] * f_minus[None], dx=dt, axis=1, initial=0)
        b2 = trapezoid(np.einsum("wtk,tk->wt", h2[:, ::-1], r2), dx=dt, axis=1)
        out[lo:lo + chunk] = b1 + b2
    out *= config.gamma
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite spectrum")
    resid = float(np.max(np.abs(out.imag))) if out.size else 0.0
    scale = max(1.0, float(np.max(np.abs(out.real)))) if out.size else 1.0
    if resid > 1e-8 * scale:
        raise FloatingPointError(f"imaginary residue {resid:.3g} in spectrum quadrature")
    return SpectrumGrid(omegas, out.real.copy(), resid)


def emission_rate_numeric(field: TransitionOperatorField, rho0: np.ndarray, t, config: SystemConfig,
                          direction: int = 1):
    """Photon emission rate into branch ``direction`` from ``Gamma/2 <S+ S->``."""
    splus = collective_raising(config, direction)
    obs = splus @ splus.conj().T
    ts = np.atleast_1d(np.asarray(t, float))
    vals = np.array([np.trace(propagate_operator(field, rho0, s) @ obs).real for s in ts]) * 0.5 * config.gamma
    return vals if np.ndim(t) else float(vals[0])


def photon_mean_numeric(field: TransitionOperatorField, rho0: np.ndarray, w, t: float, config: SystemConfig,
                        direction: int = 1, creation: bool = False):
    """``<a_k(t)>`` (or ``<a_k^dag(t)>``) with ``g_k = sqrt(gamma)``, by Simpson quadrature."""
    k_end = field.index(t)
    times = field.times[: k_end + 1]
    splus = collective_raising(config, direction)
    op = splus if creation else splus.conj().T
    traced = np.einsum("k,tkl,l->t", _vec(op), field.coeffs[: k_end + 1], _vec(np.asarray(rho0).T))
    w = np.atleast_1d(np.asarray(w, float))
    sign = -1.0 if creation else 1.0
    if k_end == 0:
        return np.zeros(w.shape, dtype=complex)
    kern = np.exp(1j * sign * np.outer(w, times)) * traced[None, :]
    integral = simpson(kern, x=times, axis=1)
    return -1j * sign * np.sqrt(config.gamma) * np.exp(-1j * sign * w * t) * integral
