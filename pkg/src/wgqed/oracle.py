"""Brute-force single-excitation oracle with a discretised waveguide.

Emitters couple to left- and right-moving modes on a flat band of half
width ``band_halfwidth`` centred on the emitter frequency.  With mode spacing
``dw`` per branch the coupling ``g = sqrt(gamma * dw / (4 pi))`` makes the
golden-rule rate summed over both branches equal to ``gamma``.  No Markov
reduction is made: retardation between emitters is kept through the mode
phases ``exp(-i b k x_n)``.

Amplitudes are integrated in the interaction picture (each mode rotating at
its own frequency) with classical RK4, so the step is set by the band width.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .core import SystemConfig, excitation_numbers

BRANCHES = np.array([1, -1])


@dataclass(frozen=True)
class BathConfig:
    band_halfwidth: float = 400.0
    mode_spacing: float = 0.05
    coupling_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.band_halfwidth <= 0 or self.mode_spacing <= 0:
            raise ValueError("band width and mode spacing must be positive")
        if self.mode_spacing > self.band_halfwidth:
            raise ValueError("mode spacing exceeds the band")

    @property
    def recurrence_time(self) -> float:
        return 2 * np.pi / self.mode_spacing

    def detunings(self) -> np.ndarray:
        m = int(round(2 * self.band_halfwidth / self.mode_spacing)) + 1
        return (np.arange(m) - (m - 1) / 2) * self.mode_spacing


@dataclass(frozen=True)
class BathSeries:
    """Stored qubit amplitudes plus the final mode amplitudes (branch, mode)."""

    times: np.ndarray
    qubit_amplitudes: np.ndarray
    mode_amplitudes: np.ndarray
    detunings: np.ndarray
    norms: np.ndarray
    omega: float
    gamma: float
    mode_spacing: float
    positions: np.ndarray
    band_halfwidth: float

    def project(self, vector) -> np.ndarray:
        """Amplitude on a single-excitation state given by per-qubit weights."""
        v = np.asarray(vector, dtype=complex)
        return self.qubit_amplitudes @ v.conj()


def single_excitation_amplitudes(state: np.ndarray, n_qubits: int) -> np.ndarray:
    """Per-qubit amplitudes of a product-basis state with exactly one excitation."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (2**n_qubits,):
        raise ValueError(f"state must have length {2**n_qubits}")
    exc = excitation_numbers(n_qubits)
    if np.max(np.abs(state[exc != 1]), initial=0.0) > 1e-12:
        raise ValueError("oracle accepts only single-excitation states")
    amps = np.empty(n_qubits, dtype=complex)
    for q in range(n_qubits):
        # qubit q excited alone: bit (n-1-q) set in the g=0/e=1 index
        amps[q] = state[1 << (n_qubits - 1 - q)]
    nrm = np.linalg.norm(amps)
    if abs(nrm - 1) > 1e-12:
        raise ValueError("initial state must be normalised")
    return amps


def single_excitation_weights(state: np.ndarray, n_qubits: int) -> np.ndarray | None:
    """Per-qubit weights of a normalised single-excitation state, else ``None``."""
    try:
        return single_excitation_amplitudes(state, n_qubits)
    except ValueError:
        return None


def evolve_bath(config: SystemConfig, bath: BathConfig, initial: np.ndarray, t_max: float,
                dt: float | None = None, store_every: int = 10) -> BathSeries:
    beta = single_excitation_amplitudes(initial, config.n_qubits)
    if dt is None:
        dt = 0.1 / bath.band_halfwidth
    if dt > 0.1 / bath.band_halfwidth * (1 + 1e-12):
        raise ValueError("dt must resolve the band edge (dt <= 0.1 / band_halfwidth)")
    if bath.recurrence_time <= t_max:
        raise ValueError("simulation horizon reaches the mode recurrence time")
    n_steps = int(round(t_max / dt))
    x = config.positions
    delta = bath.detunings()
    k = config.omega + delta
    g = bath.coupling_scale * np.sqrt(config.gamma * bath.mode_spacing / (4 * np.pi))
    # u[n, b, j] couples qubit n to mode (b, j)
    u = g * np.exp(-1j * BRANCHES[None, :, None] * k[None, None, :] * x[:, None, None])
    uc = u.conj()
    modes = np.zeros((2, delta.size), dtype=complex)
    half = np.exp(0.5j * delta * dt)

    def rhs(b, m, p):
        db = -1j * np.einsum("nbj,bj->n", uc, m * p.conj()[None, :])
        dm = -1j * np.einsum("nbj,n->bj", u, b) * p[None, :]
        return db, dm

    times, amps, norms = [0.0], [beta.copy()], [1.0]
    p0 = np.ones(delta.size, dtype=complex)
    for s in range(n_steps):
        p1 = p0 * half
        p2 = p1 * half
        k1 = rhs(beta, modes, p0)
        k2 = rhs(beta + 0.5 * dt * k1[0], modes + 0.5 * dt * k1[1], p1)
        k3 = rhs(beta + 0.5 * dt * k2[0], modes + 0.5 * dt * k2[1], p1)
        k4 = rhs(beta + dt * k3[0], modes + dt * k3[1], p2)
        beta = beta + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        modes = modes + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        # exact phase refresh keeps the multiplicative update from drifting
        p0 = np.exp(1j * delta * (s + 1) * dt) if (s + 1) % 1000 == 0 else p2
        if (s + 1) % store_every == 0 or s + 1 == n_steps:
            times.append((s + 1) * dt)
            amps.append(beta.copy())
            norms.append(float(np.sum(np.abs(beta) ** 2) + np.sum(np.abs(modes) ** 2)))
    if not (np.all(np.isfinite(beta)) and np.all(np.isfinite(modes))):
        raise FloatingPointError("non-finite oracle amplitudes")
    return BathSeries(np.array(times), np.array(amps), modes, delta, np.array(norms), config.omega,
                      config.gamma, bath.mode_spacing, x, bath.band_halfwidth)


def extract_rate_and_shift(series: BathSeries, amplitude: np.ndarray | None = None,
                           t_min: float | None = None, t_max: float | None = None) -> tuple[float, float]:
    """Fit ``|a|^2 ~ exp(-rate t)`` and ``arg a ~ -shift t`` in the rotating frame.

    The window starts after the retardation transient ``2 d`` plus a few
    inverse band widths.
    """
    a = series.qubit_amplitudes[:, 0] if amplitude is None else np.asarray(amplitude)
    t = series.times
    if t_min is None:
        span = np.ptp(series.positions) if series.positions.size > 1 else 0.0
        t_min = 2 * span + 10.0 / series.band_halfwidth
    pop = np.abs(a) ** 2
    sel = (t >= t_min) & (pop > 1e-10 * pop[0])
    if t_max is not None:
        sel &= t <= t_max
    if sel.sum() < 3:
        raise ValueError("not enough points in the fit window")
    if pop[sel][-1] > 0.1 * pop[sel][0]:
        raise ValueError("series decays by less than one decade in the fit window")
    rate = -np.polyfit(t[sel], np.log(pop[sel]), 1)[0]
    shift = -np.polyfit(t[sel], np.unwrap(np.angle(a[sel])), 1)[0]
    return float(rate), float(shift)


def oracle_spectrum(series: BathSeries, branch: int | None = None, max_residual: float = 1e-3):
    """Spectral density from final mode occupations.

    ``branch=None`` sums both directions, ``2 pi sum_b |c_b|^2 / dw``.  A single
    branch ``b`` is reported as ``4 pi |c_b|^2 / dw``, matching the
    one-direction convention of the closed forms.
    """
    left = float(np.sum(np.abs(series.qubit_amplitudes[-1]) ** 2))
    if left > max_residual:
        raise ValueError(f"excitation {left:.3g} remains; extend the horizon")
    occ = np.abs(series.mode_amplitudes) ** 2
    omegas = series.omega + series.detunings
    if branch is None:
        values = 2 * np.pi * occ.sum(axis=0) / series.mode_spacing
    else:
        values = 4 * np.pi * occ[0 if branch == 1 else 1] / series.mode_spacing
    return omegas, values


def photon_number(series: BathSeries) -> float:
    return float(np.sum(np.abs(series.mode_amplitudes) ** 2))


def spectral_peaks(omegas: np.ndarray, values: np.ndarray, rel_height: float = 0.2) -> np.ndarray:
    """Peak positions refined by a three-point parabola."""
    idx, _ = find_peaks(values, height=rel_height * np.max(values))
    out = []
    for i in idx:
        if 0 < i < len(values) - 1:
            y0, y1, y2 = values[i - 1], values[i], values[i + 1]
            den = y0 - 2 * y1 + y2
            off = 0.5 * (y0 - y2) / den if den != 0 else 0.0
            out.append(omegas[i] + off * (omegas[1] - omegas[0]))
        else:
            out.append(omegas[i])
    return np.array(out)
