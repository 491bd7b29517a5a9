"""Analytic results for one and two emitters.

Conventions shared by every function here:

* ``gamma`` is the single-emitter decay rate, ``omega`` the bare frequency.
* Two emitters sit at ``x = -d/2`` and ``x = +d/2``; ``k0d`` is their phase
  separation.  Spectra, emission rates and photon means refer to the
  forward-propagating (``+k``) photons, with the mode density prefactor
  ``v_g / 2L`` set to one so that ``|g_k|^2 = gamma``.
* ``t`` may be ``numpy.inf`` in spectra, giving the spectral density.
* Near ``cos(k0d) = +-1`` (within ``DEGENERATE_EPS``) the generic two-emitter
  expressions are 0/0 and the dedicated ``k0d = n*pi`` forms are used; the
  sine and cosine are snapped to their exact values there as well.

Coefficient arrays follow :mod:`wgqed.generator`: entry ``[ij, kl]`` is the
weight of ``|k><l|`` in ``<P_ij(t)>``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import bell_matrix
from .generator import operator_basis_change

DEGENERATE_EPS = 1e-8
_ORDER = "GESA"


# ---------------------------------------------------------------- helpers

def _e(z, t):
    """``exp(z t)``; for ``t = inf`` the decaying limit 0 is returned."""
    z = np.asarray(z, dtype=complex)
    if np.isinf(t):
        return np.zeros_like(z)
    return np.exp(z * t)


def _phi(z, t):
    """``(exp(z t) - 1) / z`` without cancellation; equals ``t`` at ``z = 0``."""
    z = np.asarray(z, dtype=complex)
    if np.isinf(t):
        with np.errstate(divide="ignore", invalid="ignore"):
            return -1.0 / z
    small = np.abs(z * t) < 1e-8
    safe = np.where(small, 1.0, z)
    return np.where(small, t * (1 + 0.5 * z * t), np.expm1(safe * t) / safe)


def _check_t(t):
    if np.any(np.asarray(t) < 0):
        raise ValueError("time must be non-negative")


def degenerate_kind(k0d: float) -> str | None:
    """``"even"`` near k0d = 2n*pi, ``"odd"`` near (2n+1)*pi, else None."""
    c = np.cos(k0d)
    if abs(1 - c) < DEGENERATE_EPS:
        return "even"
    if abs(1 + c) < DEGENERATE_EPS:
        return "odd"
    return None


@dataclass(frozen=True)
class TwoQubitParams:
    gamma: float
    omega: float
    k0d: float

    # inside the degenerate window the exact n*pi values are used
    @property
    def cos(self) -> float:
        kind = degenerate_kind(self.k0d)
        return 1.0 if kind == "even" else -1.0 if kind == "odd" else float(np.cos(self.k0d))

    @property
    def sin(self) -> float:
        return 0.0 if degenerate_kind(self.k0d) else float(np.sin(self.k0d))

    @property
    def gamma_plus(self) -> float:
        return self.gamma * (1 + self.cos)

    @property
    def gamma_minus(self) -> float:
        return self.gamma * (1 - self.cos)

    @property
    def omega_plus(self) -> float:
        return self.omega + 0.5 * self.gamma * self.sin

    @property
    def omega_minus(self) -> float:
        return self.omega - 0.5 * self.gamma * self.sin

    def delta_plus(self, w):
        return np.asarray(w, float) - self.omega_plus

    def delta_minus(self, w):
        return np.asarray(w, float) - self.omega_minus


def two_qubit_params(k0d: float, omega: float = 20.0, gamma: float = 1.0) -> TwoQubitParams:
    return TwoQubitParams(gamma, omega, k0d)


# ---------------------------------------------------------------- one qubit

def one_qubit_coefficients(t, omega: float = 20.0, gamma: float = 1.0) -> np.ndarray:
    """Coefficient array (shape ``t.shape + (4, 4)``) in the (g, e) basis."""
    _check_t(t)
    t = np.asarray(t, float)
    c = np.zeros(t.shape + (4, 4), dtype=complex)
    g, e = 0, 1
    idx = lambda a, b: 2 * a + b  # noqa: E731
    c[..., idx(e, e), idx(e, e)] = np.exp(-gamma * t)
    c[..., idx(g, g), idx(g, g)] = 1.0
    c[..., idx(g, g), idx(e, e)] = -np.expm1(-gamma * t)
    peg = np.exp((1j * omega - 0.5 * gamma) * t)
    c[..., idx(e, g), idx(e, g)] = peg
    c[..., idx(g, e), idx(g, e)] = peg.conj()
    return c


def one_qubit_probability(initial: str, final: str, t, gamma: float = 1.0, omega: float = 20.0):
    _check_t(t)
    t = np.asarray(t, float)
    decay = np.exp(-gamma * t)
    half = np.exp(-0.5 * gamma * t)
    table = {
        ("e", "e"): decay,
        ("e", "g"): -np.expm1(-gamma * t),
        ("g", "e"): np.zeros_like(t),
        ("g", "g"): np.ones_like(t),
        ("s", "s"): 0.5 * (1 + half * np.cos(omega * t)),
        ("s", "e"): 0.5 * decay,
        ("s", "g"): 1 - 0.5 * decay,
    }
    try:
        return table[(initial, final)]
    except KeyError:
        raise ValueError(f"no closed form for {initial}->{final}") from None


def one_qubit_spectrum(w, t, omega: float = 20.0, gamma: float = 1.0, excited_population: float = 1.0):
    """Finite-time photon number per mode; ``t = inf`` gives the Lorentzian density."""
    _check_t(t)
    z = 1j * (np.asarray(w, float) - omega) - 0.5 * gamma
    return gamma * np.abs(_phi(z, t)) ** 2 * excited_population


def one_qubit_spectral_density(w, omega: float = 20.0, gamma: float = 1.0, excited_population: float = 1.0):
    dw = np.asarray(w, float) - omega
    return gamma / (dw**2 + 0.25 * gamma**2) * excited_population


def one_qubit_emission_rate(t, gamma: float = 1.0, excited_population: float = 1.0):
    _check_t(t)
    return 0.5 * gamma * np.exp(-gamma * np.asarray(t, float)) * excited_population


def one_qubit_photon_means(w, t, rho0: np.ndarray, omega: float = 20.0, gamma: float = 1.0):
    """``(<a_k(t)>, <a_k^dag(t)>)`` for a single emitter, with ``g_k = sqrt(gamma)``."""
    _check_t(t)
    w = np.asarray(w, float)
    gk = np.sqrt(gamma)
    rho0 = np.asarray(rho0, dtype=complex)
    rho_eg, rho_ge = rho0[1, 0], rho0[0, 1]
    z = 1j * (w - omega) - 0.5 * gamma
    a = -1j * gk * np.exp(-1j * w * t) * _phi(z, t) * rho_eg
    adag = -1j * gk * np.exp(1j * w * t) * (-_phi(np.conj(z), t)) * rho_ge
    return a, adag


# ---------------------------------------------------------------- two qubits: populations

def _pair(a: str, b: str) -> int:
    return _ORDER.index(a) * 4 + _ORDER.index(b)


def _w_e_to_s(p: TwoQubitParams, t):
    kind = degenerate_kind(p.k0d)
    g = p.gamma
    if kind == "even":
        return 2 * g * t * np.exp(-2 * g * t)
    if kind == "odd":
        return np.zeros_like(t)
    gp, gm = p.gamma_plus, p.gamma_minus
    return -(gp / gm) * (np.exp(-2 * g * t) - np.exp(-gp * t))


def _w_e_to_a(p: TwoQubitParams, t):
    kind = degenerate_kind(p.k0d)
    g = p.gamma
    if kind == "odd":
        return 2 * g * t * np.exp(-2 * g * t)
    if kind == "even":
        return np.zeros_like(t)
    gp, gm = p.gamma_plus, p.gamma_minus
    return -(gm / gp) * (np.exp(-2 * g * t) - np.exp(-gm * t))


def _w_e_to_g(p: TwoQubitParams, t):
    g = p.gamma
    if degenerate_kind(p.k0d) is not None:
        return -np.expm1(-2 * g * t) - 2 * g * t * np.exp(-2 * g * t)
    gp, gm = p.gamma_plus, p.gamma_minus
    e2 = np.expm1(-2 * g * t)
    return (gp**2 / gm / g) * (0.5 * e2 - g * np.expm1(-gp * t) / gp) + (gm**2 / gp / g) * (
        0.5 * e2 - g * np.expm1(-gm * t) / gm
    )


def two_qubit_coefficients(t, k0d: float, omega: float = 20.0, gamma: float = 1.0,
                           basis: str = "bell") -> np.ndarray:
    """All sixteen ``<P_ij(t)>`` as a coefficient array of shape ``t.shape + (16, 16)``."""
    _check_t(t)
    t = np.asarray(t, float)
    p = two_qubit_params(k0d, omega, gamma)
    g, gp, gm, s = gamma, p.gamma_plus, p.gamma_minus, p.sin
    op_, om_ = p.omega_plus, p.omega_minus
    c = np.zeros(t.shape + (16, 16), dtype=complex)

    c[..., _pair("E", "E"), _pair("E", "E")] = np.exp(-2 * g * t)
    c[..., _pair("S", "S"), _pair("S", "S")] = np.exp(-gp * t)
    c[..., _pair("S", "S"), _pair("E", "E")] = _w_e_to_s(p, t)
    c[..., _pair("A", "A"), _pair("A", "A")] = np.exp(-gm * t)
    c[..., _pair("A", "A"), _pair("E", "E")] = _w_e_to_a(p, t)
    c[..., _pair("G", "G"), _pair("G", "G")] = 1.0
    c[..., _pair("G", "G"), _pair("S", "S")] = -np.expm1(-gp * t)
    c[..., _pair("G", "G"), _pair("A", "A")] = -np.expm1(-gm * t)
    c[..., _pair("G", "G"), _pair("E", "E")] = _w_e_to_g(p, t)

    c[..., _pair("G", "E"), _pair("G", "E")] = np.exp(-(2j * omega + g) * t)
    c[..., _pair("A", "S"), _pair("A", "S")] = np.exp(-g * (1 + 1j * s) * t)
    lam_ae = -(1j * op_ + 0.5 * gm + g)
    lam_se = -(1j * om_ + 0.5 * gp + g)
    lam_ga = -(1j * om_ + 0.5 * gm)
    lam_gs = -(1j * op_ + 0.5 * gp)
    c[..., _pair("A", "E"), _pair("A", "E")] = np.exp(lam_ae * t)
    c[..., _pair("S", "E"), _pair("S", "E")] = np.exp(lam_se * t)
    c[..., _pair("G", "A"), _pair("G", "A")] = np.exp(lam_ga * t)
    c[..., _pair("G", "A"), _pair("A", "E")] = gm / (g * (1 + 1j * s)) * (np.exp(lam_ae * t) - np.exp(lam_ga * t))
    c[..., _pair("G", "S"), _pair("G", "S")] = np.exp(lam_gs * t)
    c[..., _pair("G", "S"), _pair("S", "E")] = -gp / (g * (1 - 1j * s)) * (np.exp(lam_se * t) - np.exp(lam_gs * t))

    # remaining six follow from <P_ji> = <P_ij>^dagger
    for a, b in (("G", "E"), ("A", "S"), ("A", "E"), ("S", "E"), ("G", "A"), ("G", "S")):
        src = c[..., _pair(a, b), :].reshape(t.shape + (4, 4))
        c[..., _pair(b, a), :] = np.conj(np.swapaxes(src, -1, -2)).reshape(t.shape + (16,))

    if basis == "bell":
        return c
    if basis == "product":
        tr = operator_basis_change(bell_matrix())
        return np.einsum("ai,...ij,jb->...ab", tr.T, c, tr.conj())
    raise ValueError(f"unknown basis {basis!r}")


_BASIS_FINALS = ("G", "E", "S", "A", "eg", "ge")


def two_qubit_probability(initial: str, final: str, t, k0d: float, gamma: float = 1.0):
    """Transition probability between the tagged two-emitter states."""
    _check_t(t)
    t = np.asarray(t, float)
    if initial not in _BASIS_FINALS or final not in _BASIS_FINALS:
        raise ValueError(f"no closed form for {initial}->{final}")
    p = two_qubit_params(k0d, 1.0, gamma)
    g, gp, gm, s = gamma, p.gamma_plus, p.gamma_minus, p.sin
    zero = np.zeros_like(t)
    single = ("eg", "ge")
    if initial == "E":
        ws, wa = _w_e_to_s(p, t), _w_e_to_a(p, t)
        return {"E": np.exp(-2 * g * t), "G": _w_e_to_g(p, t), "S": ws, "A": wa,
                "eg": 0.5 * (ws + wa), "ge": 0.5 * (ws + wa)}[final]
    if initial == "G":
        return np.ones_like(t) if final == "G" else zero
    if initial in ("S", "A"):
        rate = gp if initial == "S" else gm
        keep = np.exp(-rate * t)
        table = {initial: keep, "G": -np.expm1(-rate * t), "E": zero,
                 ("A" if initial == "S" else "S"): zero, "eg": 0.5 * keep, "ge": 0.5 * keep}
        return table[final]
    # one excited emitter; identical for eg and ge
    ep, em = np.exp(-gp * t), np.exp(-gm * t)
    rabi = 2 * np.exp(-g * t) * np.cos(g * s * t)
    other = "eg" if initial == "ge" else "ge"
    table = {"S": 0.5 * ep, "A": 0.5 * em, "G": 1 - 0.5 * ep - 0.5 * em, "E": zero,
             other: 0.25 * (ep + em - rabi), initial: 0.25 * (ep + em + rabi)}
    return table[final]


def probability_from_coefficients(coeffs: np.ndarray, initial: np.ndarray, final: np.ndarray):
    """``<psi| <exp(iHt)|f><f|exp(-iHt)>_0 |psi>`` contracted from a coefficient array."""
    d = initial.shape[0]
    proj = np.outer(final, final.conj()).reshape(d * d)
    op = np.einsum("k,...kl->...l", proj, coeffs).reshape(coeffs.shape[:-2] + (d, d))
    return np.einsum("i,...ij,j->...", initial.conj(), op, initial).real


# ---------------------------------------------------------------- two qubits: spectra

def _spec_single(gx, z, t):
    if gx == 0:
        return np.zeros(np.shape(z))
    return gx * np.abs(_phi(z, t)) ** 2


def _zs(p: TwoQubitParams, w):
    zp = 1j * p.delta_plus(w) - 0.5 * p.gamma_plus
    zm = 1j * p.delta_minus(w) - 0.5 * p.gamma_minus
    return zp, zm


def spectrum_S(w, t, k0d, omega=20.0, gamma=1.0):
    p = two_qubit_params(k0d, omega, gamma)
    return _spec_single(p.gamma_plus, _zs(p, w)[0], t)


def spectrum_A(w, t, k0d, omega=20.0, gamma=1.0):
    p = two_qubit_params(k0d, omega, gamma)
    return _spec_single(p.gamma_minus, _zs(p, w)[1], t)


def _interference(w, t, p: TwoQubitParams):
    if degenerate_kind(p.k0d) is not None:
        return np.zeros(np.shape(w))
    zp, zm = _zs(p, w)
    return -p.gamma * p.sin * np.imag(np.conj(_phi(zp, t)) * _phi(zm, t))


def spectrum_eg(w, t, k0d, omega=20.0, gamma=1.0):
    p = two_qubit_params(k0d, omega, gamma)
    return 0.5 * spectrum_S(w, t, k0d, omega, gamma) + 0.5 * spectrum_A(w, t, k0d, omega, gamma) + _interference(w, t, p)


def spectrum_ge(w, t, k0d, omega=20.0, gamma=1.0):
    p = two_qubit_params(k0d, omega, gamma)
    return 0.5 * spectrum_S(w, t, k0d, omega, gamma) + 0.5 * spectrum_A(w, t, k0d, omega, gamma) - _interference(w, t, p)


def _spectrum_E_generic(w, t, p: TwoQubitParams):
    g, gp, gm, s = p.gamma, p.gamma_plus, p.gamma_minus, p.sin
    dp, dm = p.delta_plus(w), p.delta_minus(w)
    e1, e2 = np.exp(-1j * p.k0d), np.exp(1j * p.k0d)
    i = 1j
    zp, zm = i * dp - 0.5 * gp, i * dm - 0.5 * gm
    part_s = gp * np.abs(_phi(zp, t)) ** 2
    part_a = gm * np.abs(_phi(zm, t)) ** 2
    out = (gp / gm) * part_s + (gm / gp) * part_a
    e2g = _e(-2 * g, t) - 1
    out = out + (gp**2 + gm**2) / (2 * g) * e2g * (
        e1 / (gp * (1 + i * s) * (i * dm - gm / 2))
        - e1 / (gm * (1 - i * s) * (i * dp - gp / 2))
        + e2 / (gm * (1 + i * s) * (i * dp - gm / 2 - g))
        - e2 / (gp * (1 - i * s) * (i * dm - gp / 2 - g))
    )
    out = out + e2 / (gp * (1 - i * s)) * (_e(-(i * dm + gm / 2), t) - 1) * (
        gm**2 + gp**2 * _e(i * dm - gp / 2 - g, t)) / ((i * dm + gm / 2) * (i * dm - gp / 2 - g))
    out = out - e2 / (gm * (1 + i * s)) * (_e(-(i * dp + gp / 2), t) - 1) * (
        gp**2 + gm**2 * _e(i * dp - gm / 2 - g, t)) / ((i * dp + gp / 2) * (i * dp - gm / 2 - g))
    out = out + e1 / (gm * (1 - i * s)) * (_e(-(i * dp + gm / 2 + g), t) - 1) * (
        gm**2 + gp**2 * _e(i * dp - gp / 2, t)) / ((i * dp - gp / 2) * (i * dp + gm / 2 + g))
    out = out - e1 / (gp * (1 + i * s)) * (_e(-(i * dm + gp / 2 + g), t) - 1) * (
        gp**2 + gm**2 * _e(i * dm - gm / 2, t)) / ((i * dm - gm / 2) * (i * dm + gp / 2 + g))
    return out.real


def _spectrum_E_degenerate_raw(d, t, g):
    i = 1j
    x = i * d
    if np.isinf(t):
        return 4 * g / (d**2 + g**2) - 2 * g * (d**2 - 2 * g**2) / ((d**2 + g**2) * (d**2 + 4 * g**2))
    out = 4 * g * (_e(-(x + g), t) - 1) * (_e(x - g, t) - 1) / (d**2 + g**2)
    out = out + 2 * g * g**2 / (x * (x - g) ** 2 * (x - 2 * g))
    out = out + 2 * g * _e(-2 * g, t) / (x - g) ** 2
    out = out - 2 * g * (_e(-(x + 2 * g), t) - 1) / (x * (x + 2 * g))
    out = out - 2 * g * _e(x - 2 * g, t) / (x * (x - 2 * g))
    out = out - 2 * g * 2 * g / (x - g) ** 2 * (_e(-(x + g), t) - 1) / (x + g)
    out = out + 2 * g * 2 * g / (x - g) * (_e(x - g, t) - _e(-2 * g, t)) / (x + g) ** 2
    out = out + 2 * g * _e(-2 * g, t) / (d**2 + g**2) * 2 * g * t
    return out.real


def _spectrum_E_degenerate(w, t, omega, gamma):
    d = np.atleast_1d(np.asarray(w, float) - omega)
    h = 1e-4 * gamma
    near = np.abs(d) < h
    with np.errstate(divide="ignore", invalid="ignore"):
        out = _spectrum_E_degenerate_raw(d, t, gamma)
    if np.any(near):
        # removable singularity at zero detuning: symmetric average, O(h^2) error
        out[near] = 0.5 * (_spectrum_E_degenerate_raw(d[near] + h, t, gamma)
                           + _spectrum_E_degenerate_raw(d[near] - h, t, gamma))
    return out.reshape(np.shape(w))


def spectrum_E(w, t, k0d, omega=20.0, gamma=1.0):
    p = two_qubit_params(k0d, omega, gamma)
    if degenerate_kind(k0d) is not None:
        return _spectrum_E_degenerate(w, t, omega, gamma)
    return _spectrum_E_generic(w, t, p)


_SPECTRA = {"S": spectrum_S, "A": spectrum_A, "eg": spectrum_eg, "ge": spectrum_ge, "E": spectrum_E}


def two_qubit_spectrum(tag: str, w, t, k0d: float, omega: float = 20.0, gamma: float = 1.0):
    """Forward-direction photon number per mode at time ``t`` (``inf`` for the density)."""
    _check_t(t)
    args = (w, t, k0d, omega, gamma)
    if tag in _SPECTRA:
        return _SPECTRA[tag](*args)
    if tag == "G":
        return np.zeros(np.shape(w))
    if tag == "s1g2":
        return 0.5 * spectrum_eg(*args)
    if tag == "s1e2":
        return 0.5 * spectrum_E(*args) + 0.5 * spectrum_ge(*args)
    if tag == "s1s2":
        return 0.25 * spectrum_E(*args) + 0.5 * spectrum_S(*args)
    raise ValueError(f"no closed-form spectrum for tag {tag!r}")


def spectrum_normalization(func, center: float, width: float = 1.0, window: float | None = None):
    """``(1/2pi) * integral of func`` over the real line, or over ``center +- window``."""
    lo, hi = (-np.inf, np.inf) if window is None else (center - window, center + window)
    pts = [center - width, center, center + width]

    def f(x):
        return float(np.asarray(func(np.array([x])))[0])

    if window is None:
        inner = quad(f, center - 50 * width, center + 50 * width, points=pts, limit=500, epsabs=1e-12)[0]
        left = quad(f, -np.inf, center - 50 * width, limit=200, epsabs=1e-13)[0]
        right = quad(f, center + 50 * width, np.inf, limit=200, epsabs=1e-13)[0]
        return (inner + left + right) / (2 * np.pi)
    return quad(f, lo, hi, points=pts, limit=500, epsabs=1e-12)[0] / (2 * np.pi)


# ---------------------------------------------------------------- emission rates

def two_qubit_emission_rate(tag: str, t, k0d: float, gamma: float = 1.0):
    _check_t(t)
    t = np.asarray(t, float)
    p = two_qubit_params(k0d, 1.0, gamma)
    g, gp, gm, s, c = gamma, p.gamma_plus, p.gamma_minus, p.sin, p.cos
    w_s = 0.5 * gp * np.exp(-gp * t)
    w_a = 0.5 * gm * np.exp(-gm * t)
    beat = 0.5 * g * s * np.exp(-g * t) * np.sin(g * s * t)
    w_eg = 0.5 * (w_s + w_a) - beat
    w_ge = 0.5 * (w_s + w_a) + beat
    if degenerate_kind(k0d) is not None:
        w_e = (1 + 2 * g * t) * g * np.exp(-2 * g * t)
    else:
        w_e = (0.5 * gp**2 / gm * np.exp(-gp * t) + 0.5 * gm**2 / gp * np.exp(-gm * t)
               - 4 * g * c**2 / (1 - c**2) * np.exp(-2 * g * t))
    table = {"S": w_s, "A": w_a, "eg": w_eg, "ge": w_ge, "E": w_e, "G": np.zeros_like(t),
             "s1g2": 0.5 * w_eg, "s1e2": 0.5 * w_e + 0.5 * w_ge, "s1s2": 0.25 * w_e + 0.5 * w_s}
    try:
        return table[tag]
    except KeyError:
        raise ValueError(f"no closed-form emission rate for tag {tag!r}") from None


# ---------------------------------------------------------------- photon means

def two_qubit_photon_mean(tag: str, w, t, k0d: float, omega: float = 20.0, gamma: float = 1.0):
    """Forward-mode ``<a_k(t)>`` with ``g_k = sqrt(gamma)``."""
    _check_t(t)
    w = np.asarray(w, float)
    if tag in ("G", "E", "S", "A", "eg", "ge"):
        return np.zeros(w.shape, dtype=complex)
    p = two_qubit_params(k0d, omega, gamma)
    g, gp, gm, s, c = gamma, p.gamma_plus, p.gamma_minus, p.sin, p.cos
    dp, dm = p.delta_plus(w), p.delta_minus(w)
    i = 1j
    pref = 0.5 * np.sqrt(g) * np.exp(-i * w * t)
    ch, sh = np.cos(0.5 * k0d), np.sin(0.5 * k0d)
    bright = _phi(i * dp - gp / 2, t)
    if tag == "s1g2":
        return -i * pref * (ch * bright + i * sh * _phi(i * dm - gm / 2, t))
    cascade = -i * pref * ch / (1 - i * s) * (
        (1 + c) * bright - np.exp(i * k0d) * _phi(i * dm - gp / 2 - g, t))
    if tag == "s1e2":
        return cascade + pref * sh / (1 + i * s) * (
            (1 - c) * _phi(i * dm - gm / 2, t) + np.exp(i * k0d) * _phi(i * dp - gm / 2 - g, t))
    if tag == "s1s2":
        return cascade - i * pref * ch * bright
    raise ValueError(f"no closed-form photon mean for tag {tag!r}")


def relevant_rates(tag: str, k0d: float, gamma: float = 1.0) -> list[float]:
    """Decay rates that set how long a tagged state takes to empty."""
    p = two_qubit_params(k0d, 1.0, gamma)
    rates = {"S": [p.gamma_plus], "A": [p.gamma_minus], "E": [2 * gamma, p.gamma_plus, p.gamma_minus]}
    out = rates.get(tag, [p.gamma_plus, p.gamma_minus, 2 * gamma])
    if tag == "E" and degenerate_kind(k0d) is not None:
        out = [2 * gamma]
    return [r for r in out if r > 1e-6 * gamma] or [gamma]


def long_time(tag: str, k0d: float, gamma: float = 1.0) -> float:
    """Horizon ``12 / slowest rate`` that stands in for infinite time."""
    return 12.0 / min(relevant_rates(tag, k0d, gamma))
