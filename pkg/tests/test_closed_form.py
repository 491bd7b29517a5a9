import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.linalg import expm

from wgqed import closed_form as cf
from wgqed.core import SystemConfig, bell_ket, density_from_tag, ket, state_from_tag
from wgqed.dynamics import evolve_field, photon_mean_numeric, spectrum_quadrature
from wgqed.generator import build_generator, generator_in_bell

from conftest import KD_SET

TIMES = np.linspace(0, 5, 26)
BELL = "GESA"


def bell_coeffs_by_expm(kd, t, om=20.0, g=1.0):
    lam = generator_in_bell(build_generator(SystemConfig.pair(kd, om, g)))
    return np.array([expm(lam * s) for s in t])


# ---------------------------------------------------------------- one qubit

def test_one_qubit_identities():
    t = np.linspace(0, 8, 81)
    g = 0.7
    assert np.allclose(cf.one_qubit_probability("e", "e", t, g), np.exp(-g * t), atol=1e-12)
    assert np.allclose(cf.one_qubit_probability("e", "g", t, g), 1 - np.exp(-g * t), atol=1e-12)
    # the excited share of |s> decays at the full rate
    assert np.allclose(cf.one_qubit_probability("s", "e", t, g), 0.5 * np.exp(-g * t), atol=1e-12)
    assert np.allclose(cf.one_qubit_probability("s", "g", t, g), 1 - 0.5 * np.exp(-g * t), atol=1e-12)
    total = cf.one_qubit_probability("s", "e", t, g) + cf.one_qubit_probability("s", "g", t, g)
    assert np.allclose(total, 1, atol=1e-12)


def test_one_qubit_against_expm():
    cfg = SystemConfig(1, omega=20.0, gamma=1.0)
    lam = build_generator(cfg).lam
    for t in (0.0, 0.3, 2.0, 5.0):
        assert np.allclose(cf.one_qubit_coefficients(t), expm(lam * t), atol=1e-12)


def test_one_qubit_spectrum_limit():
    w = np.linspace(10, 30, 201)
    late = cf.one_qubit_spectrum(w, 40.0)
    assert np.allclose(late, cf.one_qubit_spectral_density(w), rtol=1e-8)
    assert np.allclose(cf.one_qubit_spectrum(w, np.inf), cf.one_qubit_spectral_density(w))


def test_one_qubit_spectrum_area():
    assert cf.spectrum_normalization(cf.one_qubit_spectral_density, 20.0) == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------- two qubits

@pytest.mark.parametrize("kd", KD_SET + (0.7, 2.5, 3 * np.pi))
def test_coefficients_against_expm(kd):
    ref = bell_coeffs_by_expm(kd, TIMES)
    got = cf.two_qubit_coefficients(TIMES, kd)
    assert np.max(np.abs(got - ref)) < 1e-10


def test_coefficients_product_basis():
    t = np.array([0.0, 0.8, 3.0])
    lam = build_generator(SystemConfig.pair(1.1)).lam
    got = cf.two_qubit_coefficients(t, 1.1, basis="product")
    for k, s in enumerate(t):
        assert np.allclose(got[k], expm(lam * s), atol=1e-12)


@pytest.mark.parametrize("kd", KD_SET)
@pytest.mark.parametrize("init", ["G", "E", "S", "A", "eg", "ge"])
def test_probabilities_complete(kd, init):
    total = sum(cf.two_qubit_probability(init, f, TIMES, kd) for f in BELL)
    assert np.max(np.abs(total - 1)) < 1e-10


@pytest.mark.parametrize("init", ["E", "S", "A", "eg", "ge"])
@pytest.mark.parametrize("final", ["G", "E", "S", "A", "eg", "ge"])
def test_probability_matches_coefficients(init, final):
    kd = 0.9
    c = cf.two_qubit_coefficients(TIMES, kd, basis="product")
    vec = lambda tag: bell_ket(tag) if tag in BELL else ket(tag)  # noqa: E731
    ref = cf.probability_from_coefficients(c, vec(init), vec(final))
    assert np.allclose(cf.two_qubit_probability(init, final, TIMES, kd), ref, atol=1e-12)


def test_special_values():
    t = np.linspace(0, 6, 61)
    assert np.max(np.abs(cf.two_qubit_probability("E", "A", t, 2 * np.pi))) < 1e-12
    assert np.allclose(cf.two_qubit_probability("E", "S", t, 2 * np.pi), 2 * t * np.exp(-2 * t), atol=1e-12)
    assert np.allclose(cf.two_qubit_probability("S", "S", t, np.pi), 1, atol=1e-12)
    assert np.allclose(cf.two_qubit_probability("ge", "eg", t, np.pi / 2),
                       0.5 * np.exp(-t) * (1 - np.cos(t)), atol=1e-12)


def test_near_degenerate_continuity():
    # a hair away from 2*pi the generic branch must agree with the limit
    t = np.linspace(0, 5, 11)
    for f in BELL:
        a = cf.two_qubit_probability("E", f, t, 2 * np.pi + 3e-4)
        b = cf.two_qubit_probability("E", f, t, 2 * np.pi)
        assert np.max(np.abs(a - b)) < 1e-6


def test_degenerate_kind():
    assert cf.degenerate_kind(2 * np.pi) == "even"
    assert cf.degenerate_kind(3 * np.pi) == "odd"
    assert cf.degenerate_kind(3.1416) == "odd"
    assert cf.degenerate_kind(3.15) is None


# ---------------------------------------------------------------- spectra

def single_excitation_spectrum(tag, w, t, kd, om=20.0, g=1.0):
    """Forward spectrum from amplitude equations ``dc/dt = -i H_eff c``."""
    c, s = np.cos(kd), np.sin(kd)
    heff = om * np.eye(2) + 0.5 * g * s * np.array([[0, 1], [1, 0]]) - 0.5j * g * np.array([[1, c], [c, 1]])
    evals, vecs = np.linalg.eig(heff)
    c0 = {"S": [1, 1], "A": [-1, 1], "eg": [1, 0], "ge": [0, 1]}[tag]
    c0 = np.array(c0, complex) / np.linalg.norm(c0)
    coef = np.linalg.solve(vecs, c0)
    phase = np.exp(-1j * np.array([-kd / 2, kd / 2]))
    w = np.asarray(w)[:, None]
    z = 1j * (w - evals[None, :])
    if np.isfinite(t):
        integ = (np.exp(z * t) - 1) / z
    else:
        # a non-decaying (dark) mode is uncoupled and never radiates
        integ = np.where(np.abs(evals.imag) > 1e-12, -1 / z, 0)
    amp = (integ * coef[None, :]) @ (phase @ vecs)
    return g * np.abs(amp) ** 2


@pytest.mark.parametrize("kd", [0.3, np.pi / 2, 2.2, np.pi, 2 * np.pi])
@pytest.mark.parametrize("tag", ["S", "A", "eg", "ge"])
@pytest.mark.parametrize("t", [1.5, 12.0, np.inf])
def test_single_excitation_spectra(kd, tag, t):
    w = np.linspace(14, 26, 241)
    ref = single_excitation_spectrum(tag, w, t, kd)
    got = cf.two_qubit_spectrum(tag, w, t, kd)
    scale = max(1.0, ref.max())
    assert np.max(np.abs(got - ref)) < 1e-9 * scale


@pytest.mark.parametrize("kd", [np.pi / 2, 0.7, np.pi, 2 * np.pi])
@pytest.mark.parametrize("tag", ["E", "s1s2", "s1e2", "s1g2"])
def test_cascade_spectra_against_quadrature(kd, tag):
    w = np.linspace(16, 24, 17)
    got = cf.two_qubit_spectrum(tag, w, 4.0, kd)
    ref = spectrum_quadrature(SystemConfig.pair(kd), density_from_tag(tag), w, 4.0, 1e-3).values
    assert np.max(np.abs(got - ref)) < 1e-5 * max(1.0, ref.max())


def test_spectrum_E_odd_equals_even():
    w = np.linspace(15, 25, 101)
    assert np.allclose(cf.spectrum_E(w, np.inf, np.pi), cf.spectrum_E(w, np.inf, 2 * np.pi))


def test_spectrum_E_zero_detuning_is_smooth():
    w = 20 + np.array([-1e-3, -1e-5, 0.0, 1e-5, 1e-3])
    v = cf.spectrum_E(w, np.inf, 2 * np.pi)
    assert np.all(np.isfinite(v))
    assert np.ptp(v) < 1e-4 * v.max()


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 6.2), st.floats(5, 35), st.floats(0.1, 20))
def test_sum_rule_pointwise(kd, w, t):
    lhs = cf.spectrum_eg(w, t, kd) + cf.spectrum_ge(w, t, kd)
    rhs = cf.spectrum_S(w, t, kd) + cf.spectrum_A(w, t, kd)
    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


def forward_photons(tag, kd):
    return quad(lambda s: float(cf.two_qubit_emission_rate(tag, s, kd)), 0, np.inf, limit=400)[0]


@pytest.mark.parametrize("tag,kd", [("S", np.pi / 2), ("A", 0.8), ("eg", np.pi / 2), ("ge", np.pi / 2),
                                    ("E", 2 * np.pi), ("E", 1.0)])
def test_area_counts_forward_photons(tag, kd):
    area = cf.spectrum_normalization(lambda w: cf.two_qubit_spectrum(tag, w, np.inf, kd), 20.0)
    assert area == pytest.approx(2 * forward_photons(tag, kd), abs=1e-6)


def test_emission_rate_matches_population_loss():
    # W summed over both branches equals minus the rate of change of the excitation number
    t = np.linspace(0, 5, 2001)
    kd = 1.3
    exc = sum(k * cf.two_qubit_probability("E", f, t, kd) for k, f in ((2, "E"), (1, "S"), (1, "A")))
    mirrored = cf.two_qubit_emission_rate("E", t, -kd)
    both = cf.two_qubit_emission_rate("E", t, kd) + mirrored
    assert np.allclose(-np.gradient(exc, t, edge_order=2), both, atol=1e-4)


# ---------------------------------------------------------------- photon means

@pytest.mark.parametrize("tag", ["s1g2", "s1e2", "s1s2"])
@pytest.mark.parametrize("kd", [np.pi / 2, 0.7, 2 * np.pi])
def test_photon_means_against_numeric(tag, kd):
    cfg = SystemConfig.pair(kd)
    field = evolve_field(build_generator(cfg), 3.0, 1e-3)
    w = np.linspace(17, 23, 13)
    ref = photon_mean_numeric(field, density_from_tag(tag), w, 3.0, cfg)
    got = cf.two_qubit_photon_mean(tag, w, 3.0, kd)
    assert np.max(np.abs(got - ref)) < 1e-8


@pytest.mark.parametrize("tag", ["G", "E", "S", "A", "eg", "ge"])
def test_photon_means_vanish_for_basis_states(tag):
    assert np.all(cf.two_qubit_photon_mean(tag, np.linspace(15, 25, 5), 2.0, 1.0) == 0)


def test_one_qubit_photon_means():
    rho = density_from_tag("s", 1)
    a, adag = cf.one_qubit_photon_means(np.array([19.0, 20.0]), 2.0, rho)
    assert np.allclose(adag, np.conj(a))
    # resonant mode: -i sqrt(G) e^{-i W t} (e^{-t/2} - 1)/(-1/2) * 1/2
    expect = -1j * np.exp(-40j) * (np.exp(-1.0) - 1) / (-0.5) * 0.5
    assert a[1] == pytest.approx(expect)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        cf.two_qubit_spectrum("S", 20.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        cf.two_qubit_probability("E", "X", 1.0, 1.0)


def test_state_tag_consistency():
    # s1g2 spectrum is half the eg one since gg carries no excitation
    w = np.linspace(18, 22, 9)
    assert np.allclose(cf.two_qubit_spectrum("s1g2", w, 3.0, 0.4), 0.5 * cf.spectrum_eg(w, 3.0, 0.4))
    assert np.isclose(np.linalg.norm(state_from_tag("s1s2")), 1)
