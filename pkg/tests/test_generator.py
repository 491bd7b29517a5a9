import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wgqed.core import SystemConfig, spin_operator
from wgqed.generator import bell_pair_index, build_generator, generator_in_bell, pairwise_rates

from conftest import KD_SET


def adjoint_by_hand(cfg, a):
    """Direct operator form of the adjoint generator, written without vectorisation."""
    n, om = cfg.n_qubits, cfg.omega
    rates = pairwise_rates(cfg)
    sp = [spin_operator("raise", q, n) for q in range(n)]
    sm = [spin_operator("lower", q, n) for q in range(n)]
    out = sum(0.5j * om * (spin_operator("z", q, n) @ a - a @ spin_operator("z", q, n)) for q in range(n))
    for i in range(n):
        for j in range(n):
            k = sp[j] @ sm[i]
            g, al = rates.gamma_nm[i, j], rates.alpha_nm[i, j]
            out = out + 0.5 * g * (2 * sp[j] @ a @ sm[i] - k @ a - a @ k) + 1j * al * (a @ k - k @ a)
    return out


def bell_table(kd, om=20.0, g=1.0):
    """Coefficient rows for the Bell-basis equations of motion, typed out entrywise."""
    c, s = np.cos(kd), np.sin(kd)
    lam = np.zeros((16, 16), dtype=complex)
    P = bell_pair_index

    def put(row, col, val):
        lam[P(*row), P(*col)] += val
        # the conjugate equation for P_ji
        if row[0] != row[1]:
            lam[P(row[1], row[0]), P(col[1], col[0])] += np.conj(val)

    put("GG", "SS", g * (1 + c))
    put("GG", "AA", g * (1 - c))
    put("EE", "EE", -2 * g)
    put("SS", "EE", g * (1 + c))
    put("SS", "SS", -g * (1 + c))
    put("AA", "EE", g * (1 - c))
    put("AA", "AA", -g * (1 - c))
    put("GE", "GE", -(2j * om + g))
    put("AS", "AS", -g * (1 + 1j * s))
    put("AE", "AE", -1j * (om + g * s / 2) - g / 2 * (3 - c))
    put("SE", "SE", -1j * (om - g * s / 2) - g / 2 * (3 + c))
    put("GA", "GA", -1j * (om - g * s / 2) - g / 2 * (1 - c))
    put("GA", "AE", -g * (1 - c))
    put("GS", "GS", -1j * (om + g * s / 2) - g / 2 * (1 + c))
    put("GS", "SE", g * (1 + c))
    return lam


def _basis_ops(d):
    for k in range(d * d):
        e = np.zeros(d * d, dtype=complex)
        e[k] = 1
        yield e.reshape(d, d)


@pytest.mark.parametrize("kd", KD_SET)
def test_bell_rows_match_table(kd):
    gen = build_generator(SystemConfig.pair(kd))
    assert np.max(np.abs(generator_in_bell(gen) - bell_table(kd))) < 1e-12


def test_bell_rows_other_units():
    gen = build_generator(SystemConfig.pair(0.9, omega=7.0, gamma=0.3))
    assert np.max(np.abs(generator_in_bell(gen) - bell_table(0.9, 7.0, 0.3))) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_superop_matches_operator_form(n, rng):
    cfg = SystemConfig(n, omega=5.0, gamma=0.8, phases=tuple(rng.uniform(-3, 3, n)))
    gen = build_generator(cfg)
    for a in _basis_ops(cfg.dim):
        assert np.allclose(gen.apply(a), adjoint_by_hand(cfg, a), atol=1e-13)


def test_rate_matrices():
    r = pairwise_rates(SystemConfig.pair(np.pi / 3, gamma=2.0))
    assert np.allclose(r.gamma_nm, [[2, 1], [1, 2]])
    assert np.allclose(r.alpha_nm, [[0, -np.sqrt(3) / 2], [-np.sqrt(3) / 2, 0]])


def test_runtime_small():
    t0 = time.perf_counter()
    for kd in KD_SET:
        generator_in_bell(build_generator(SystemConfig.pair(kd)))
    assert time.perf_counter() - t0 < 1.0


@settings(max_examples=25, deadline=None)
@given(st.floats(-7, 7), st.floats(0.1, 3), st.integers(0, 15))
def test_unital_and_hermitian(kd, gamma, k):
    gen = build_generator(SystemConfig.pair(kd, omega=10.0, gamma=gamma))
    # identity is stationary, and A^dag maps to L(A)^dag
    assert np.max(np.abs(gen.apply(np.eye(4)))) < 1e-12
    a = list(_basis_ops(4))[k]
    assert np.allclose(gen.apply(a.conj().T), gen.apply(a).conj().T, atol=1e-12)


def test_free_part_commutes():
    gen = build_generator(SystemConfig.pair(0.4))
    damped = gen.damped_superop
    f = gen.free_diag
    assert np.max(np.abs(f[:, None] * damped - damped * f[None, :])) < 1e-12
