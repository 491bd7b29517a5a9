import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wgqed.core import (SystemConfig, apply_spin_operator, bell_ket, bell_transform, build_basis,
                        density_from_tag, excitation_numbers, ket, spin_operator, state_from_tag,
                        validate_density)

from conftest import random_density

R = 1 / np.sqrt(2)


def test_product_order_two_qubits():
    assert build_basis(SystemConfig(2)).labels == ("gg", "ge", "eg", "ee")
    assert np.allclose(ket("ge"), [0, 1, 0, 0])
    assert np.allclose(ket("eg"), [0, 0, 1, 0])


def test_bell_vectors_by_hand():
    assert np.allclose(bell_ket("G"), [1, 0, 0, 0])
    assert np.allclose(bell_ket("E"), [0, 0, 0, 1])
    assert np.allclose(bell_ket("S"), [0, R, R, 0])
    assert np.allclose(bell_ket("A"), [0, R, -R, 0])


def test_lowering_on_first_qubit():
    # sigma_-^(1) |eg> = |gg>, and it annihilates |ge>
    assert np.allclose(apply_spin_operator("lower", 0, ket("eg")), ket("gg"))
    assert np.allclose(apply_spin_operator("lower", 0, ket("ge")), 0)
    assert np.allclose(apply_spin_operator("raise", 1, ket("eg")), ket("ee"))


def test_sigma_z_signs():
    z = spin_operator("z", 0, 1)
    assert ket("e") @ z @ ket("e") == 1
    assert ket("g") @ z @ ket("g") == -1


def test_spin_errors():
    with pytest.raises(ValueError):
        spin_operator("x", 0, 2)
    with pytest.raises(IndexError):
        spin_operator("raise", 2, 2)


def test_bell_transform_round_trip(rng):
    rho = random_density(rng, 4)
    back = bell_transform(bell_transform(rho), "bell->product")
    assert np.allclose(back, rho, atol=1e-14)
    s_bell = bell_transform(bell_ket("S"))
    assert np.allclose(s_bell, [0, 0, 1, 0])


def test_superposition_tags():
    s1s2 = density_from_tag("s1s2")
    assert np.allclose(s1s2, np.full((4, 4), 0.25))
    psi = state_from_tag("s1g2")
    assert np.allclose(psi, [R, 0, R, 0])
    psi = state_from_tag("s1e2")
    assert np.allclose(psi, [0, R, 0, R])
    assert np.allclose(state_from_tag("s", 1), [R, R])


def test_unknown_tag():
    with pytest.raises(ValueError):
        state_from_tag("X")


@pytest.mark.parametrize("bad,msg", [
    (np.diag([0.5, 0.4, 0, 0]), "trace"),
    (np.diag([1.2, -0.2, 0, 0]), "negative"),
    (np.array([[0.5, 0.1], [0.2, 0.5]]), "Hermitian"),
    (np.eye(3) / 3, "power of two"),
])
def test_validate_rejects(bad, msg):
    with pytest.raises(ValueError, match=msg):
        validate_density(bad)


def test_validated_copy_is_read_only():
    rho = validate_density(np.eye(4) / 4)
    with pytest.raises(ValueError):
        rho[0, 0] = 1


def test_config_validation():
    with pytest.raises(ValueError):
        SystemConfig(2, phases=(0.0,))
    with pytest.raises(ValueError):
        SystemConfig(1, gamma=-1.0)
    cfg = SystemConfig.pair(1.2, omega=10.0)
    assert cfg.k0d == pytest.approx(1.2)
    assert np.allclose(cfg.positions, [-0.06, 0.06])


def test_excitation_numbers():
    assert list(excitation_numbers(2)) == [0, 1, 1, 2]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3))
def test_raise_lower_algebra(n, q):
    q = q % n
    sp, sm = spin_operator("raise", q, n), spin_operator("lower", q, n)
    z = spin_operator("z", q, n)
    assert np.allclose(sp @ sm - sm @ sp, z)
    assert np.allclose(sm @ sm, 0)
