"""Pairwise rates, collective shifts and the adjoint equation-of-motion generator.

The vacuum-averaged transition operators obey a linear system

    d<P_ij>/dt = sum_kl lam[ij, kl] <P_kl>

where ``<P_kl>`` are expanded over the dyads |k><l| of the product basis.
Pairs ``(i, j)`` are flattened row-major, ``index = i * D + j``.

Internally the same map is handled as the superoperator ``M = lam.T`` acting
on row-major vectorised operators, for which ``vec(X A Y) = kron(X, Y.T) vec(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SystemConfig, bell_matrix, spin_operator


@dataclass(frozen=True)
class RateMatrices:
    gamma_nm: np.ndarray
    alpha_nm: np.ndarray


def pairwise_rates(config: SystemConfig) -> RateMatrices:
    ph = np.asarray(config.phases)
    dist = np.abs(ph[:, None] - ph[None, :])
    gam = config.gamma * np.cos(dist)
    alpha = -0.5 * config.gamma * np.sin(dist)
    np.fill_diagonal(gam, config.gamma)
    np.fill_diagonal(alpha, 0.0)
    return RateMatrices(gam, alpha)


@dataclass(frozen=True)
class GeneratorMatrix:
    """Coefficients ``lam[ij, kl]`` plus the split into free and decay parts."""

    lam: np.ndarray
    free_diag: np.ndarray
    dim: int
    omega: float
    gamma: float

    @property
    def superop(self) -> np.ndarray:
        """Action on row-major vectorised operators, ``vec(L(A)) = superop @ vec(A)``."""
        return self.lam.T

    @property
    def damped_superop(self) -> np.ndarray:
        """``superop`` minus the pure rotation at the emitter frequency."""
        return self.lam.T - np.diag(self.free_diag)

    def apply(self, op: np.ndarray) -> np.ndarray:
        d = self.dim
        return (self.superop @ np.asarray(op, dtype=complex).reshape(d * d)).reshape(d, d)


def _superop(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return np.kron(left, right.T)


def build_generator(config: SystemConfig, rates: RateMatrices | None = None) -> GeneratorMatrix:
    n, d = config.n_qubits, config.dim
    rates = rates if rates is not None else pairwise_rates(config)
    g, a = np.asarray(rates.gamma_nm, float), np.asarray(rates.alpha_nm, float)
    if g.shape != (n, n) or a.shape != (n, n):
        raise ValueError(f"rate matrices must be {n}x{n}")
    eye = np.eye(d, dtype=complex)
    sp = [spin_operator("raise", q, n) for q in range(n)]
    sm = [spin_operator("lower", q, n) for q in range(n)]
    zsum = sum(spin_operator("z", q, n) for q in range(n))

    free = 0.5j * config.omega * (_superop(zsum, eye) - _superop(eye, zsum))
    decay = np.zeros((d * d, d * d), dtype=complex)
    for i in range(n):
        for j in range(n):
            k = sp[j] @ sm[i]
            if g[i, j]:
                decay += 0.5 * g[i, j] * (2 * _superop(sp[j], sm[i]) - _superop(k, eye) - _superop(eye, k))
            if a[i, j]:
                decay += 1j * a[i, j] * (_superop(eye, k) - _superop(k, eye))
    superop = free + decay
    return GeneratorMatrix(superop.T.copy(), np.diag(free).copy(), d, config.omega, config.gamma)


def operator_basis_change(u: np.ndarray) -> np.ndarray:
    """Matrix ``T`` with ``vec(u^dag A u) = T vec(A)``."""
    return np.kron(u.conj().T, u.T)


def generator_in_bell(gen: GeneratorMatrix) -> np.ndarray:
    """Coefficients ``lam[ij, kl]`` with i, j, k, l running over (G, E, S, A)."""
    if gen.dim != 4:
        raise ValueError("Bell-basis generator needs two qubits")
    t = operator_basis_change(bell_matrix())
    m_bell = t @ gen.superop @ t.conj().T
    return m_bell.T


def bell_pair_index(a: str, b: str) -> int:
    order = "GESA"
    return order.index(a) * 4 + order.index(b)
