"""Bases, spin operators and states for N two-level emitters.

Product-basis convention
------------------------
Each qubit uses the ordered pair ``(g, e)`` so ``|g> = [1, 0]`` and
``|e> = [0, 1]``.  Multi-qubit states are Kronecker products with qubit 1
as the most significant factor, giving for two qubits the order
``gg, ge, eg, ee``.  The label ``ge`` always means qubit 1 in ``g`` and
qubit 2 in ``e``.

For two qubits the alternate basis is ordered ``(G, E, S, A)`` with::

    |G> = |gg>,  |E> = |ee>,
    |S> = (|ge> + |eg>)/sqrt(2),  |A> = (|ge> - |eg>)/sqrt(2).

Qubit indices in the Python API are zero based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

SQRT2 = np.sqrt(2.0)

SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.T.copy()
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)

BELL_LABELS = ("G", "E", "S", "A")

_TOL = 1e-12


@dataclass(frozen=True)
class SystemConfig:
    """Emitter array parameters.

    ``phases`` holds the dimensionless positions ``k0 * x_n``.  Frequencies
    and rates are in units where ``gamma`` sets the time scale.
    """

    n_qubits: int
    omega: float = 20.0
    gamma: float = 1.0
    phases: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise ValueError("n_qubits must be a positive integer")
        if not np.isfinite(self.omega) or self.omega <= 0:
            raise ValueError("omega must be positive")
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise ValueError("gamma must be positive")
        phases = tuple(float(p) for p in self.phases) if self.phases else (0.0,) * self.n_qubits
        if len(phases) != self.n_qubits:
            raise ValueError(f"expected {self.n_qubits} phases, got {len(phases)}")
        if not all(np.isfinite(phases)):
            raise ValueError("phases must be finite")
        object.__setattr__(self, "phases", phases)

    @classmethod
    def pair(cls, k0d: float, omega: float = 20.0, gamma: float = 1.0) -> "SystemConfig":
        """Two qubits at ``x = -d/2`` and ``x = +d/2``."""
        return cls(2, omega, gamma, (-0.5 * k0d, 0.5 * k0d))

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def k0d(self) -> float:
        if self.n_qubits != 2:
            raise ValueError("k0d is defined for two qubits only")
        return self.phases[1] - self.phases[0]

    @property
    def positions(self) -> np.ndarray:
        """Positions ``x_n`` with group velocity 1 and ``k0 = omega``."""
        return np.asarray(self.phases) / self.omega


@dataclass(frozen=True)
class BasisSet:
    dimension: int
    labels: tuple[str, ...]
    bell_labels: tuple[str, ...] | None = None
    bell_matrix: np.ndarray | None = None


def product_labels(n: int) -> tuple[str, ...]:
    return tuple("".join(p) for p in product("ge", repeat=n))


def bell_matrix() -> np.ndarray:
    """Columns are |G>, |E>, |S>, |A> written in the product basis."""
    u = np.zeros((4, 4), dtype=complex)
    u[0, 0] = 1.0
    u[3, 1] = 1.0
    u[1, 2] = u[2, 2] = 1 / SQRT2
    u[1, 3], u[2, 3] = 1 / SQRT2, -1 / SQRT2
    return u


def build_basis(config: SystemConfig) -> BasisSet:
    labels = product_labels(config.n_qubits)
    if config.n_qubits == 2:
        return BasisSet(4, labels, BELL_LABELS, bell_matrix())
    return BasisSet(config.dim, labels)


def embed(single: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Single-qubit operator acting on ``qubit`` inside an ``n``-qubit space."""
    if not 0 <= qubit < n:
        raise IndexError(f"qubit index {qubit} out of range for {n} qubits")
    out = np.ones((1, 1), dtype=complex)
    eye = np.eye(2, dtype=complex)
    for k in range(n):
        out = np.kron(out, single if k == qubit else eye)
    return out


_SINGLE = {"raise": SIGMA_PLUS, "lower": SIGMA_MINUS, "z": SIGMA_Z}


def spin_operator(which: str, qubit: int, n: int) -> np.ndarray:
    try:
        single = _SINGLE[which]
    except KeyError:
        raise ValueError(f"unknown spin operator {which!r}") from None
    return embed(single, qubit, n)


def apply_spin_operator(which: str, qubit_index: int, state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    n = _qubits_for_dim(state.shape[0])
    return spin_operator(which, qubit_index, n) @ state


def lowering_operators(n: int) -> list[np.ndarray]:
    return [spin_operator("lower", q, n) for q in range(n)]


def _qubits_for_dim(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if n < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def bell_transform(obj: np.ndarray, direction: str = "product->bell") -> np.ndarray:
    """Change a two-qubit vector or matrix between product and Bell bases."""
    obj = np.asarray(obj, dtype=complex)
    if obj.shape[0] != 4:
        raise ValueError("Bell basis requires exactly two qubits")
    u = bell_matrix()
    if direction in ("product->bell", "to_bell"):
        left, right = u.conj().T, u
    elif direction in ("bell->product", "to_product"):
        left, right = u, u.conj().T
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if obj.ndim == 1:
        return left @ obj
    if obj.shape == (4, 4):
        return left @ obj @ right
    raise ValueError("expected a length-4 vector or a 4x4 matrix")


def ket(label: str) -> np.ndarray:
    """Product state from a label such as ``"eg"``; qubit 1 first."""
    vec = np.ones(1, dtype=complex)
    for ch in label:
        if ch not in "ge":
            raise ValueError(f"bad product label {label!r}")
        vec = np.kron(vec, np.array([1.0, 0.0]) if ch == "g" else np.array([0.0, 1.0]))
    return vec


def bell_ket(label: str) -> np.ndarray:
    try:
        return bell_matrix()[:, BELL_LABELS.index(label)].copy()
    except ValueError:
        raise ValueError(f"unknown Bell label {label!r}") from None


def density_from_pure(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    norm = np.linalg.norm(state)
    if norm == 0:
        raise ValueError("zero vector has no density matrix")
    state = state / norm
    return np.outer(state, state.conj())


def _half(a: str, b: str) -> np.ndarray:
    return (ket(a) + ket(b)) / SQRT2


# Named initial states.  Single-qubit superposition s = (e + g)/sqrt(2).
_PURE_TAGS_2 = {
    "G": lambda: bell_ket("G"),
    "E": lambda: bell_ket("E"),
    "S": lambda: bell_ket("S"),
    "A": lambda: bell_ket("A"),
    "eg": lambda: ket("eg"),
    "ge": lambda: ket("ge"),
    "s1g2": lambda: _half("eg", "gg"),
    "s1e2": lambda: _half("ee", "ge"),
    "s1s2": lambda: 0.5 * (ket("ee") + ket("eg") + ket("ge") + ket("gg")),
}
_PURE_TAGS_1 = {"e": lambda: ket("e"), "g": lambda: ket("g"), "s": lambda: _half("e", "g")}

TWO_QUBIT_TAGS = tuple(_PURE_TAGS_2)
ONE_QUBIT_TAGS = tuple(_PURE_TAGS_1)


def state_from_tag(tag: str, n_qubits: int = 2) -> np.ndarray:
    table = _PURE_TAGS_2 if n_qubits == 2 else _PURE_TAGS_1 if n_qubits == 1 else {}
    if tag not in table:
        raise ValueError(f"unknown initial-state tag {tag!r} for {n_qubits} qubit(s)")
    return table[tag]()


def density_from_tag(tag: str, n_qubits: int = 2) -> np.ndarray:
    return density_from_pure(state_from_tag(tag, n_qubits))


def validate_density(rho: np.ndarray, herm_tol: float = _TOL, trace_tol: float = _TOL,
                     eig_tol: float = 1e-10) -> np.ndarray:
    """Return a read-only copy of ``rho`` after physical checks."""
    rho = np.array(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    _qubits_for_dim(rho.shape[0])
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace is {tr:.12g}, expected 1")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -eig_tol:
        raise ValueError("density matrix has a negative eigenvalue")
    rho.setflags(write=False)
    return rho


def excitation_numbers(n: int) -> np.ndarray:
    """Number of excited qubits for every product-basis index."""
    return np.array([lab.count("e") for lab in product_labels(n)])
