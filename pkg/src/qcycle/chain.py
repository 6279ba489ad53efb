"""Spin-conserving Ising chain: Hamiltonian parts, magnetization, Gibbs states.

Conventions, fixed so test vectors are bit-exact:
  * spin operators are S = sigma / 2, so the explicit factor 4 on each bond
    coupling turns bond terms into plain Pauli products;
  * site 1 occupies the leftmost Kronecker slot (most significant bit);
  * |0> is the S^Z = +1/2 state.

Every term of the chain Hamiltonian commutes with the total magnetization,
which is the symmetry the engine's efficiency identity rests on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import kron

PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
IDENTITY_2 = np.eye(2, dtype=complex)


def site_operator(axis: str, site: int, n: int) -> np.ndarray:
    """Spin-1/2 operator sigma^axis / 2 acting on one site of an n-qubit chain.

    ``site`` is 1-based: site 1 is the leftmost Kronecker factor.
    """
    if axis not in PAULI:
        raise ValueError(f"axis must be one of 'X', 'Y', 'Z', got {axis!r}")
    if not (1 <= site <= n):
        raise ValueError(f"site {site} out of range 1..{n}")
    op = np.array([[1.0 + 0j]])
    for k in range(1, n + 1):
        op = kron(op, PAULI[axis] / 2.0 if k == site else IDENTITY_2)
    return op


def total_magnetization(n: int) -> np.ndarray:
    """Sum of the single-site S^Z operators; diagonal in the computational basis."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return sum(site_operator("Z", i, n) for i in range(1, n + 1))


@dataclass
class ChainSpec:
    """Parameters of the n-qubit chain.

    ``E`` holds the n local fields; ``J``, ``K``, ``F`` hold the n-1 bond
    couplings (in-plane exchange, antisymmetric exchange, and longitudinal
    coupling respectively). Units are energy with hbar = k_B = 1.
    """

    n: int
    E: tuple = field(default=())
    J: tuple = field(default=())
    K: tuple = field(default=())
    F: tuple = field(default=())

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"n must be an integer >= 3, got {self.n}")
        self.n = int(self.n)
        self.E = tuple(float(x) for x in self.E)
        self.J = tuple(float(x) for x in self.J)
        self.K = tuple(float(x) for x in self.K)
        self.F = tuple(float(x) for x in self.F)
        if len(self.E) != self.n:
            raise ValueError(f"E must have length n={self.n}, got {len(self.E)}")
        for name, vals in (("J", self.J), ("K", self.K), ("F", self.F)):
            if len(vals) != self.n - 1:
                raise ValueError(f"{name} must have length n-1={self.n - 1}, got {len(vals)}")
        if self.E[0] == 0.0:
            raise ValueError("E[0] must be nonzero (end qubit A needs a finite gap)")
        if self.E[-1] == 0.0:
            raise ValueError("E[-1] must be nonzero (end qubit B needs a finite gap)")


@dataclass
class HamiltonianParts:
    """Five-part decomposition of the chain Hamiltonian.

    ``h_s = h_a + h_b + h_c + h_ac + h_cb`` holds exactly by construction:
    ``h_a``/``h_b`` are the end-qubit field terms, ``h_ac``/``h_cb`` the
    first/last bond terms, ``h_c`` everything in between. ``h_a_local`` and
    ``h_b_local`` are the 2x2 single-site versions of the end terms, used
    wherever a reduced end-qubit state is paired with its Hamiltonian.
    """

    h_a: np.ndarray
    h_b: np.ndarray
    h_c: np.ndarray
    h_ac: np.ndarray
    h_cb: np.ndarray
    h_s: np.ndarray
    h_a_local: np.ndarray
    h_b_local: np.ndarray
    n: int


def _bond_terms(spec: ChainSpec, bond: int, sx, sy, sz) -> np.ndarray:
    """All coupling terms on the given 1-based bond (J, K and F families)."""
    i = bond - 1
    return (4.0 * spec.J[i] * (sx[i] @ sx[i + 1] + sy[i] @ sy[i + 1])
            + 4.0 * spec.K[i] * (sx[i] @ sy[i + 1] - sy[i] @ sx[i + 1])
            + 4.0 * spec.F[i] * (sz[i] @ sz[i + 1]))


def build_hamiltonian(spec: ChainSpec) -> HamiltonianParts:
    """Assemble the chain Hamiltonian and its subsystem decomposition."""
    n = spec.n
    sx = [site_operator("X", i, n) for i in range(1, n + 1)]
    sy = [site_operator("Y", i, n) for i in range(1, n + 1)]
    sz = [site_operator("Z", i, n) for i in range(1, n + 1)]

    h_a = spec.E[0] * sz[0]
    h_b = spec.E[-1] * sz[-1]
    h_ac = _bond_terms(spec, 1, sx, sy, sz)
    h_cb = _bond_terms(spec, n - 1, sx, sy, sz)

    d = 2**n
    h_c = np.zeros((d, d), dtype=complex)
    for i in range(2, n):  # interior fields
        h_c = h_c + spec.E[i - 1] * sz[i - 1]
    for bond in range(2, n - 1):  # interior bonds (empty for n = 3)
        h_c = h_c + _bond_terms(spec, bond, sx, sy, sz)

    h_s = h_a + h_b + h_c + h_ac + h_cb
    return HamiltonianParts(
        h_a=h_a, h_b=h_b, h_c=h_c, h_ac=h_ac, h_cb=h_cb, h_s=h_s,
        h_a_local=spec.E[0] * PAULI["Z"] / 2.0,
        h_b_local=spec.E[-1] * PAULI["Z"] / 2.0,
        n=n,
    )


def gibbs_state(h_local: np.ndarray, beta: float) -> np.ndarray:
    """Canonical state e^{-beta h} / Tr[e^{-beta h}] via eigendecomposition.

    Full rank for any finite beta; beta = 0 gives the maximally mixed state.
    Negative beta is rejected: baths have positive temperature here.
    """
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    h_local = np.asarray(h_local, dtype=complex)
    dev = float(np.abs(h_local - h_local.conj().T).max())
    if dev > 1e-12:
        raise ValueError(f"Hamiltonian is not Hermitian (max deviation {dev:.3e})")
    w, v = np.linalg.eigh(h_local)
    weights = np.exp(-beta * (w - w.min()))  # shift cancels in the ratio
    rho = (v * weights) @ v.conj().T
    return rho / np.trace(rho).real
