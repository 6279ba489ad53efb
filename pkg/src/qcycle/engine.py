"""The four-stroke cycle on full-chain states and its energy accounting.

Stroke order: thermalize end qubit A against the beta1 bath, evolve
unitarily for tau1, thermalize end qubit B against the beta2 bath, evolve
for tau2. Thermalization is total replacement (trace out the end qubit,
tensor the local Gibbs state back in), not a finite-rate relaxation.

Tensor ordering is always site order 1..n. The B thermalization therefore
stores the fresh Gibbs factor last, keeping the chain Hamiltonian applicable
without any permutation bookkeeping.

Sign conventions in the accounting:
  * ``q_c``/``q_h`` are bath-side heats: the energy deposited into the cold
    (hot) bath over one full cycle, read off the end-qubit reduced states.
    Heat flowing into the system is their negative.
  * ``w1..w4`` evaluate the coupling operators on the four post-stroke
    states; their sum is reported but does not close the first law.
  * ``w_ledger`` books the coupling-switch energies at the instants the
    switches actually happen, so -q_c - q_h + w_ledger equals the cycle's
    total energy change identically, for any input state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import HamiltonianParts, gibbs_state
from .linalg import expm_unitary, hermitize, kron, partial_trace, trace_distance


@dataclass
class CycleParams:
    """Bath inverse temperatures and stroke durations (hbar = k_B = 1)."""

    beta1: float
    beta2: float
    tau1: float
    tau2: float

    def __post_init__(self):
        for name in ("beta1", "beta2", "tau1", "tau2"):
            val = float(getattr(self, name))
            setattr(self, name, val)
            if not math.isfinite(val):
                raise ValueError(f"{name} must be finite, got {val}")
        if self.beta1 <= 0.0 or self.beta2 <= 0.0:
            raise ValueError("beta1 and beta2 must be strictly positive")
        if self.tau1 < 0.0 or self.tau2 < 0.0:
            raise ValueError("tau1 and tau2 must be non-negative")


@dataclass
class CycleState:
    """State at the start of stroke 1 plus the four post-stroke states."""

    rho0: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    rho3: np.ndarray
    rho4: np.ndarray


@dataclass
class CycleRecord:
    """Per-cycle thermodynamic ledger; see the module docstring for signs."""

    q_c: float
    q_h: float
    w1: float
    w2: float
    w3: float
    w4: float
    w_total: float
    w_ledger: float
    first_law_residual_paper: float
    first_law_residual_ledger: float
    delta_prev: float = float("nan")


@dataclass
class CycleOperators:
    """Precomputed per-cycle operators: end-qubit Gibbs states and unitaries."""

    sigma_a: np.ndarray
    sigma_b: np.ndarray
    u1: np.ndarray
    u2: np.ndarray


def cycle_operators(parts: HamiltonianParts, params: CycleParams) -> CycleOperators:
    """Build the two bath Gibbs states and the two stroke unitaries once."""
    return CycleOperators(
        sigma_a=gibbs_state(parts.h_a_local, params.beta1),
        sigma_b=gibbs_state(parts.h_b_local, params.beta2),
        u1=expm_unitary(parts.h_s, params.tau1),
        u2=expm_unitary(parts.h_s, params.tau2),
    )


def _qubit_dims(rho: np.ndarray) -> list:
    d = rho.shape[0]
    n = d.bit_length() - 1
    if rho.ndim != 2 or rho.shape != (d, d) or 2**n != d:
        raise ValueError(f"expected a square matrix on qubits, got shape {rho.shape}")
    return [2] * n


def replace_first_factor(m: np.ndarray, sigma: np.ndarray, dims) -> np.ndarray:
    """Linear map m -> sigma (x) Tr_first[m]; building block of stroke 1."""
    return kron(sigma, partial_trace(m, range(1, len(dims)), dims))


def replace_last_factor(m: np.ndarray, sigma: np.ndarray, dims) -> np.ndarray:
    """Linear map m -> Tr_last[m] (x) sigma; building block of stroke 3."""
    return kron(partial_trace(m, range(0, len(dims) - 1), dims), sigma)


def stroke_thermalize_a(rho: np.ndarray, h_a_local: np.ndarray, beta1: float) -> np.ndarray:
    """Replace the first qubit with its beta1 Gibbs state; the rest is untouched."""
    dims = _qubit_dims(np.asarray(rho, dtype=complex))
    sigma = gibbs_state(h_a_local, beta1)
    return hermitize(replace_first_factor(rho, sigma, dims))


def stroke_thermalize_b(rho: np.ndarray, h_b_local: np.ndarray, beta2: float) -> np.ndarray:
    """Replace the last qubit with its beta2 Gibbs state; the rest is untouched."""
    dims = _qubit_dims(np.asarray(rho, dtype=complex))
    sigma = gibbs_state(h_b_local, beta2)
    return hermitize(replace_last_factor(rho, sigma, dims))


def stroke_unitary(rho: np.ndarray, h_s: np.ndarray, tau: float) -> np.ndarray:
    """Conjugate by e^{-i h_s tau}; preserves the spectrum of rho."""
    u = expm_unitary(h_s, tau)
    return hermitize(u @ np.asarray(rho, dtype=complex) @ u.conj().T)


def _expect(op: np.ndarray, rho: np.ndarray) -> float:
    return float(np.trace(op @ rho).real)


def cycle_record(state: CycleState, parts: HamiltonianParts, params: CycleParams,
                 ops: CycleOperators | None = None) -> CycleRecord:
    """Heat/work bookkeeping for one traversed cycle."""
    if ops is None:
        ops = cycle_operators(parts, params)
    n = parts.n
    dims = [2] * n

    rho_a0 = partial_trace(state.rho0, [0], dims)       # A as the cold bath sees it
    rho_b2 = partial_trace(state.rho2, [n - 1], dims)   # B as the hot bath sees it
    q_c = _expect(parts.h_a_local, rho_a0 - ops.sigma_a)
    q_h = _expect(parts.h_b_local, rho_b2 - ops.sigma_b)

    w1 = _expect(parts.h_ac, state.rho1)
    w2 = -_expect(parts.h_ac, state.rho2)
    w3 = _expect(parts.h_cb, state.rho3)
    w4 = -_expect(parts.h_cb, state.rho4)
    w_total = w1 + w2 + w3 + w4

    w_ledger = (_expect(parts.h_ac, state.rho1) - _expect(parts.h_ac, state.rho0)
                + _expect(parts.h_cb, state.rho3) - _expect(parts.h_cb, state.rho2))

    return CycleRecord(
        q_c=q_c, q_h=q_h,
        w1=w1, w2=w2, w3=w3, w4=w4, w_total=w_total, w_ledger=w_ledger,
        first_law_residual_paper=abs(q_c + q_h + w_total),
        first_law_residual_ledger=abs(-q_c - q_h + w_ledger),
    )


def run_cycle(rho0: np.ndarray, parts: HamiltonianParts, params: CycleParams,
              ops: CycleOperators | None = None):
    """Run one full cycle from rho0. Returns (CycleState, CycleRecord).

    Pass a precomputed :class:`CycleOperators` when iterating many cycles to
    avoid rediagonalizing the chain Hamiltonian every call.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    dims = _qubit_dims(rho0)
    if len(dims) != parts.n:
        raise ValueError(f"state is on {len(dims)} qubits but the chain has {parts.n}")
    if ops is None:
        ops = cycle_operators(parts, params)

    rho1 = hermitize(replace_first_factor(rho0, ops.sigma_a, dims))
    rho2 = hermitize(ops.u1 @ rho1 @ ops.u1.conj().T)
    rho3 = hermitize(replace_last_factor(rho2, ops.sigma_b, dims))
    rho4 = hermitize(ops.u2 @ rho3 @ ops.u2.conj().T)

    state = CycleState(rho0=rho0, rho1=rho1, rho2=rho2, rho3=rho3, rho4=rho4)
    return state, cycle_record(state, parts, params, ops)


def cycle_delta(state_now: CycleState, state_prev: CycleState) -> float:
    """Trace distance between the cycle-start states of two successive cycles."""
    return trace_distance(state_now.rho0, state_prev.rho0)
