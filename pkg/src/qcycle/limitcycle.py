"""Cycle superoperators, their matrix representation, and fixed-point solvers.

Two channels cover the two natural anchorings of the cycle:

  * the CB channel acts on sites 2..n, anchored just after the A
    thermalization: tensor the fresh A Gibbs state on the left, run strokes
    2-3-4, trace out A;
  * the AC channel acts on sites 1..n-1, anchored just after the B
    thermalization: tensor the fresh B Gibbs state on the right, run stroke
    4, thermalize A, run stroke 2, trace out B.

Both are completely positive and trace preserving, and for generic
parameters mixing, so repeated application converges to a unique fixed
point. Two independent solvers (power iteration and the spectral
decomposition of the vectorized channel) guard against silent bugs.

Vectorization is column-stacking throughout this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .chain import HamiltonianParts, gibbs_state
from .engine import CycleParams, CycleState, cycle_operators, replace_first_factor, replace_last_factor
from .errors import ClosureViolationError, DegenerateFixedPointError
from .linalg import hermitian_part, hermitize, kron, partial_trace, trace_distance

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000
DEGENERACY_TOL = 1e-8  # eigenvalues this close to unit modulus count as fixed-point candidates


@dataclass
class Channel:
    """A linear map on matrices over a dim-dimensional space.

    ``apply`` must be linear (no normalization inside), so it can be
    tabulated on matrix units to build matrix and Choi representations.
    """

    dim: int
    apply: Callable[[np.ndarray], np.ndarray]
    label: str = ""


@dataclass
class ChannelMatrix:
    """d^2 x d^2 matrix acting on column-stacked density matrices."""

    matrix: np.ndarray
    dim: int
    label: str = ""


@dataclass
class FixedPointResult:
    """Outcome of a fixed-point solve.

    ``spectral_gap`` is 1 - |second eigenvalue|: exact for the spectral
    solver, a tail-ratio estimate for the iterative one. ``final_delta`` is
    the trace distance between the last two iterates (or, for the spectral
    solver, between the fixed point and its image).
    """

    rho_star: np.ndarray
    iterations: int
    final_delta: float
    spectral_gap: float
    degenerate: bool = False
    converged: bool = True
    delta_history: np.ndarray = field(default_factory=lambda: np.empty(0))


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


def cycle_channel_cb(parts: HamiltonianParts, params: CycleParams) -> Channel:
    """Cycle map on the CB subsystem (sites 2..n), anchored after stroke 1."""
    n = parts.n
    dims = [2] * n
    ops = cycle_operators(parts, params)
    u1d = ops.u1.conj().T
    u2d = ops.u2.conj().T

    def apply(rho_cb: np.ndarray) -> np.ndarray:
        full = kron(ops.sigma_a, rho_cb)
        full = ops.u1 @ full @ u1d
        full = replace_last_factor(full, ops.sigma_b, dims)
        full = ops.u2 @ full @ u2d
        return partial_trace(full, range(1, n), dims)

    return Channel(dim=2 ** (n - 1), apply=apply, label="cycle_cb")


def cycle_channel_ac(parts: HamiltonianParts, params: CycleParams) -> Channel:
    """Cycle map on the AC subsystem (sites 1..n-1), anchored after stroke 3."""
    n = parts.n
    dims = [2] * n
    ops = cycle_operators(parts, params)
    u1d = ops.u1.conj().T
    u2d = ops.u2.conj().T

    def apply(rho_ac: np.ndarray) -> np.ndarray:
        full = kron(rho_ac, ops.sigma_b)
        full = ops.u2 @ full @ u2d
        full = replace_first_factor(full, ops.sigma_a, dims)
        full = ops.u1 @ full @ u1d
        return partial_trace(full, range(0, n - 1), dims)

    return Channel(dim=2 ** (n - 1), apply=apply, label="cycle_ac")


def channel_matrix(ch: Channel) -> ChannelMatrix:
    """Tabulate the channel on matrix units; column j is vec(ch(unvec(e_j)))."""
    d = ch.dim
    m = np.empty((d * d, d * d), dtype=complex)
    for col in range(d):
        for row in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[row, col] = 1.0
            m[:, row + col * d] = ch.apply(unit).reshape(-1, order="F")
    return ChannelMatrix(matrix=m, dim=d, label=ch.label)


def _estimate_gap(deltas) -> float:
    """Tail-ratio estimate of 1 - |second eigenvalue| from the delta history."""
    tail = [d for d in deltas[-12:] if d > 0.0]
    if len(tail) < 4:
        return float("nan")
    ratios = [b / a for a, b in zip(tail, tail[1:]) if a > 0.0]
    if not ratios:
        return float("nan")
    r = float(np.median(ratios))
    return float(min(max(1.0 - r, 0.0), 1.0))


def fixed_point_iterate(ch: Channel, rho_init: np.ndarray, tol: float = DEFAULT_TOL,
                        max_iter: int = DEFAULT_MAX_ITER) -> FixedPointResult:
    """Iterate the channel until successive iterates are tol-close.

    Non-convergence is not an exception: the result carries the best iterate,
    the full delta history, and ``converged=False``.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    rho = np.asarray(rho_init, dtype=complex)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"initial state shape {rho.shape} does not match channel dim {ch.dim}")
    deltas = []
    converged = False
    for _ in range(max_iter):
        nxt = hermitize(ch.apply(rho))
        nxt = nxt / np.trace(nxt).real  # guard against trace drift
        delta = trace_distance(nxt, rho)
        deltas.append(delta)
        rho = nxt
        if delta < tol:
            converged = True
            break
    return FixedPointResult(
        rho_star=_clean_state(rho),
        iterations=len(deltas),
        final_delta=deltas[-1] if deltas else 0.0,
        spectral_gap=_estimate_gap(deltas),
        degenerate=False,
        converged=converged,
        delta_history=np.asarray(deltas),
    )


def _clean_state(m: np.ndarray, floor: float = -1e-6) -> np.ndarray:
    """Hermitize, clip solver-scale negative eigenvalues, renormalize."""
    m = hermitian_part(m)
    w, v = np.linalg.eigh(m)
    if float(w.min()) < floor:
        raise ValueError(f"candidate state far from PSD (min eigenvalue {w.min():.3e})")
    w = np.clip(w, 0.0, None)
    m = (v * w) @ v.conj().T
    return hermitian_part(m / np.trace(m).real)


def fixed_point_spectral(cm: ChannelMatrix, tol: float = DEGENERACY_TOL) -> FixedPointResult:
    """Fixed point from the eigenvector of the vectorized channel at eigenvalue 1.

    Eigenvalues whose modulus is within ``tol`` of 1 count as fixed-point
    candidates; more than one raises :class:`DegenerateFixedPointError`
    carrying all of them plus the (arbitrary) candidate it would have
    returned.
    """
    evals, evecs = np.linalg.eig(cm.matrix)
    order = np.argsort(-np.abs(evals))
    evals = evals[order]
    evecs = evecs[:, order]

    moduli = np.abs(evals)
    near_unit = evals[np.abs(moduli - 1.0) <= tol]
    gap = float(1.0 - moduli[1]) if len(moduli) > 1 else 1.0

    idx = int(np.argmin(np.abs(evals - 1.0)))
    x = unvec(evecs[:, idx], cm.dim)
    tr = complex(np.trace(x))
    if abs(tr) < 1e-12:
        # pathological gauge: the candidate has no trace component
        x = hermitian_part(x)
        tr = complex(np.trace(x))
        if abs(tr) < 1e-12:
            raise ValueError("fixed-point eigenvector has zero trace; channel is not trace preserving")
    rho = _clean_state(x / tr)
    residual = trace_distance(unvec(cm.matrix @ vec(rho), cm.dim), rho)

    result = FixedPointResult(
        rho_star=rho,
        iterations=0,
        final_delta=residual,
        spectral_gap=gap,
        degenerate=len(near_unit) > 1,
        converged=len(near_unit) <= 1,
    )
    if result.degenerate:
        raise DegenerateFixedPointError(near_unit, result=result)
    return result


def limit_cycle_states(rho_cb_star: np.ndarray, parts: HamiltonianParts,
                       params: CycleParams, tol: float = DEFAULT_TOL) -> CycleState:
    """Reconstruct the four full-chain stroke states from a CB fixed point.

    Verifies closure: tracing A out of the post-stroke-4 state must return
    the input fixed point within 10x the solver tolerance. The cycle-start
    state ``rho0`` is the post-stroke-4 state, which is what closing the
    loop means.
    """
    n = parts.n
    dims = [2] * n
    ops = cycle_operators(parts, params)

    rho1 = hermitize(kron(ops.sigma_a, rho_cb_star))
    rho2 = hermitize(ops.u1 @ rho1 @ ops.u1.conj().T)
    rho3 = hermitize(replace_last_factor(rho2, ops.sigma_b, dims))
    rho4 = hermitize(ops.u2 @ rho3 @ ops.u2.conj().T)

    closure = trace_distance(partial_trace(rho4, range(1, n), dims), rho_cb_star)
    if closure > 10.0 * tol:
        raise ClosureViolationError(closure, 10.0 * tol)
    return CycleState(rho0=rho4, rho1=rho1, rho2=rho2, rho3=rho3, rho4=rho4)
