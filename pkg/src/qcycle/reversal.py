"""Kraus extraction via the Choi matrix and the time-reversed channel.

The Choi matrix here is J = sum_ij ch(E_ij) (x) E_ij over matrix units,
i.e. the output leg is the first Kronecker factor. J is PSD iff the channel
is completely positive, and tracing out the output leg returns the identity
iff the channel is trace preserving.

Kraus operators come from the eigendecomposition of J (descending
eigenvalue order fixes the gauge). The time reversal of a channel around a
full-rank state r it fixes conjugates each Kraus operator:

    reversed A = r^{1/2} A* r^{-1/2}

which is trace preserving exactly when r is a fixed point, shares r as its
own fixed point, and reverses two-step path probabilities started from r.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotCPError, NotFixedPointError, ZeroProbabilityError
from .limitcycle import Channel, ChannelMatrix
from .linalg import hermitian_part, partial_trace, psd_sqrt_invsqrt, trace_distance

CP_ATOL = 1e-8           # Choi eigenvalues below -CP_ATOL flag a broken channel
ZERO_PROBABILITY = 1e-14


@dataclass
class KrausSet:
    """Kraus operators of a channel plus the Choi weight dropped at extraction."""

    operators: list
    dim: int
    discarded_weight: float = 0.0

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return kraus_apply(self.operators, rho)

    def completeness_residual(self) -> float:
        """Max-abs deviation of sum A*A from the identity."""
        acc = sum(a.conj().T @ a for a in self.operators)
        return float(np.abs(acc - np.eye(self.dim)).max())


def choi_matrix(ch: Channel) -> np.ndarray:
    """Tabulate the channel on matrix units into its Choi matrix.

    Raises :class:`NotCPError` when the result has an eigenvalue below
    -1e-8, which means the channel construction itself is broken.
    """
    d = ch.dim
    j = np.zeros((d * d, d * d), dtype=complex)
    for row in range(d):
        for col in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[row, col] = 1.0
            j += np.kron(ch.apply(unit), unit)
    min_eig = float(np.linalg.eigvalsh(hermitian_part(j)).min())
    if min_eig < -CP_ATOL:
        raise NotCPError(min_eig)
    return j


def choi_output_trace(j: np.ndarray, dim: int) -> np.ndarray:
    """Trace out the output leg; equals the identity for a TP channel."""
    return partial_trace(j, [1], [dim, dim])


def kraus_from_choi(j: np.ndarray, rank_tol: float = 1e-12) -> KrausSet:
    """Kraus operators from the Choi eigendecomposition.

    Eigenpairs with eigenvalue below ``rank_tol`` (relative to the largest)
    are dropped and their total weight reported on the result. Eigenvectors
    devectorize row-major: the Choi convention above pairs output-leg index
    k with input-leg index i at flat position k*d + i.
    """
    j = np.asarray(j, dtype=complex)
    d2 = j.shape[0]
    d = int(round(np.sqrt(d2)))
    if j.shape != (d2, d2) or d * d != d2:
        raise ValueError(f"Choi matrix shape {j.shape} is not a square of squares")
    w, v = np.linalg.eigh(hermitian_part(j))
    min_eig = float(w.min())
    if min_eig < -CP_ATOL:
        raise NotCPError(min_eig)
    order = np.argsort(-w)
    w = w[order]
    v = v[:, order]
    cut = rank_tol * max(float(w[0]), 0.0)
    ops = []
    discarded = 0.0
    for lam, col in zip(w, v.T):
        if lam >= cut and lam > 0.0:
            ops.append(np.sqrt(lam) * col.reshape(d, d))
        else:
            discarded += float(lam)
    return KrausSet(operators=ops, dim=d, discarded_weight=discarded)


def kraus_apply(operators, rho: np.ndarray) -> np.ndarray:
    """sum A rho A* over the operator list."""
    rho = np.asarray(rho, dtype=complex)
    return sum(a @ rho @ a.conj().T for a in operators)


def kraus_adjoint_apply(operators, x: np.ndarray) -> np.ndarray:
    """Adjoint map sum A* x A (adjoint w.r.t. the trace inner product)."""
    x = np.asarray(x, dtype=complex)
    return sum(a.conj().T @ x @ a for a in operators)


def kraus_channel_matrix(kraus: KrausSet) -> ChannelMatrix:
    """Column-stacking matrix representation sum conj(A) (x) A of the Kraus map."""
    m = sum(np.kron(a.conj(), a) for a in kraus.operators)
    return ChannelMatrix(matrix=m, dim=kraus.dim, label="kraus")


def sequence_probability(kraus_sequence, rho: np.ndarray) -> float:
    """Probability of observing the given operators in order, starting from rho.

    The first list element acts first: Tr[A_k ... A_1 rho A_1* ... A_k*].
    """
    state = np.asarray(rho, dtype=complex)
    for a in kraus_sequence:
        if a.shape != state.shape:
            raise ValueError(f"operator shape {a.shape} does not match state shape {state.shape}")
        state = a @ state @ a.conj().T
    return float(np.trace(state).real)


def post_interaction_state(a: np.ndarray, rho: np.ndarray):
    """Conditional state after one Kraus event: (A rho A* / p, p)."""
    a = np.asarray(a, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    out = a @ rho @ a.conj().T
    p = float(np.trace(out).real)
    if p < ZERO_PROBABILITY:
        raise ZeroProbabilityError(p)
    return out / p, p


@dataclass
class ReversedChannel:
    """Time reversal of a channel around its fixed point.

    ``kraus`` holds the reversed operators; ``forward`` the operators they
    were built from. ``apply`` uses the reversed Kraus sum, while
    ``apply_adjoint_route`` computes the same map as a sandwich of the
    fixed-point square roots around the adjoint of the forward channel.
    The two routes agreeing is a construction invariant.
    """

    kraus: KrausSet
    forward: KrausSet
    rho_star: np.ndarray
    sqrt: np.ndarray
    invsqrt: np.ndarray

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return kraus_apply(self.kraus.operators, rho)

    def apply_adjoint_route(self, rho: np.ndarray) -> np.ndarray:
        inner = self.invsqrt @ np.asarray(rho, dtype=complex) @ self.invsqrt
        return self.sqrt @ kraus_adjoint_apply(self.forward.operators, inner) @ self.sqrt


def reverse_channel(kraus: KrausSet, rho_star: np.ndarray, rank_tol: float = 1e-12,
                    fp_tol: float = 1e-10) -> ReversedChannel:
    """Build the time-reversed channel around a full-rank fixed point.

    Parameters
    ----------
    kraus : KrausSet of the forward channel.
    rho_star : claimed fixed point; must be full rank (else
        :class:`RankDeficientError`) and moved by less than 100 * ``fp_tol``
        (else :class:`NotFixedPointError`).
    rank_tol : relative eigenvalue cutoff for the rank check.
    fp_tol : solver tolerance the fixed point was computed at.

    The reversed set is verified trace preserving within 1e-9 (equivalent to
    the fixed-point property) and the Kraus route is cross-checked against
    the adjoint-sandwich route on seeded random states.
    """
    rho_star = np.asarray(rho_star, dtype=complex)
    sqrt, invsqrt, _ = psd_sqrt_invsqrt(rho_star, rank_tol=rank_tol, require_full_rank=True)

    residual = trace_distance(kraus_apply(kraus.operators, rho_star), rho_star)
    if residual > 100.0 * fp_tol:
        raise NotFixedPointError(residual, 100.0 * fp_tol)

    reversed_ops = [sqrt @ a.conj().T @ invsqrt for a in kraus.operators]
    rev = ReversedChannel(
        kraus=KrausSet(operators=reversed_ops, dim=kraus.dim,
                       discarded_weight=kraus.discarded_weight),
        forward=kraus,
        rho_star=rho_star,
        sqrt=sqrt,
        invsqrt=invsqrt,
    )

    tp_residual = rev.kraus.completeness_residual()
    if tp_residual > 1e-9:
        raise NotFixedPointError(tp_residual, 1e-9, what="completeness of the reversed set")

    rng = np.random.default_rng(0)  # fixed seed: construction stays deterministic
    for _ in range(3):
        g = rng.normal(size=(kraus.dim, kraus.dim)) + 1j * rng.normal(size=(kraus.dim, kraus.dim))
        probe = g @ g.conj().T
        probe /= np.trace(probe).real
        gap = float(np.abs(rev.apply(probe) - rev.apply_adjoint_route(probe)).max())
        if gap > 1e-9:
            raise NotFixedPointError(gap, 1e-9, what="agreement of the two reversal routes")
    return rev
