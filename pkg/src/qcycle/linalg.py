"""Dense complex-matrix primitives used by every other module.

Units are hbar = k_B = 1 throughout. All matrix functions go through a
Hermitian eigendecomposition rather than series expansions; dimensions stay
at or below 2**10, where exact diagonalization is cheap and stable.
"""

from __future__ import annotations

import numpy as np

from .errors import RankDeficientError

# Hermiticity drift below this is symmetrized away, above it is rejected.
HERMITICITY_ATOL = 1e-10
# Eigenvalues in [-PSD_CLIP_ATOL, 0) are clipped to zero and the state
# renormalized; anything more negative is a genuine positivity violation.
PSD_CLIP_ATOL = 1e-10


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with block (i, j) equal to a[i, j] * b."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho: np.ndarray, keep, dims) -> np.ndarray:
    """Reduced matrix on the kept tensor factors, in their original order.

    Parameters
    ----------
    rho : (d, d) array with d = prod(dims)
    keep : iterable of int
        0-based factor indices to retain; must be non-empty.
    dims : sequence of int
        Dimension of each tensor factor, leftmost Kronecker factor first.

    Linear in ``rho`` with no density-matrix checks, so it can be applied to
    arbitrary operators (e.g. matrix units when tabulating a channel).
    """
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    d = int(np.prod(dims))
    if rho.shape != (d, d):
        raise ValueError(f"matrix shape {rho.shape} incompatible with factor dims {dims}")
    keep = sorted({int(k) for k in keep})
    if not keep:
        raise ValueError("keep must name at least one tensor factor")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} factors")
    t = rho.reshape(dims + dims)
    traced = [i for i in range(len(dims)) if i not in keep]
    # Trace highest axes first so lower axis labels stay valid.
    for ax in reversed(traced):
        t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    d_keep = int(np.prod([dims[i] for i in keep]))
    return t.reshape(d_keep, d_keep)


def expm_unitary(h: np.ndarray, t: float, hbar: float = 1.0) -> np.ndarray:
    """Evolution operator e^{-i h t / hbar} for Hermitian h.

    Computed as V e^{-i L t / hbar} V* from the eigendecomposition h = V L V*.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    dev = float(np.abs(h - h.conj().T).max())
    if dev > 1e-12:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w * (t / hbar))
    return (v * phases) @ v.conj().T


def psd_sqrt_invsqrt(rho: np.ndarray, rank_tol: float = 1e-12,
                     require_full_rank: bool = False):
    """Square root and (pseudo-)inverse square root of a PSD matrix.

    ``rank_tol`` is relative to the largest eigenvalue; eigenvalues at or
    below the cutoff are treated as zero and contribute nothing to the
    inverse root (pseudo-inverse on the support).

    Returns ``(sqrt, invsqrt, effective_rank)``. With ``require_full_rank``
    a deficient input raises :class:`RankDeficientError` instead.
    """
    rho = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh(hermitian_part(rho))
    cut = rank_tol * max(float(w.max()), 0.0)
    support = w > cut
    rank = int(support.sum())
    if require_full_rank and rank < len(w):
        raise RankDeficientError(rank, len(w))
    root = np.sqrt(np.clip(w, 0.0, None))
    inv_root = np.zeros_like(root)
    inv_root[support] = 1.0 / root[support]
    root[~support] = 0.0
    sqrt = (v * root) @ v.conj().T
    invsqrt = (v * inv_root) @ v.conj().T
    return sqrt, invsqrt, rank


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the sum of |eigenvalues| of (a - b); zero iff a = b."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    w = np.linalg.eigvalsh(hermitian_part(a - b))
    return 0.5 * float(np.abs(w).sum())


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    """Max-abs entry of the commutator ab - ba."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ValueError(f"expected equal square shapes, got {a.shape} and {b.shape}")
    return float(np.abs(a @ b - b @ a).max())


def hermitian_part(m: np.ndarray) -> np.ndarray:
    """(m + m*) / 2, unconditionally."""
    m = np.asarray(m, dtype=complex)
    return (m + m.conj().T) / 2.0


def hermitize(m: np.ndarray, atol: float = HERMITICITY_ATOL) -> np.ndarray:
    """Symmetrize floating-point drift away; reject genuine non-Hermiticity.

    Drift accumulates over thousands of channel applications, so channel
    outputs pass through here; deviations above ``atol`` indicate a bug and
    raise instead of being papered over.
    """
    m = np.asarray(m, dtype=complex)
    dev = float(np.abs(m - m.conj().T).max())
    if dev > atol:
        raise ValueError(f"matrix deviates from Hermitian by {dev:.3e} (allowed {atol:.3e})")
    return (m + m.conj().T) / 2.0


def project_density(m: np.ndarray) -> np.ndarray:
    """Clean a nearly-valid density matrix: symmetrize, clip, renormalize.

    Eigenvalues in [-PSD_CLIP_ATOL, 0) are clipped to zero; anything more
    negative raises. The result has unit trace to machine precision.
    """
    m = hermitize(m)
    w, v = np.linalg.eigh(m)
    if float(w.min()) < -PSD_CLIP_ATOL:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w.min():.3e})")
    w = np.clip(w, 0.0, None)
    m = (v * w) @ v.conj().T
    tr = float(np.trace(m).real)
    if tr <= 0.0:
        raise ValueError("non-positive trace after clipping")
    return hermitian_part(m / tr)


def check_density_matrix(rho: np.ndarray, herm_atol: float = 1e-12,
                         trace_atol: float = 1e-12, psd_atol: float = 1e-10) -> None:
    """Raise ValueError unless rho is Hermitian, unit-trace, and PSD."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    dev = float(np.abs(rho - rho.conj().T).max())
    if dev > herm_atol:
        raise ValueError(f"not Hermitian: max deviation {dev:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_atol:
        raise ValueError(f"trace {tr} differs from 1 beyond {trace_atol:.1e}")
    w_min = float(np.linalg.eigvalsh(hermitian_part(rho)).min())
    if w_min < -psd_atol:
        raise ValueError(f"not PSD: min eigenvalue {w_min:.3e}")


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random state G G* / Tr[G G*] with G complex Gaussian."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
