"""Squared node dissimilarities from the adjacency matrix and from features.

All matrices hold SQUARED dissimilarities; neighborhoods later threshold
on squared values, which is equivalent because sqrt is monotone.

The adjacency-based entry (i,j) scans max_{k != i,j} |<A_i - A_j, A_k>|/n
via the Gram matrix A@A.T. Inner products between 0/1 rows are integers,
so ties are common; the optional tie correction adds a per-unordered-pair
uniform draw t/n inside the max, perturbing each squared value by t/n^2
without reordering non-tied pairs.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels, _rng
from .sampling import validate_adjacency


@dataclass(frozen=True)
class TieBreakConfig:
    """Random perturbation used to break ties among dissimilarity values."""

    enabled: bool = True
    seed: int = 0


def tie_matrix(n: int, seed: int) -> np.ndarray:
    """Symmetric matrix of Uniform(0,1) draws, one per unordered pair.

    Generated in a fixed upper-triangle order from a stream keyed on
    (seed, tiebreak), so it is reproducible and shared by (i,j) and (j,i).
    """
    rng = _rng.derive_rng(seed, _rng.TIEBREAK)
    iu, ju = np.triu_indices(n, k=1)
    t = np.zeros((n, n))
    draws = rng.random(iu.size)
    t[iu, ju] = draws
    t[ju, iu] = draws
    return t


def _check_n(A: np.ndarray) -> int:
    n = A.shape[0]
    if n < 3:
        raise ValueError(f"need n >= 3 so the max over k != i,j is nonempty, got n={n}")
    return n


def d0_hat(A: np.ndarray, tie: TieBreakConfig = TieBreakConfig()) -> np.ndarray:
    """Squared adjacency dissimilarity max_{k != i,j} |<A_i - A_j, A_k>|/n.

    With tie correction enabled the entry is
    (max_k |<A_i - A_j, A_k>| + t_ij/n)/n.
    """
    A = validate_adjacency(A)
    n = _check_n(A)
    m = _kernels.max_absdiff(A @ A.T)
    if tie.enabled:
        m = m + tie_matrix(n, tie.seed) / n
    return m / n


def s_hat(X: np.ndarray) -> np.ndarray:
    """Squared feature dissimilarity max_{k != i,j} |<X_i - X_j, X_k>|/p."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("feature matrix must be 2-d (n x p)")
    n, p = X.shape
    if n < 3:
        raise ValueError(f"need n >= 3, got n={n}")
    if p < 1:
        raise ValueError("need p >= 1 feature columns")
    return _kernels.max_absdiff(X @ X.T) / p


def combine(d0sq: np.ndarray, ssq: np.ndarray, lam: float) -> np.ndarray:
    """Weighted squared dissimilarity d0sq + lam * ssq."""
    if lam < 0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    d0sq = np.asarray(d0sq, dtype=float)
    ssq = np.asarray(ssq, dtype=float)
    if d0sq.shape != ssq.shape:
        raise ValueError(f"shape mismatch: {d0sq.shape} vs {ssq.shape}")
    return d0sq + lam * ssq


def d0_mod(A: np.ndarray, tie: TieBreakConfig = TieBreakConfig()) -> np.ndarray:
    """d0_hat with inner products restricted to coordinates m not in {i,j}.

    Entry (i,j) is max_{k != i,j} |sum_{m != i,j} (A_im - A_jm) A_km| / n
    (plus the tie term when enabled), so it never reads A_ij. Used for
    leave-one-out link prediction.
    """
    A = validate_adjacency(A)
    n = _check_n(A)
    m = _kernels.max_absdiff_mod(A @ A.T, A)
    if tie.enabled:
        m = m + tie_matrix(n, tie.seed) / n
    return m / n


def d0_mod_rows(B: np.ndarray, i: int, j: int, tie: TieBreakConfig = TieBreakConfig()) -> np.ndarray:
    """Rows i and j of d0_mod computed on a (possibly masked) 0/1 matrix B.

    Fast path for per-pair link prediction: only the two rows that drive
    the neighborhoods of i and j are needed. Returns shape (2, n).
    """
    B = np.asarray(B, dtype=float)
    n = _check_n(B)
    rows = _kernels.max_absdiff_mod_rows(B @ B.T, B, i, j)
    if tie.enabled:
        t = tie_matrix(n, tie.seed)
        rows = rows + t[[i, j], :] / n
    return rows / n
