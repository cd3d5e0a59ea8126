"""Quantile neighborhoods and the neighborhood-smoothed estimate.

The pipeline: squared dissimilarities -> per-node quantile neighborhoods
with bandwidth h = C0 * sqrt(log(n)/n) -> symmetric smoothing of the
adjacency matrix. With lam = 0 and tie correction off this is exactly the
plain neighborhood-smoothing baseline.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dissimilarity import TieBreakConfig, combine, d0_hat, s_hat
from .sampling import validate_adjacency


@dataclass(frozen=True)
class EstimatorConfig:
    """Settings for the feature-assisted estimate."""

    lam: float = 0.0
    c0: float = 1.0
    tie_correction: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lambda must be nonnegative, got {self.lam}")
        if self.c0 <= 0:
            raise ValueError(f"C0 must be positive, got {self.c0}")


@dataclass(frozen=True)
class NeighborhoodSet:
    """Per-node neighbor membership: mask[i, i'] says i' is a neighbor of i."""

    mask: np.ndarray        # (n, n) bool, False on the diagonal
    thresholds: np.ndarray  # (n,) quantile value per node
    counts: np.ndarray      # (n,) neighborhood sizes

    def indices(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.mask[i])


def bandwidth(n: int, c0: float) -> float:
    """h = c0 * sqrt(log(n)/n); errors when h > 1, naming the minimum n."""
    if n < 3:
        raise ValueError(f"need n >= 3, got n={n}")
    h = c0 * math.sqrt(math.log(n) / n)
    if h > 1.0:
        m = 3
        while c0 * math.sqrt(math.log(m) / m) > 1.0:
            m += 1
        raise ValueError(
            f"bandwidth h={h:.3f} exceeds 1 at n={n}; C0={c0} needs n >= {m}"
        )
    return h


def neighborhood_size(n: int, c0: float) -> int:
    """Required neighbor count ceil(h * (n-1))."""
    return max(1, math.ceil(bandwidth(n, c0) * (n - 1)))


def neighborhoods(dsq: np.ndarray, c0: float = 1.0) -> NeighborhoodSet:
    """Quantile neighborhoods on a squared-dissimilarity matrix.

    q_i is the k-th smallest of row i (diagonal excluded) with
    k = ceil(h*(n-1)); N_i collects every i' != i with dsq[i,i'] <= q_i.
    """
    dsq = np.asarray(dsq, dtype=float)
    n = dsq.shape[0]
    if dsq.shape != (n, n):
        raise ValueError("dissimilarity matrix must be square")
    k = neighborhood_size(n, c0)
    d = dsq.copy()
    np.fill_diagonal(d, np.inf)
    q = np.partition(d, k - 1, axis=1)[:, k - 1]
    mask = d <= q[:, None]
    counts = mask.sum(axis=1)
    return NeighborhoodSet(mask=mask, thresholds=q, counts=counts)


def smooth(A: np.ndarray, nbh: NeighborhoodSet) -> np.ndarray:
    """Symmetric neighborhood average of adjacency rows.

    P[i,j] = (mean_{i' in N_i} A[i',j] + mean_{j' in N_j} A[i,j']) / 2,
    the diagonal included.
    """
    A = validate_adjacency(A)
    counts = nbh.counts
    if np.any(counts < 1):
        raise RuntimeError("internal invariant violated: empty neighborhood")
    w = nbh.mask / counts[:, None]
    half = w @ A
    return 0.5 * (half + half.T)


def fans_estimate(A: np.ndarray, X: np.ndarray | None, cfg: EstimatorConfig) -> np.ndarray:
    """Feature-assisted neighborhood-smoothed probability estimate.

    X may be None only when cfg.lam == 0; the feature term is then a zero
    matrix and the pipeline reduces to adjacency-only smoothing.
    """
    A = validate_adjacency(A)
    n = A.shape[0]
    if cfg.lam > 0 and X is None:
        raise ValueError("lambda > 0 requires a feature matrix")
    d0sq = d0_hat(A, TieBreakConfig(enabled=cfg.tie_correction, seed=cfg.seed))
    ssq = s_hat(X) if X is not None else np.zeros((n, n))
    dsq = combine(d0sq, ssq, cfg.lam)
    nbh = neighborhoods(dsq, cfg.c0)
    return smooth(A, nbh)


def nbs_estimate(A: np.ndarray, c0: float = 1.0) -> np.ndarray:
    """Plain neighborhood smoothing: lam = 0, no tie perturbation."""
    cfg = EstimatorConfig(lam=0.0, c0=c0, tie_correction=False, seed=0)
    return fans_estimate(A, None, cfg)
