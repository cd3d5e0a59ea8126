"""Data-driven choice of the feature weight and feature screening.

Cross-validation splits nodes into a training block and a held-out set,
fits the smoother on the training block for every candidate weight, and
predicts each held-out node's links through its nearest feature neighbor
in the training set. Screening correlates the adjacency-based and the
per-feature dissimilarities with a rank statistic.
"""

from dataclasses import dataclass

import numpy as np
import scipy.stats

from . import _rng
from .dissimilarity import TieBreakConfig, combine, d0_hat, s_hat
from .estimator import neighborhoods, smooth
from .sampling import validate_adjacency


@dataclass(frozen=True)
class CvConfig:
    """Cross-validation settings: candidate grid, repeats, split size."""

    grid: tuple = (0.0, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0)
    repeats: int = 10
    fraction: float = 0.10
    seed: int = 0

    def __post_init__(self):
        grid = tuple(float(g) for g in self.grid)
        if len(grid) < 1:
            raise ValueError("grid must contain at least one value")
        if any(g < 0 for g in grid):
            raise ValueError("grid values must be nonnegative")
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")
        if not 0.0 < self.fraction < 1.0:
            raise ValueError(f"fraction must lie in (0, 1), got {self.fraction}")
        object.__setattr__(self, "grid", grid)


@dataclass(frozen=True)
class ScreenConfig:
    """Keep features whose rank correlation reaches the threshold."""

    threshold: float = 0.03

    def __post_init__(self):
        if not -1.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must lie in [-1, 1], got {self.threshold}")


def cross_validate(
    A: np.ndarray,
    X: np.ndarray,
    cfg: CvConfig,
    c0: float = 1.0,
    tie_correction: bool = True,
) -> tuple[float, np.ndarray]:
    """Select the feature weight by node-splitting cross-validation.

    Returns (lam_opt, losses) where losses has shape (Q, repeats) holding
    the held-out l1 error of every grid value in every repeat. lam_opt
    minimizes the repeat-averaged loss; exact ties go to the smallest
    weight.
    """
    A = validate_adjacency(A)
    n = A.shape[0]
    if n < 10:
        raise ValueError(f"need n >= 10 for a usable node split, got n={n}")
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != n:
        raise ValueError("feature matrix must be n x p")
    grid = np.asarray(cfg.grid, dtype=float)
    if np.any(grid > 0) and X.shape[1] == 0:
        raise ValueError("positive grid values require at least one feature column")

    n_val = int(round(cfg.fraction * n))
    n_val = max(1, n_val)
    if n - n_val < 3:
        raise ValueError(f"training split too small: n={n}, validation={n_val}")

    losses = np.zeros((grid.size, cfg.repeats))
    all_nodes = np.arange(n)
    for m in range(cfg.repeats):
        rng = _rng.derive_rng(cfg.seed, _rng.CV_SPLIT, m)
        val = np.sort(rng.choice(n, size=n_val, replace=False))
        train = np.setdiff1d(all_nodes, val)

        a_train = A[np.ix_(train, train)]
        tie = TieBreakConfig(enabled=tie_correction, seed=_rng.derive_seed(cfg.seed, _rng.TIEBREAK, m))
        d0sq = d0_hat(a_train, tie)
        ssq = s_hat(X[train]) if X.shape[1] > 0 else np.zeros_like(d0sq)

        # nearest training node in feature space, ties to the smallest index
        diffs = X[val][:, None, :] - X[train][None, :, :]
        dists = np.einsum("vtp,vtp->vt", diffs, diffs)
        star = np.argmin(dists, axis=1)

        a_block = A[np.ix_(val, train)]
        for q, lam in enumerate(grid):
            p_train = smooth(a_train, neighborhoods(combine(d0sq, ssq, lam), c0))
            pred = p_train[star, :]
            losses[q, m] = np.abs(a_block - pred).mean()

    mean_losses = losses.mean(axis=1)
    best = mean_losses.min()
    lam_opt = float(grid[mean_losses == best].min())
    return lam_opt, losses


def kendall_tau(x, y) -> float:
    """Tie-adjusted rank correlation (tau-b) in O(m log m).

    Returns nan when either sequence is constant (the correlation is
    undefined there and callers treat nan as below any threshold).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d sequences of equal length")
    if x.size < 2:
        raise ValueError("need at least two observations")
    if np.all(x == x[0]) or np.all(y == y[0]):
        return float("nan")
    return float(scipy.stats.kendalltau(x, y, variant="b").statistic)


def screen_features(
    A: np.ndarray,
    X: np.ndarray,
    cfg: ScreenConfig = ScreenConfig(),
) -> tuple[np.ndarray, np.ndarray]:
    """Rank-correlation screening of feature columns.

    Correlates the unperturbed adjacency dissimilarities with each single
    column's feature dissimilarities over the upper-triangle pairs.
    Returns (kept column indices, per-column tau). Undefined correlations
    (constant columns) are never kept.
    """
    A = validate_adjacency(A)
    X = np.asarray(X, dtype=float)
    n = A.shape[0]
    if X.ndim != 2 or X.shape[0] != n:
        raise ValueError("feature matrix must be n x p")
    p = X.shape[1]
    if p < 1:
        raise ValueError("need p >= 1 feature columns")

    iu, ju = np.triu_indices(n, k=1)
    d_vals = np.sqrt(d0_hat(A, TieBreakConfig(enabled=False))[iu, ju])
    taus = np.empty(p)
    for j in range(p):
        s_vals = np.sqrt(s_hat(X[:, [j]])[iu, ju])
        taus[j] = kendall_tau(d_vals, s_vals)
    kept = np.flatnonzero(~np.isnan(taus) & (taus >= cfg.threshold))
    return kept, taus
