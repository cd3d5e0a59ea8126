"""Reference estimators: singular value thresholding and degree-sorted
block histograms.
"""

import math
from dataclasses import dataclass

import numpy as np

from .sampling import validate_adjacency


@dataclass(frozen=True)
class UsvtConfig:
    """Threshold slack: singular values below (2+eta)*sqrt(n) are dropped."""

    eta: float = 0.01

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")


def usvt_estimate(A: np.ndarray, cfg: UsvtConfig = UsvtConfig()) -> np.ndarray:
    """Singular value thresholding estimate of the probability matrix.

    Accepts any square real matrix (test harnesses feed noiseless low-rank
    inputs directly). SVD failures propagate as numpy.linalg.LinAlgError.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.ndim != 2 or A.shape != (n, n) or n < 2:
        raise ValueError("input must be a square matrix with n >= 2")
    u, s, vt = np.linalg.svd(A, full_matrices=False)
    s = np.where(s < (2.0 + cfg.eta) * math.sqrt(n), 0.0, s)
    rec = (u * s) @ vt
    rec = np.clip(rec, 0.0, 1.0)
    return 0.5 * (rec + rec.T)


@dataclass(frozen=True)
class SasConfig:
    """Number of degree-sorted bins."""

    bins: int

    def __post_init__(self):
        if self.bins < 1:
            raise ValueError(f"bins must be >= 1, got {self.bins}")

    @classmethod
    def for_size(cls, n: int) -> "SasConfig":
        """Default binning ceil(n/h) with bandwidth h = floor(log n)."""
        h = max(1, int(math.floor(math.log(n))))
        return cls(bins=min(n, math.ceil(n / h)))


def sas_estimate(A: np.ndarray, cfg: SasConfig | None = None) -> np.ndarray:
    """Degree-sorted block-histogram estimate.

    Nodes are ordered by degree (ties broken by node index) and split into
    near-equal contiguous bins; the block mean of A (diagonal excluded)
    gives the estimate for every pair in that block.
    """
    A = validate_adjacency(A)
    n = A.shape[0]
    if n < 2:
        raise ValueError("need n >= 2")
    if cfg is None:
        cfg = SasConfig.for_size(n)
    k = min(cfg.bins, n)
    degrees = A.sum(axis=1)
    order = np.lexsort((np.arange(n), degrees))
    groups = np.array_split(order, k)
    bin_of = np.empty(n, dtype=int)
    for b, g in enumerate(groups):
        bin_of[g] = b
    h = np.zeros((k, k))
    for a in range(k):
        ga = groups[a]
        for b in range(a, k):
            gb = groups[b]
            block = A[np.ix_(ga, gb)]
            if a == b:
                m = ga.size
                denom = m * (m - 1)
                h[a, b] = block.sum() / denom if denom > 0 else 0.0
            else:
                h[a, b] = block.mean()
                h[b, a] = h[a, b]
    return h[np.ix_(bin_of, bin_of)]
