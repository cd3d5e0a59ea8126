"""Sampling of latent labels, probability/adjacency matrices, and features.

All draws are keyed on (seed, purpose) via derive_rng, so repeated calls
with equal inputs are bit-identical and independent ops never share a
stream.
"""

import numpy as np

from . import _rng
from .features import FeatureSpec, eval_component
from .graphons import GraphonSpec, eval_graphon


def sample_labels(n: int, seed: int) -> np.ndarray:
    """Draw n iid Uniform(0,1) latent labels."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    rng = _rng.derive_rng(seed, _rng.LABELS)
    return rng.random(n)


def compute_P(spec: GraphonSpec, labels: np.ndarray) -> np.ndarray:
    """Edge-probability matrix P[i,j] = w(u_i, u_j), diagonal included."""
    u = np.asarray(labels, dtype=float)
    if u.ndim != 1:
        raise ValueError("labels must be a 1-d vector")
    if np.any(u < 0) or np.any(u > 1):
        raise ValueError("labels must lie in [0, 1]")
    return np.asarray(eval_graphon(spec, u[:, None], u[None, :]), dtype=float)


def sample_adjacency(P: np.ndarray, seed: int) -> np.ndarray:
    """Sample a symmetric 0/1 adjacency matrix with zero diagonal.

    Upper-triangle entries are independent Bernoulli(P_ij); the lower
    triangle mirrors them.
    """
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    if P.shape != (n, n):
        raise ValueError("P must be square")
    if P.min() < 0 or P.max() > 1:
        raise ValueError("P entries must lie in [0, 1]")
    rng = _rng.derive_rng(seed, _rng.ADJACENCY)
    iu, ju = np.triu_indices(n, k=1)
    draws = rng.random(iu.size)
    a = np.zeros((n, n))
    edges = (draws < P[iu, ju]).astype(float)
    a[iu, ju] = edges
    a[ju, iu] = edges
    return a


def sample_features(spec: FeatureSpec, labels: np.ndarray, seed: int) -> np.ndarray:
    """Sample the n x p feature matrix X_ij = f_j(u_i)/sd_j + e_ij."""
    u = np.asarray(labels, dtype=float)
    if u.ndim != 1:
        raise ValueError("labels must be a 1-d vector")
    n = u.size
    sds = spec.component_sds()
    x = np.zeros((n, spec.p))
    for j, comp in enumerate(spec.components):
        if comp == "gaussian-noise":
            continue  # deterministic part is 0
        x[:, j] = eval_component(comp, u) / sds[j]
    if spec.sigma > 0:
        rng = _rng.derive_rng(seed, _rng.FEATURE_NOISE)
        x += spec.sigma * rng.standard_normal((n, spec.p))
    return x


def validate_adjacency(A: np.ndarray) -> np.ndarray:
    """Check symmetry, zero diagonal, and 0/1 entries; return as float array."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.ndim != 2 or A.shape != (n, n):
        raise ValueError("adjacency matrix must be square")
    if not np.array_equal(A, A.T):
        raise ValueError("adjacency matrix must be symmetric")
    if np.any(np.diag(A) != 0):
        raise ValueError("adjacency matrix must have a zero diagonal")
    if not np.all((A == 0) | (A == 1)):
        raise ValueError("adjacency entries must be 0 or 1")
    return A
