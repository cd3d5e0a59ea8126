"""Hot inner kernels for the pairwise max-dissimilarity computation.

Every kernel exists twice: a numba @njit version and a pure-numpy
fallback. The active backend is chosen at import time; setting the env
variable FANSGRAPHON_DISABLE_NUMBA=1 forces the numpy path (it is also
used automatically when numba is unavailable). Both paths produce
bit-identical output; benchmarks/bench_kernels.py compares their speed.

Kernels operate on Gram matrices: with G = M @ M.T,
<M_i - M_j, M_k> == G[i,k] - G[j,k], so the max over k is a row-vs-row
scan of G.
"""

import os

import numpy as np

_env = os.environ.get("FANSGRAPHON_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _env in ("1", "true", "yes", "on")

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not _DISABLED


def backend() -> str:
    """Name of the active kernel backend: 'numba' or 'numpy'."""
    return "numba" if USE_NUMBA else "numpy"


def _max_absdiff_numpy(G: np.ndarray) -> np.ndarray:
    """M[i,j] = max_{k != i,j} |G[i,k] - G[j,k]|; zero diagonal."""
    n = G.shape[0]
    out = np.empty((n, n))
    diag = np.arange(n)
    for i in range(n):
        v = np.abs(G[i][None, :] - G)  # rows j, cols k
        v[:, i] = -np.inf
        v[diag, diag] = -np.inf
        out[i] = v.max(axis=1)
    out[diag, diag] = 0.0
    return out


def _max_absdiff_mod_numpy(G: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Like _max_absdiff_numpy but with the pair-exclusion correction.

    M[i,j] = max_{k != i,j} |G[i,k] - G[j,k] + B[j,i]*B[k,i] - B[i,j]*B[k,j]|,
    which equals the scan of inner products summed over coordinates m not in
    {i, j}; the entry (i,j) therefore never reads B[i,j].
    """
    n = G.shape[0]
    out = np.empty((n, n))
    diag = np.arange(n)
    for i in range(n):
        v = np.abs(G[i][None, :] - G + np.outer(B[:, i], B[:, i]) - B[i, :][:, None] * B.T)
        v[:, i] = -np.inf
        v[diag, diag] = -np.inf
        out[i] = v.max(axis=1)
    out[diag, diag] = 0.0
    return out


def _max_absdiff_mod_rows_numpy(G: np.ndarray, B: np.ndarray, i: int, j: int) -> np.ndarray:
    """Rows i and j of _max_absdiff_mod_numpy(G, B), shape (2, n)."""
    n = G.shape[0]
    diag = np.arange(n)
    out = np.empty((2, n))
    for pos, a in enumerate((i, j)):
        v = np.abs(G[a][None, :] - G + np.outer(B[:, a], B[:, a]) - B[a, :][:, None] * B.T)
        v[:, a] = -np.inf
        v[diag, diag] = -np.inf
        out[pos] = v.max(axis=1)
        out[pos, a] = 0.0
    return out


if HAS_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def _max_absdiff_numba(G):
        n = G.shape[0]
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                best = -np.inf
                for k in range(n):
                    if k == i or k == j:
                        continue
                    v = abs(G[i, k] - G[j, k])
                    if v > best:
                        best = v
                out[i, j] = best
                out[j, i] = best
        return out

    @numba.njit(cache=True, nogil=True)
    def _max_absdiff_mod_numba(G, B):
        n = G.shape[0]
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                best = -np.inf
                for k in range(n):
                    if k == i or k == j:
                        continue
                    v = abs(G[i, k] - G[j, k] + B[j, i] * B[k, i] - B[i, j] * B[k, j])
                    if v > best:
                        best = v
                out[i, j] = best
                out[j, i] = best
        return out

    @numba.njit(cache=True, nogil=True)
    def _max_absdiff_mod_rows_numba(G, B, i, j):
        n = G.shape[0]
        out = np.zeros((2, n))
        rows = (i, j)
        for pos in range(2):
            a = rows[pos]
            for b in range(n):
                if b == a:
                    continue
                best = -np.inf
                for k in range(n):
                    if k == a or k == b:
                        continue
                    v = abs(G[a, k] - G[b, k] + B[b, a] * B[k, a] - B[a, b] * B[k, b])
                    if v > best:
                        best = v
                out[pos, b] = best
        return out


def max_absdiff(G: np.ndarray) -> np.ndarray:
    G = np.ascontiguousarray(G, dtype=np.float64)
    if USE_NUMBA:
        return _max_absdiff_numba(G)
    return _max_absdiff_numpy(G)


def max_absdiff_mod(G: np.ndarray, B: np.ndarray) -> np.ndarray:
    G = np.ascontiguousarray(G, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    if USE_NUMBA:
        return _max_absdiff_mod_numba(G, B)
    return _max_absdiff_mod_numpy(G, B)


def max_absdiff_mod_rows(G: np.ndarray, B: np.ndarray, i: int, j: int) -> np.ndarray:
    G = np.ascontiguousarray(G, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    if USE_NUMBA:
        return _max_absdiff_mod_rows_numba(G, B, i, j)
    return _max_absdiff_mod_rows_numpy(G, B, i, j)
