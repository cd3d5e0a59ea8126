"""Error metrics, paired testing, ROC/AUC, and leave-one-out link scoring."""

from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from . import _rng
from .dissimilarity import TieBreakConfig, combine, d0_mod, d0_mod_rows, s_hat
from .estimator import EstimatorConfig, neighborhood_size, neighborhoods, smooth
from .sampling import validate_adjacency

DEFAULT_PAIR_BUDGET = 2000


@dataclass(frozen=True)
class MetricReport:
    """Mean squared and absolute error of an estimate, with run context."""

    mse: float
    mae: float
    n: int
    method: str = ""
    seed: int | None = None


def mse_mae(P_hat: np.ndarray, P: np.ndarray, method: str = "", seed: int | None = None) -> MetricReport:
    """Entrywise errors averaged over all n^2 entries, diagonal included."""
    P_hat = np.asarray(P_hat, dtype=float)
    P = np.asarray(P, dtype=float)
    if P_hat.shape != P.shape or P_hat.ndim != 2:
        raise ValueError(f"shape mismatch: {P_hat.shape} vs {P.shape}")
    diff = P_hat - P
    return MetricReport(
        mse=float(np.mean(diff ** 2)),
        mae=float(np.mean(np.abs(diff))),
        n=P.shape[0],
        method=method,
        seed=seed,
    )


def paired_t_test(a, b) -> float:
    """One-sided paired t-test p-value for the alternative mean(a) < mean(b).

    Zero-variance differences degenerate to p = 0 (a strictly below b),
    p = 1 (strictly above), or p = 0.5 (identical sequences).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise ValueError("need two equal-length sequences with >= 2 entries")
    d = a - b
    sd = d.std(ddof=1)
    mean = d.mean()
    if sd == 0.0:
        if mean < 0:
            return 0.0
        if mean > 0:
            return 1.0
        return 0.5
    t = mean / (sd / np.sqrt(d.size))
    return float(scipy.stats.t.cdf(t, df=d.size - 1))


@dataclass(frozen=True)
class RocCurve:
    """Threshold-sweep ROC points (fpr, tpr) from (0,0) to (1,1) plus AUC."""

    points: np.ndarray = field(repr=False)
    auc: float


def roc_auc(scores, labels) -> RocCurve:
    """ROC curve and AUC; tied scores contribute 1/2 (rank statistic)."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be equal-length 1-d sequences")
    if not np.all((labels == 0) | (labels == 1)):
        raise ValueError("labels must be binary")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("both classes must be present")

    ranks = scipy.stats.rankdata(scores)  # midranks handle ties as 1/2
    auc = (ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_pos = pos[order].astype(float)
    distinct = np.flatnonzero(np.diff(sorted_scores)) if sorted_scores.size > 1 else np.array([], dtype=int)
    cut = np.concatenate([distinct, [sorted_scores.size - 1]])
    tp = np.cumsum(sorted_pos)[cut]
    fp = (cut + 1) - tp
    points = np.concatenate(
        [np.zeros((1, 2)), np.column_stack([fp / n_neg, tp / n_pos])]
    )
    return RocCurve(points=points, auc=float(auc))


def _resolve_pairs(A: np.ndarray, pairs, seed: int) -> np.ndarray:
    """Normalize the pair request to an (m, 2) array of i < j indices."""
    n = A.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    if isinstance(pairs, str) and pairs == "all":
        return np.column_stack([iu, ju])
    if pairs is None:
        total = iu.size
        if total <= DEFAULT_PAIR_BUDGET:
            return np.column_stack([iu, ju])
        rng = _rng.derive_rng(seed, _rng.PAIR_SAMPLE)
        edges = np.flatnonzero(A[iu, ju] > 0)
        if edges.size <= DEFAULT_PAIR_BUDGET:
            # keep every observed edge, fill the rest with non-edges
            non_edges = np.flatnonzero(A[iu, ju] == 0)
            fill = rng.choice(non_edges, size=DEFAULT_PAIR_BUDGET - edges.size, replace=False)
            chosen = np.sort(np.concatenate([edges, fill]))
        else:
            chosen = np.sort(rng.choice(total, size=DEFAULT_PAIR_BUDGET, replace=False))
        return np.column_stack([iu[chosen], ju[chosen]])
    arr = np.asarray(pairs, dtype=int)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("pairs must be an (m, 2) array of node indices")
    if np.any(arr[:, 0] == arr[:, 1]):
        raise ValueError("pairs must be off-diagonal")
    if arr.min() < 0 or arr.max() >= n:
        raise ValueError("pair indices out of range")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    return np.column_stack([lo, hi])


def _row_neighbors(row: np.ndarray, node: int, k: int) -> np.ndarray:
    """Neighbor indices for one dissimilarity row, self excluded."""
    r = row.copy()
    r[node] = np.inf
    q = np.partition(r, k - 1)[k - 1]
    mask = r <= q
    return np.flatnonzero(mask)


def loo_link_predict(
    A: np.ndarray,
    X: np.ndarray | None,
    cfg: EstimatorConfig,
    pairs=None,
    mode: str = "shared",
) -> tuple[np.ndarray, np.ndarray]:
    """Leave-one-out link scores using the pair-exclusion dissimilarity.

    Every requested pair (i, j) receives the smoothed estimate computed
    so that the dissimilarity entry (i, j) never reads A[i, j]. Two modes:

      shared  one dissimilarity matrix serves all pairs (fast, default);
              each pair's own entry is still independent of its A[i, j]
      strict  the full pipeline is recomputed per pair with coordinates
              {i, j} masked out everywhere, making the score exactly
              invariant to flipping A[i, j]

    Returns (pairs, scores) with pairs as an (m, 2) array, i < j.
    """
    A = validate_adjacency(A)
    n = A.shape[0]
    if n < 4:
        raise ValueError(f"need n >= 4, got n={n}")
    if cfg.lam > 0 and X is None:
        raise ValueError("lambda > 0 requires a feature matrix")
    if mode not in ("shared", "strict"):
        raise ValueError(f"unknown mode {mode!r}")

    wanted = _resolve_pairs(A, pairs, cfg.seed)
    ssq = s_hat(X) if X is not None else np.zeros((n, n))
    k = neighborhood_size(n, cfg.c0)

    if mode == "shared":
        d0sq = d0_mod(A, TieBreakConfig(enabled=cfg.tie_correction, seed=cfg.seed))
        p_hat = smooth(A, neighborhoods(combine(d0sq, ssq, cfg.lam), cfg.c0))
        return wanted, p_hat[wanted[:, 0], wanted[:, 1]]

    scores = np.empty(wanted.shape[0])
    for idx, (i, j) in enumerate(wanted):
        b = A.copy()
        b[:, i] = 0.0
        b[:, j] = 0.0
        tie = TieBreakConfig(
            enabled=cfg.tie_correction,
            seed=_rng.derive_seed(cfg.seed, _rng.LINKPRED_PAIR, i, j),
        )
        rows = d0_mod_rows(b, int(i), int(j), tie)
        row_i = rows[0] + cfg.lam * ssq[i]
        row_j = rows[1] + cfg.lam * ssq[j]
        n_i = _row_neighbors(row_i, int(i), k)
        n_j = _row_neighbors(row_j, int(j), k)
        scores[idx] = 0.5 * (A[n_i, j].mean() + A[i, n_j].mean())
    return wanted, scores
