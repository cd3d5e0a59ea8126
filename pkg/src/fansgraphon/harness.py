"""Experiment orchestration: simulation, method dispatch, benchmark and
sweep runners, and link-prediction runs.

Per-trial seeds derive from (master seed, trial purpose, graphon index,
trial index), so trials can run on any number of worker threads and still
produce byte-identical outputs.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import _rng
from .baselines import SasConfig, UsvtConfig, sas_estimate, usvt_estimate
from .dissimilarity import TieBreakConfig, combine, d0_hat, s_hat
from .errors import ConfigError
from .estimator import EstimatorConfig, fans_estimate, neighborhoods, nbs_estimate, smooth
from .evaluation import loo_link_predict, mse_mae, paired_t_test, roc_auc
from .features import FeatureSpec
from .graphons import GraphonSpec, sbm_block_count
from .io import save_edge_list, save_matrix_csv, save_roc_csv
from .sampling import compute_P, sample_adjacency, sample_features, sample_labels
from .selection import CvConfig, ScreenConfig, cross_validate, screen_features

GRAPHON_ALIASES = {
    "g0": {"kind": "uniform-sum"},
    "g1": {"kind": "sbm", "blocks": "auto"},
    "g2": {"kind": "sine"},
    "g3": {"kind": "logistic-distance"},
    "g4": {"kind": "oscillating"},
}


def resolve_graphon(spec, n: int) -> GraphonSpec:
    """Accept a GraphonSpec, an alias string (g0..g4 or a kind), or a dict.

    An sbm block count of 'auto' becomes floor(log n) for the given n.
    """
    if isinstance(spec, GraphonSpec):
        return spec
    if isinstance(spec, str):
        if spec in GRAPHON_ALIASES:
            spec = dict(GRAPHON_ALIASES[spec])
        else:
            spec = {"kind": spec, "blocks": "auto"} if spec == "sbm" else {"kind": spec}
    if not isinstance(spec, dict):
        raise ConfigError(f"cannot interpret graphon spec {spec!r}")
    spec = dict(spec)
    if spec.get("blocks") == "auto":
        spec["blocks"] = sbm_block_count(n)
    return GraphonSpec.from_dict(spec)


def _normalize_method(m) -> dict:
    if isinstance(m, str):
        m = {"name": m}
    m = dict(m)
    name = m.get("name")
    if name not in ("nbs", "fans", "usvt", "sas"):
        raise ConfigError(f"unknown method {name!r}")
    m.setdefault("c0", 1.0)
    if name == "fans":
        m.setdefault("lambda", "cv")
        m.setdefault("tie", True)
        m.setdefault("screen", True)
    if name == "usvt":
        m.setdefault("eta", 0.01)
    if name == "sas":
        m.setdefault("bins", None)
    return m


@dataclass
class ExperimentConfig:
    """Resolved settings for a benchmark/sweep/linkpred run."""

    graphons: list
    n: int = 200
    trials: int = 100
    methods: list = field(default_factory=lambda: [{"name": "nbs"}, {"name": "fans"}])
    features: FeatureSpec | None = None
    seed: int = 0
    out: Path = Path("results")
    threads: int = 0  # 0 = machine default
    cv_grid: tuple = (0.0, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0)
    cv_repeats: int = 10
    cv_fraction: float = 0.10
    screen_threshold: float = 0.03
    sweep_lambdas: tuple = ()
    sweep_sigmas: tuple = (0.0,)
    linkpred_pairs: object = None  # None (default subsample), 'all', or a count
    linkpred_mode: str = "shared"

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        self.methods = [_normalize_method(m) for m in self.methods]
        self.out = Path(self.out)
        if not isinstance(self.graphons, (list, tuple)):
            self.graphons = [self.graphons]
        self.graphons = list(self.graphons)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        graphons = d.pop("graphons", None)
        if graphons is None:
            g = d.pop("graphon", None)
            if g is None:
                raise ConfigError("config needs a 'graphon' or 'graphons' entry")
            graphons = [g]
        feats = d.pop("features", None)
        fspec = FeatureSpec.from_dict(feats) if feats is not None else None
        cv = d.pop("cv", {}) or {}
        sweep = d.pop("sweep", {}) or {}
        lp = d.pop("linkpred", {}) or {}
        kwargs = dict(
            graphons=graphons,
            features=fspec,
            cv_grid=tuple(cv.get("grid", cls.cv_grid)),
            cv_repeats=int(cv.get("repeats", cls.cv_repeats)),
            cv_fraction=float(cv.get("fraction", cls.cv_fraction)),
            sweep_lambdas=tuple(sweep.get("lambdas", ())),
            sweep_sigmas=tuple(sweep.get("sigmas", (0.0,))),
            linkpred_pairs=lp.get("pairs", None),
            linkpred_mode=lp.get("mode", "shared"),
        )
        known = {"n", "trials", "methods", "seed", "out", "threads", "screen_threshold"}
        for key in known:
            if key in d:
                kwargs[key] = d.pop(key)
        if d:
            raise ConfigError(f"unknown config keys: {sorted(d)}")
        return cls(**kwargs)

    @classmethod
    def from_yaml(cls, path) -> "ExperimentConfig":
        data = yaml.safe_load(Path(path).read_text())
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a mapping")
        return cls.from_dict(data)

    def resolved_dict(self) -> dict:
        return {
            "graphons": [g.to_dict() if isinstance(g, GraphonSpec) else g for g in self.graphons],
            "n": self.n,
            "trials": self.trials,
            "methods": self.methods,
            "features": self.features.to_dict() if self.features else None,
            "seed": self.seed,
            "out": str(self.out),
            "threads": self.threads,
            "cv": {"grid": list(self.cv_grid), "repeats": self.cv_repeats, "fraction": self.cv_fraction},
            "screen_threshold": self.screen_threshold,
            "sweep": {"lambdas": list(self.sweep_lambdas), "sigmas": list(self.sweep_sigmas)},
            "linkpred": {"pairs": self.linkpred_pairs, "mode": self.linkpred_mode},
        }

    def header_comments(self) -> list[str]:
        return [
            "config: " + json.dumps(self.resolved_dict(), sort_keys=True, default=str),
            f"seed: {self.seed}",
        ]


def graphon_label(g) -> str:
    if isinstance(g, str):
        return g
    if isinstance(g, GraphonSpec):
        return g.kind
    return str(g.get("kind", g))


def simulate_dataset(gspec: GraphonSpec, fspec: FeatureSpec | None, n: int, seed: int):
    """One synthetic draw: (labels, P, A, X or None)."""
    labels = sample_labels(n, seed)
    p = compute_P(gspec, labels)
    a = sample_adjacency(p, seed)
    x = sample_features(fspec, labels, seed) if fspec is not None else None
    return labels, p, a, x


def fit_method(method: dict, A: np.ndarray, X: np.ndarray | None, seed: int, cfg: ExperimentConfig):
    """Fit one configured method; returns (p_hat, lambda_used or nan)."""
    name = method["name"]
    c0 = float(method.get("c0", 1.0))
    if name == "nbs":
        return nbs_estimate(A, c0=c0), float("nan")
    if name == "usvt":
        return usvt_estimate(A, UsvtConfig(eta=float(method["eta"]))), float("nan")
    if name == "sas":
        bins = method.get("bins")
        sas_cfg = SasConfig(bins=int(bins)) if bins else None
        return sas_estimate(A, sas_cfg), float("nan")

    # fans
    tie = bool(method.get("tie", True))
    x_used = X
    if method.get("screen", True) and X is not None:
        kept, _ = screen_features(A, X, ScreenConfig(threshold=cfg.screen_threshold))
        x_used = X[:, kept] if kept.size else None
    lam = method.get("lambda", "cv")
    if isinstance(lam, str) and lam == "cv":
        if x_used is None:
            lam = 0.0
        else:
            cv = CvConfig(grid=cfg.cv_grid, repeats=cfg.cv_repeats, fraction=cfg.cv_fraction, seed=seed)
            lam, _ = cross_validate(A, x_used, cv, c0=c0, tie_correction=tie)
    lam = float(lam)
    est = EstimatorConfig(lam=lam, c0=c0, tie_correction=tie, seed=seed)
    return fans_estimate(A, x_used if lam > 0 else x_used, est), lam


@dataclass
class RunResult:
    trial_rows: list
    summary_rows: list
    failures: list
    files: dict


def _trial_worker(cfg: ExperimentConfig, g_idx: int, trial: int):
    gname = graphon_label(cfg.graphons[g_idx])
    seed_t = _rng.derive_seed(cfg.seed, _rng.TRIAL, g_idx, trial)
    gspec = resolve_graphon(cfg.graphons[g_idx], cfg.n)
    _, p_true, a, x = simulate_dataset(gspec, cfg.features, cfg.n, seed_t)
    rows = []
    for method in cfg.methods:
        p_hat, lam = fit_method(method, a, x, seed_t, cfg)
        rep = mse_mae(p_hat, p_true, method=method["name"], seed=seed_t)
        rows.append(
            {
                "graphon": gname,
                "method": method["name"],
                "trial": trial,
                "seed": seed_t,
                "n": cfg.n,
                "lambda": lam,
                "mse": rep.mse,
                "mae": rep.mae,
            }
        )
    return rows


def _run_trials(cfg: ExperimentConfig):
    """Run all (graphon, trial) jobs, collecting rows and failures in a
    deterministic order regardless of worker count."""
    jobs = [(g, t) for g in range(len(cfg.graphons)) for t in range(cfg.trials)]
    workers = cfg.threads if cfg.threads and cfg.threads > 0 else None
    results: dict = {}
    failures = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {(g, t): pool.submit(_trial_worker, cfg, g, t) for g, t in jobs}
    for (g, t), fut in futures.items():
        try:
            results[(g, t)] = fut.result()
        except Exception as exc:  # noqa: BLE001 - trial failures are recorded, not fatal
            failures.append(
                {
                    "graphon": graphon_label(cfg.graphons[g]),
                    "trial": t,
                    "seed": _rng.derive_seed(cfg.seed, _rng.TRIAL, g, t),
                    "error": f"{type(exc).__name__}: {exc}",
                }
            )
    rows = []
    for key in sorted(results):
        rows.extend(results[key])
    return rows, failures


def _write_csv(path, fieldnames, rows, comments):
    with open(path, "w") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write(",".join(fieldnames) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(row[k]) for k in fieldnames) + "\n")


def _format_cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _standard_error(values: np.ndarray) -> float:
    if values.size < 2:
        return float("nan")
    return float(values.std(ddof=1) / math.sqrt(values.size))


def run_benchmark(cfg: ExperimentConfig) -> RunResult:
    """Reproduce the method-comparison table: per-trial metric rows plus a
    per-(graphon, method) summary with the fans-vs-nbs paired p-value."""
    cfg.out.mkdir(parents=True, exist_ok=True)
    rows, failures = _run_trials(cfg)

    summary = []
    by_key: dict = {}
    for row in rows:
        by_key.setdefault((row["graphon"], row["method"]), []).append(row)
    for (gname, method), group in by_key.items():
        mses = np.array([r["mse"] for r in group])
        maes = np.array([r["mae"] for r in group])
        p_val = float("nan")
        if method == "fans" and (gname, "nbs") in by_key:
            nbs_group = by_key[(gname, "nbs")]
            nbs_by_trial = {r["trial"]: r["mse"] for r in nbs_group}
            common = [r["trial"] for r in group if r["trial"] in nbs_by_trial]
            if len(common) >= 2:
                fans_mse = np.array([mse for r in group if r["trial"] in nbs_by_trial for mse in [r["mse"]]])
                nbs_mse = np.array([nbs_by_trial[t] for t in common])
                p_val = paired_t_test(fans_mse, nbs_mse)
        summary.append(
            {
                "graphon": gname,
                "method": method,
                "trials": len(group),
                "mean_mse": float(mses.mean()),
                "se_mse": _standard_error(mses),
                "mean_mae": float(maes.mean()),
                "se_mae": _standard_error(maes),
                "p_vs_nbs": p_val,
            }
        )

    comments = cfg.header_comments()
    trials_path = cfg.out / "trials.csv"
    summary_path = cfg.out / "summary.csv"
    _write_csv(
        trials_path,
        ["graphon", "method", "trial", "seed", "n", "lambda", "mse", "mae"],
        rows,
        comments,
    )
    _write_csv(
        summary_path,
        ["graphon", "method", "trials", "mean_mse", "se_mse", "mean_mae", "se_mae", "p_vs_nbs"],
        summary,
        comments,
    )
    files = {"trials": trials_path, "summary": summary_path}
    if failures:
        failures_path = cfg.out / "failures.csv"
        _write_csv(failures_path, ["graphon", "trial", "seed", "error"], failures, comments)
        files["failures"] = failures_path
    return RunResult(trial_rows=rows, summary_rows=summary, failures=failures, files=files)


def _sweep_worker(cfg: ExperimentConfig, g_idx: int, sigma: float, trial: int):
    if cfg.features is None:
        raise ConfigError("sweep requires a feature spec")
    gname = graphon_label(cfg.graphons[g_idx])
    gspec = resolve_graphon(cfg.graphons[g_idx], cfg.n)
    fspec = FeatureSpec(
        components=cfg.features.components,
        sigma=float(sigma),
        standardized=cfg.features.standardized,
    )
    sig_key = int(round(sigma * 1e6))
    seed_t = _rng.derive_seed(cfg.seed, _rng.TRIAL, g_idx, sig_key, trial)
    _, p_true, a, x = simulate_dataset(gspec, fspec, cfg.n, seed_t)

    tie = TieBreakConfig(enabled=True, seed=seed_t)
    d0sq = d0_hat(a, tie)
    ssq = s_hat(x)
    out = []
    for lam in cfg.sweep_lambdas:
        p_hat = smooth(a, neighborhoods(combine(d0sq, ssq, float(lam)), 1.0))
        rep = mse_mae(p_hat, p_true)
        out.append({"graphon": gname, "sigma": float(sigma), "lambda": float(lam), "mse": rep.mse})
    return out


def run_lambda_sweep(cfg: ExperimentConfig) -> RunResult:
    """Mean MSE against the feature weight for each (graphon, sigma)."""
    if not cfg.sweep_lambdas:
        raise ConfigError("sweep config needs a nonempty lambda grid")
    cfg.out.mkdir(parents=True, exist_ok=True)
    jobs = [
        (g, s, t)
        for g in range(len(cfg.graphons))
        for s in cfg.sweep_sigmas
        for t in range(cfg.trials)
    ]
    workers = cfg.threads if cfg.threads and cfg.threads > 0 else None
    results: dict = {}
    failures = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {job: pool.submit(_sweep_worker, cfg, *job) for job in jobs}
    for job, fut in futures.items():
        try:
            results[job] = fut.result()
        except Exception as exc:  # noqa: BLE001
            failures.append(
                {
                    "graphon": graphon_label(cfg.graphons[job[0]]),
                    "trial": job[2],
                    "seed": _rng.derive_seed(cfg.seed, _rng.TRIAL, job[0], int(round(job[1] * 1e6)), job[2]),
                    "error": f"{type(exc).__name__}: {exc}",
                }
            )

    acc: dict = {}
    for key in sorted(results):
        for row in results[key]:
            acc.setdefault((row["graphon"], row["sigma"], row["lambda"]), []).append(row["mse"])
    rows = [
        {
            "graphon": g,
            "sigma": s,
            "lambda": lam,
            "mean_mse": float(np.mean(v)),
            "se_mse": _standard_error(np.asarray(v)),
            "trials": len(v),
        }
        for (g, s, lam), v in acc.items()
    ]
    comments = cfg.header_comments()
    sweep_path = cfg.out / "sweep.csv"
    _write_csv(sweep_path, ["graphon", "sigma", "lambda", "mean_mse", "se_mse", "trials"], rows, comments)
    files = {"sweep": sweep_path}
    if failures:
        failures_path = cfg.out / "failures.csv"
        _write_csv(failures_path, ["graphon", "trial", "seed", "error"], failures, comments)
        files["failures"] = failures_path
    return RunResult(trial_rows=rows, summary_rows=rows, failures=failures, files=files)


def run_simulate(cfg: ExperimentConfig) -> RunResult:
    """Write one simulated dataset (edge list, truth, labels, features)."""
    cfg.out.mkdir(parents=True, exist_ok=True)
    gspec = resolve_graphon(cfg.graphons[0], cfg.n)
    seed_t = _rng.derive_seed(cfg.seed, _rng.TRIAL, 0, 0)
    labels, p_true, a, x = simulate_dataset(gspec, cfg.features, cfg.n, seed_t)
    comments = cfg.header_comments()
    files = {}
    save_edge_list(cfg.out / "edges.txt", a, comments)
    files["edges"] = cfg.out / "edges.txt"
    save_matrix_csv(cfg.out / "p_true.csv", p_true, comments)
    files["p_true"] = cfg.out / "p_true.csv"
    save_matrix_csv(cfg.out / "labels.csv", labels[:, None], comments)
    files["labels"] = cfg.out / "labels.csv"
    if x is not None:
        save_matrix_csv(cfg.out / "features.csv", x, comments)
        files["features"] = cfg.out / "features.csv"
    return RunResult(trial_rows=[], summary_rows=[], failures=[], files=files)


def run_linkpred(cfg: ExperimentConfig, A: np.ndarray | None = None, X: np.ndarray | None = None) -> RunResult:
    """Leave-one-out link prediction with ROC/AUC output.

    Without an explicit adjacency matrix a dataset is simulated from the
    configured graphon.
    """
    cfg.out.mkdir(parents=True, exist_ok=True)
    seed_t = _rng.derive_seed(cfg.seed, _rng.TRIAL, 0, 0)
    if A is None:
        gspec = resolve_graphon(cfg.graphons[0], cfg.n)
        _, _, A, X = simulate_dataset(gspec, cfg.features, cfg.n, seed_t)

    method = next((m for m in cfg.methods if m["name"] == "fans"), _normalize_method("fans"))
    tie = bool(method.get("tie", True))
    c0 = float(method.get("c0", 1.0))
    x_used = X
    if method.get("screen", True) and X is not None:
        kept, _ = screen_features(A, X, ScreenConfig(threshold=cfg.screen_threshold))
        x_used = X[:, kept] if kept.size else None
    lam = method.get("lambda", "cv")
    if isinstance(lam, str) and lam == "cv":
        if x_used is None:
            lam = 0.0
        else:
            cv = CvConfig(grid=cfg.cv_grid, repeats=cfg.cv_repeats, fraction=cfg.cv_fraction, seed=seed_t)
            lam, _ = cross_validate(A, x_used, cv, c0=c0, tie_correction=tie)
    est = EstimatorConfig(lam=float(lam), c0=c0, tie_correction=tie, seed=seed_t)

    pairs_req = cfg.linkpred_pairs
    if isinstance(pairs_req, int):
        rng = _rng.derive_rng(cfg.seed, _rng.PAIR_SAMPLE)
        iu, ju = np.triu_indices(A.shape[0], k=1)
        take = min(pairs_req, iu.size)
        chosen = np.sort(rng.choice(iu.size, size=take, replace=False))
        pairs_req = np.column_stack([iu[chosen], ju[chosen]])
    pairs, scores = loo_link_predict(A, x_used, est, pairs=pairs_req, mode=cfg.linkpred_mode)
    labels = A[pairs[:, 0], pairs[:, 1]].astype(int)
    curve = roc_auc(scores, labels)

    comments = cfg.header_comments() + [f"lambda: {float(lam)!r}"]
    scores_path = cfg.out / "linkpred_scores.csv"
    roc_path = cfg.out / "roc.csv"
    _write_csv(
        scores_path,
        ["i", "j", "score", "label"],
        [
            {"i": int(i), "j": int(j), "score": float(s), "label": int(l)}
            for (i, j), s, l in zip(pairs, scores, labels)
        ],
        comments,
    )
    save_roc_csv(roc_path, curve, comments)
    summary = [{"auc": curve.auc, "pairs": len(scores), "lambda": float(lam)}]
    return RunResult(
        trial_rows=[],
        summary_rows=summary,
        failures=[],
        files={"scores": scores_path, "roc": roc_path},
    )
