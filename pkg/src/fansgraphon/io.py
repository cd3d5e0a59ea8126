"""File formats: edge lists, covariate tables, dense matrix CSV, ROC CSV,
and YAML (de)serialization of graphon/feature specs.

All writers accept comment lines (prefixed '#') so outputs can embed the
resolved configuration; all readers skip them.
"""

import csv
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError, ParseError
from .features import FeatureSpec
from .graphons import GraphonSpec

_MISSING_TOKENS = {"", "na", "nan", "?", "none", "null"}


def load_edge_list(path, n: int | None = None, one_based: bool = False) -> np.ndarray:
    """Read whitespace- or comma-separated node pairs into an adjacency matrix.

    Directed input is symmetrized by OR; self-loops are dropped and
    duplicates collapse. When n is omitted it becomes max index + 1.
    """
    pairs = []
    max_idx = -1
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.replace(",", " ").split()
            if len(tokens) != 2:
                raise ParseError(f"expected two node indices, got {raw.strip()!r}", lineno)
            try:
                i, j = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise ParseError(f"non-integer node index in {raw.strip()!r}", lineno) from None
            if one_based:
                i -= 1
                j -= 1
            if i < 0 or j < 0:
                raise ParseError(f"negative node index in {raw.strip()!r}", lineno)
            if n is not None and (i >= n or j >= n):
                raise ParseError(f"node index out of range (n={n}) in {raw.strip()!r}", lineno)
            max_idx = max(max_idx, i, j)
            if i != j:
                pairs.append((min(i, j), max(i, j)))
    size = n if n is not None else max_idx + 1
    a = np.zeros((max(size, 0), max(size, 0)))
    for i, j in set(pairs):
        a[i, j] = 1.0
        a[j, i] = 1.0
    return a


def save_edge_list(path, A: np.ndarray, comments: list[str] | None = None) -> None:
    """Write the upper-triangle edges of a 0/1 matrix, one '<i> <j>' per line."""
    iu, ju = np.triu_indices(A.shape[0], k=1)
    on = A[iu, ju] > 0
    with open(path, "w") as fh:
        for c in comments or []:
            fh.write(f"# {c}\n")
        for i, j in zip(iu[on], ju[on]):
            fh.write(f"{i} {j}\n")


def save_matrix_csv(path, M: np.ndarray, comments: list[str] | None = None) -> None:
    """Dense matrix as plain CSV, one row per line, no header."""
    with open(path, "w") as fh:
        for c in comments or []:
            fh.write(f"# {c}\n")
        for row in np.atleast_2d(np.asarray(M, dtype=float)):
            fh.write(",".join(repr(v) for v in row) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    """Read a dense CSV matrix written by save_matrix_csv."""
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError:
                raise ParseError(f"non-numeric matrix entry in {line!r}", lineno) from None
    if not rows:
        return np.zeros((0, 0))
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError("ragged rows in matrix file")
    return np.asarray(rows)


def save_roc_csv(path, curve, comments: list[str] | None = None) -> None:
    """ROC curve as two-column CSV (fpr,tpr) plus an AUC comment record."""
    with open(path, "w") as fh:
        for c in comments or []:
            fh.write(f"# {c}\n")
        fh.write(f"# auc = {curve.auc!r}\n")
        fh.write("fpr,tpr\n")
        for fpr, tpr in curve.points:
            fh.write(f"{fpr!r},{tpr!r}\n")


def load_covariates(path, schema: dict, impute: bool = False) -> tuple[np.ndarray, list[str]]:
    """Read a delimited covariate table into a numeric feature matrix.

    schema maps column names to one of 'ordinal', 'numeric', 'categorical'.
    Ordinal and numeric columns pass through as single columns; categorical
    columns expand to one 0/1 indicator per observed level (first-observed
    order). Header columns absent from the schema are ignored.

    Missing values abort the load unless impute=True, which fills them
    with the column mean (indicator-block means for categoricals).
    Returns (matrix, output column names).
    """
    for col, kind in schema.items():
        if kind not in ("ordinal", "numeric", "categorical"):
            raise ConfigError(f"unknown column kind {kind!r} for {col!r}")

    with open(path) as fh:
        raw_lines = [ln for ln in fh.read().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not raw_lines:
        raise ParseError("empty covariate file")
    if "," in raw_lines[0]:
        lines = [next(csv.reader([ln])) for ln in raw_lines]
    else:
        lines = [ln.split() for ln in raw_lines]
    header = [h.strip() for h in lines[0]]
    body = lines[1:]

    missing_cols = [c for c in schema if c not in header]
    if missing_cols:
        raise ConfigError(f"schema columns not in header: {missing_cols}")

    n = len(body)
    blocks: list[np.ndarray] = []
    names: list[str] = []
    flagged_rows: set[int] = set()

    for col in header:
        if col not in schema:
            continue
        kind = schema[col]
        pos = header.index(col)
        raw = []
        for r, row in enumerate(body):
            if pos >= len(row):
                raise ParseError(f"row has too few columns for {col!r}", r + 2)
            raw.append(row[pos].strip())
        is_missing = np.array([v.lower() in _MISSING_TOKENS for v in raw])
        flagged_rows.update(np.flatnonzero(is_missing).tolist())

        if kind in ("ordinal", "numeric"):
            vals = np.full(n, np.nan)
            for r, v in enumerate(raw):
                if is_missing[r]:
                    continue
                try:
                    vals[r] = float(v)
                except ValueError:
                    raise ParseError(f"non-numeric value {v!r} in column {col!r}", r + 2) from None
            block = vals[:, None]
            block_names = [col]
        else:
            levels: list[str] = []
            for r, v in enumerate(raw):
                if not is_missing[r] and v not in levels:
                    levels.append(v)
            if not levels:
                raise ParseError(f"column {col!r} has no observed levels")
            block = np.full((n, len(levels)), np.nan)
            for r, v in enumerate(raw):
                if is_missing[r]:
                    continue
                block[r] = 0.0
                block[r, levels.index(v)] = 1.0
            block_names = [f"{col}={lv}" for lv in levels]
        blocks.append(block)
        names.extend(block_names)

    x = np.hstack(blocks) if blocks else np.zeros((n, 0))
    if flagged_rows:
        if not impute:
            raise ValueError(
                f"missing values in rows {sorted(r + 1 for r in flagged_rows)}; "
                "pass impute=True to fill with column means"
            )
        col_means = np.nanmean(x, axis=0)
        nan_r, nan_c = np.where(np.isnan(x))
        x[nan_r, nan_c] = col_means[nan_c]
    return x, names


def save_graphon_yaml(path, spec: GraphonSpec) -> None:
    Path(path).write_text(yaml.safe_dump({"graphon": spec.to_dict()}, sort_keys=False))


def load_graphon_yaml(path) -> GraphonSpec:
    data = yaml.safe_load(Path(path).read_text())
    if not isinstance(data, dict) or "graphon" not in data:
        raise ConfigError("expected a top-level 'graphon' section")
    return GraphonSpec.from_dict(data["graphon"])


def save_features_yaml(path, spec: FeatureSpec) -> None:
    Path(path).write_text(yaml.safe_dump({"features": spec.to_dict()}, sort_keys=False))


def load_features_yaml(path) -> FeatureSpec:
    data = yaml.safe_load(Path(path).read_text())
    if not isinstance(data, dict) or "features" not in data:
        raise ConfigError("expected a top-level 'features' section")
    return FeatureSpec.from_dict(data["features"])
