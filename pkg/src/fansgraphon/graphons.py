"""Graphon specifications and evaluation.

A graphon is a symmetric function w:[0,1]^2 -> [0,1] that drives edge
probabilities. The built-in catalog:

  uniform-sum        w(u,v) = (u+v)/2
  sbm                K-block model: k/(K+1) inside block k, 0.3/(K+1) across
  sine               0.5*sin(5*pi*(u+v-1) + 1) + 0.5
  logistic-distance  1 - 1/(1 + exp(15*(0.8*|u-v|)^(4/5) - 0.1))
  oscillating        (u^2+v^2)*cos(1/(u^2+v^2))/3 + 0.15, value 0.15 at (0,0)
  constant           fixed level c
  piecewise-constant breakpoints + symmetric value table
  custom             callable registered via register_graphon

Block lookups use left-closed intervals [x_b, x_{b+1}), with u = 1 assigned
to the last block.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

BUILTIN_KINDS = (
    "uniform-sum",
    "sbm",
    "sine",
    "logistic-distance",
    "oscillating",
    "constant",
    "piecewise-constant",
    "custom",
)

_CUSTOM_GRAPHONS: dict = {}


def register_graphon(name: str, fn) -> None:
    """Register a custom graphon callable fn(u, v) under `name`.

    The callable must accept numpy arrays, broadcast, be symmetric in its
    arguments, and return values in [0, 1].
    """
    _CUSTOM_GRAPHONS[name] = fn


@dataclass(frozen=True)
class GraphonSpec:
    """Declarative description of a graphon.

    Parameters beyond `kind`:
      sbm:                blocks (K >= 1)
      constant:           level in [0, 1]
      piecewise-constant: breakpoints (0 = x_0 < ... < x_B = 1) and a
                          symmetric B x B `values` table with entries in [0, 1]
      custom:             name previously passed to register_graphon
    """

    kind: str
    blocks: int | None = None
    level: float | None = None
    breakpoints: tuple = field(default=None)
    values: tuple = field(default=None)
    name: str | None = None

    def __post_init__(self):
        if self.kind not in BUILTIN_KINDS:
            raise ConfigError(f"unknown graphon kind {self.kind!r}")
        if self.kind == "sbm":
            if self.blocks is None or int(self.blocks) < 1:
                raise ConfigError("sbm graphon requires blocks >= 1")
        if self.kind == "constant":
            if self.level is None or not 0.0 <= self.level <= 1.0:
                raise ConfigError("constant graphon requires level in [0, 1]")
        if self.kind == "piecewise-constant":
            bp = np.asarray(self.breakpoints, dtype=float)
            if bp.ndim != 1 or bp.size < 2 or bp[0] != 0.0 or bp[-1] != 1.0:
                raise ConfigError("breakpoints must start at 0 and end at 1")
            if not np.all(np.diff(bp) > 0):
                raise ConfigError("breakpoints must be strictly increasing")
            vals = np.asarray(self.values, dtype=float)
            b = bp.size - 1
            if vals.shape != (b, b):
                raise ConfigError(f"values table must be {b}x{b}, got {vals.shape}")
            if not np.allclose(vals, vals.T):
                raise ConfigError("values table must be symmetric")
            if vals.min() < 0.0 or vals.max() > 1.0:
                raise ConfigError("values table entries must lie in [0, 1]")
            object.__setattr__(self, "breakpoints", tuple(bp.tolist()))
            object.__setattr__(self, "values", tuple(map(tuple, vals.tolist())))
        if self.kind == "custom" and not self.name:
            raise ConfigError("custom graphon requires a registered name")

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "sbm":
            d["blocks"] = int(self.blocks)
        elif self.kind == "constant":
            d["level"] = float(self.level)
        elif self.kind == "piecewise-constant":
            d["breakpoints"] = list(self.breakpoints)
            d["values"] = [list(row) for row in self.values]
        elif self.kind == "custom":
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GraphonSpec":
        d = dict(d)
        kind = d.pop("kind", None)
        if kind is None:
            raise ConfigError("graphon config needs a 'kind' entry")
        known = {"blocks", "level", "breakpoints", "values", "name"}
        bad = set(d) - known
        if bad:
            raise ConfigError(f"unknown graphon config keys: {sorted(bad)}")
        if "breakpoints" in d:
            d["breakpoints"] = tuple(d["breakpoints"])
        if "values" in d:
            d["values"] = tuple(map(tuple, d["values"]))
        return cls(kind=kind, **d)


def sbm_block_count(n: int) -> int:
    """Block count floor(log n) (natural log) used for the sbm at size n."""
    if n < 3:
        raise ValueError(f"need n >= 3 to derive a block count, got {n}")
    return max(1, int(np.floor(np.log(n))))


def _block_index(u, edges: np.ndarray) -> np.ndarray:
    """Left-closed block lookup: u in [edges[b], edges[b+1]) -> b, u=1 -> last."""
    b = np.searchsorted(edges, u, side="right") - 1
    return np.clip(b, 0, edges.size - 2)


def eval_graphon(spec: GraphonSpec, u, v):
    """Evaluate w(u, v). Accepts scalars or broadcasting arrays in [0, 1]."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(u < 0) or np.any(u > 1) or np.any(v < 0) or np.any(v > 1):
        raise ValueError("graphon arguments must lie in [0, 1]")

    if spec.kind == "uniform-sum":
        w = (u + v) / 2.0
    elif spec.kind == "sbm":
        k = int(spec.blocks)
        bu = np.minimum(np.floor(u * k), k - 1)
        bv = np.minimum(np.floor(v * k), k - 1)
        w = np.where(bu == bv, (bu + 1.0) / (k + 1.0), 0.3 / (k + 1.0))
    elif spec.kind == "sine":
        w = 0.5 * np.sin(5.0 * np.pi * (u + v - 1.0) + 1.0) + 0.5
    elif spec.kind == "logistic-distance":
        w = 1.0 - 1.0 / (1.0 + np.exp(15.0 * (0.8 * np.abs(u - v)) ** 0.8 - 0.1))
    elif spec.kind == "oscillating":
        r = u * u + v * v
        safe = np.where(r > 0.0, r, 1.0)  # value at r=0 is the limit, 0
        w = np.where(r > 0.0, r * np.cos(1.0 / safe) / 3.0, 0.0) + 0.15
    elif spec.kind == "constant":
        w = np.broadcast_to(np.float64(spec.level), np.broadcast_shapes(u.shape, v.shape)).copy()
    elif spec.kind == "piecewise-constant":
        edges = np.asarray(spec.breakpoints, dtype=float)
        table = np.asarray(spec.values, dtype=float)
        w = table[_block_index(u, edges), _block_index(v, edges)]
    else:  # custom
        fn = _CUSTOM_GRAPHONS.get(spec.name)
        if fn is None:
            raise ConfigError(f"custom graphon {spec.name!r} is not registered")
        w = np.asarray(fn(u, v), dtype=float)
        if np.any(w < 0.0) or np.any(w > 1.0):
            raise ConfigError(f"custom graphon {spec.name!r} returned values outside [0, 1]")

    if w.ndim == 0:
        return float(w)
    return w
