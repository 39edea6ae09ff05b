"""Sampled paths on a uniform grid and the calculus they need.

A path is stored as an ``(m + 1, N)`` array of node values.  Derivatives use
fourth-order finite-difference stencils (central in the interior, one-sided
at the two nodes nearest each end) and integrals use composite Simpson.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Callable

import numpy as np


class GridError(ValueError):
    pass


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    a: float
    b: float
    m: int
    h: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise GridError(f"grid ends must be finite, got a={self.a}, b={self.b}")
        if not self.a < self.b:
            raise GridError(f"need a < b, got a={self.a}, b={self.b}")
        if int(self.m) != self.m:
            raise GridError(f"m must be an integer, got {self.m}")
        if self.m < 8:
            raise GridError(f"m must be at least 8, got {self.m}")
        if self.m % 2:
            raise GridError(f"m must be even for Simpson quadrature, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "h", (self.b - self.a) / self.m)

    @property
    def n_nodes(self) -> int:
        return self.m + 1

    @property
    def t(self) -> np.ndarray:
        """Node times ``a + i*h``; the last node is pinned to ``b``."""
        t = self.a + self.h * np.arange(self.m + 1)
        t[-1] = self.b
        return t

    def simpson_weights(self) -> np.ndarray:
        w = np.full(self.m + 1, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        return w * (self.h / 3.0)


def make_grid(a: float, b: float, m: int) -> Grid:
    return Grid(float(a), float(b), m)


@dataclass(frozen=True, eq=False)
class Path:
    """Samples of a map ``[a, b] -> R^N``; ``samples[i, k] = gamma_k(t_i)``."""

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim == 1:
            s = s[:, None]
        if s.ndim != 2 or s.shape[0] != self.grid.n_nodes or s.shape[1] < 1:
            raise PathError(
                f"samples must have shape ({self.grid.n_nodes}, N), got {np.shape(self.samples)}"
            )
        bad = ~np.isfinite(s)
        if bad.any():
            i = int(np.argwhere(bad)[0, 0])
            raise PathError(f"non-finite sample at node {i} (t={self.grid.t[i]!r})")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def t(self) -> np.ndarray:
        return self.grid.t

    def __len__(self):
        return self.samples.shape[0]

    def __add__(self, other: Path) -> Path:
        return linear_combine(1.0, self, 1.0, other)

    def __sub__(self, other: Path) -> Path:
        return linear_combine(1.0, self, -1.0, other)

    def __mul__(self, c: float) -> Path:
        _check_compatible(self, self)
        return Path(self.grid, float(c) * self.samples)

    __rmul__ = __mul__

    def __neg__(self) -> Path:
        return self * -1.0


class FixedEndpointPath:
    """A path whose first and last samples are pinned to ``p`` and ``q``."""

    def __init__(self, path: Path, p=None, q=None):
        p = path.samples[0] if p is None else np.asarray(p, dtype=float).reshape(-1)
        q = path.samples[-1] if q is None else np.asarray(q, dtype=float).reshape(-1)
        if p.shape != (path.dim,) or q.shape != (path.dim,):
            raise PathError(f"endpoints must have length {path.dim}")
        s = path.samples.copy()
        s[0] = p
        s[-1] = q
        self.path = Path(path.grid, s)
        self.p = self.path.samples[0].copy()
        self.q = self.path.samples[-1].copy()

    def repin(self, path: Path) -> FixedEndpointPath:
        return FixedEndpointPath(path, self.p, self.q)

    @property
    def grid(self) -> Grid:
        return self.path.grid

    @property
    def samples(self) -> np.ndarray:
        return self.path.samples

    @property
    def dim(self) -> int:
        return self.path.dim


ENDPOINT_TOL = 1e-12


class Direction:
    """An endpoint-vanishing path, i.e. an admissible variation ``eta``.

    Endpoint values within ``ENDPOINT_TOL * max(1, sup|eta|)`` of zero count
    as rounding (``sin(pi)`` and the like) and are snapped to exact zero.
    With ``strict=False`` any endpoint values are zeroed.
    """

    def __init__(self, path: Path, *, strict: bool = True):
        ends = np.abs(np.concatenate([path.samples[0], path.samples[-1]]))
        scale = max(1.0, float(np.max(np.abs(path.samples))))
        if strict and np.any(ends > ENDPOINT_TOL * scale):
            raise PathError("direction must vanish at both endpoints")
        self.path = path if not np.any(ends) else zero_endpoints(path)

    @property
    def grid(self) -> Grid:
        return self.path.grid

    @property
    def samples(self) -> np.ndarray:
        return self.path.samples

    @property
    def dim(self) -> int:
        return self.path.dim


def zero_endpoints(path: Path) -> Path:
    s = path.samples.copy()
    s[0] = 0.0
    s[-1] = 0.0
    return Path(path.grid, s)


def path_from_fn(grid: Grid, dim: int, f: Callable[[float], object]) -> Path:
    """Sample ``f`` node by node.  ``f`` takes a scalar time."""
    t = grid.t
    s = np.empty((grid.n_nodes, dim))
    for i, ti in enumerate(t):
        v = np.asarray(f(float(ti)), dtype=float).reshape(-1)
        if v.shape != (dim,):
            raise PathError(f"f returned {v.shape[0]} values at node {i}, expected {dim}")
        if not np.all(np.isfinite(v)):
            raise PathError(f"non-finite sample at node {i} (t={ti!r})")
        s[i] = v
    return Path(grid, s)


def path_from_array_fn(grid: Grid, f: Callable[[np.ndarray], object]) -> Path:
    """Sample a vectorized ``f(t) -> (N, n)`` or ``(n,)``; faster than path_from_fn."""
    t = grid.t
    v = np.asarray(f(t), dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    elif v.shape[0] != len(t):
        v = v.T
    return Path(grid, np.broadcast_to(v, (len(t), v.shape[1])))


def _check_compatible(alpha: Path, beta: Path):
    if alpha.grid != beta.grid:
        raise PathError(f"grid mismatch: {alpha.grid} vs {beta.grid}")
    if alpha.dim != beta.dim:
        raise PathError(f"dimension mismatch: {alpha.dim} vs {beta.dim}")


# 4th-order first-derivative stencils, coefficients over 12h.
_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0])
_LEFT0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0])
_LEFT1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0])


def diff_array(f: np.ndarray, h: float) -> np.ndarray:
    """Apply the derivative stencils along axis 0 of a ``(m + 1, ...)`` array."""
    f = np.asarray(f, dtype=float)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    head = f[:5]
    tail = f[-5:][::-1]
    d[0] = np.tensordot(_LEFT0, head, axes=1) / (12.0 * h)
    d[1] = np.tensordot(_LEFT1, head, axes=1) / (12.0 * h)
    d[-1] = -np.tensordot(_LEFT0, tail, axes=1) / (12.0 * h)
    d[-2] = -np.tensordot(_LEFT1, tail, axes=1) / (12.0 * h)
    return d


def derivative(path: Path) -> Path:
    return Path(path.grid, diff_array(path.samples, path.grid.h))


def integrate(grid: Grid, values: np.ndarray) -> float:
    """Composite Simpson over the grid; ``values`` has one entry per node."""
    values = np.asarray(values, dtype=float)
    if values.shape[0] != grid.n_nodes:
        raise PathError(f"expected {grid.n_nodes} values, got {values.shape[0]}")
    # elementwise product then numpy's fixed pairwise sum: reproducible bit for bit
    return float(np.sum(grid.simpson_weights() * values))


def inner_product(alpha: Path, beta: Path) -> float:
    """L2 pairing ``int_a^b alpha(t) . beta(t) dt``."""
    _check_compatible(alpha, beta)
    return integrate(alpha.grid, np.sum(alpha.samples * beta.samples, axis=1))


def l2_norm(path: Path) -> float:
    return math.sqrt(max(inner_product(path, path), 0.0))


def linear_combine(c1: float, alpha: Path, c2: float, beta: Path) -> Path:
    _check_compatible(alpha, beta)
    return Path(alpha.grid, c1 * alpha.samples + c2 * beta.samples)


def sup_norm(path: Path, interior_only: bool = False) -> float:
    s = path.samples[1:-1] if interior_only else path.samples
    return float(np.max(np.linalg.norm(s, axis=1)))


def sup_distance(alpha: Path, beta: Path, interior_only: bool = False) -> float:
    return sup_norm(alpha - beta, interior_only)


# -- CSV ------------------------------------------------------------------


def write_path_csv(path: Path, dest, columns: list[str] | None = None):
    """Write ``t,x1..xN`` with shortest round-trip float formatting."""
    cols = columns or [f"x{k + 1}" for k in range(path.dim)]
    with open(dest, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", *cols])
        for ti, row in zip(path.t, path.samples):
            w.writerow([repr(float(ti)), *(repr(float(v)) for v in row)])


def read_path_csv(src) -> Path:
    """Parse a path CSV; the ``t`` column must be a uniform ascending grid."""
    src = FsPath(src)
    with open(src, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise PathError(f"{src}: empty file")
    header = [c.strip() for c in rows[0]]
    if len(header) < 2 or header[0] != "t":
        raise PathError(f"{src}:1: header must be 't,x1,...,xN'")
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise PathError(f"{src}:{lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            vals = [float(v) for v in row]
        except ValueError as exc:
            raise PathError(f"{src}:{lineno}: {exc}") from None
        if not all(math.isfinite(v) for v in vals):
            raise PathError(f"{src}:{lineno}: non-finite value")
        data.append(vals)
    arr = np.array(data)
    if arr.shape[0] < 9:
        raise PathError(f"{src}: need at least 9 rows, got {arr.shape[0]}")
    t = arr[:, 0]
    m = len(t) - 1
    if np.any(np.diff(t) <= 0):
        raise PathError(f"{src}: grid must be uniform ascending")
    try:
        grid = make_grid(t[0], t[-1], m)
    except GridError as exc:
        raise PathError(f"{src}: {exc}") from None
    if np.max(np.abs(t - grid.t)) > 1e-9 * max(1.0, abs(grid.b - grid.a)):
        raise PathError(f"{src}: grid must be uniform ascending")
    return Path(grid, arr[:, 1:])
