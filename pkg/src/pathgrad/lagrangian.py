"""Lagrangians ``L(x, xdot, t)`` with first partials, and the action functional.

Evaluators are vectorized over nodes: ``x`` and ``xdot`` have shape ``(n, N)``,
``t`` has shape ``(n,)``; ``value`` returns ``(n,)`` and the two gradients
return ``(n, N)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .pathspace import Path, derivative, integrate

Evaluator = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)


class DomainError(ValueError):
    """Raised when a Lagrangian is evaluated where it is singular."""

    def __init__(self, reason: str, node: int | None = None, t: float | None = None):
        self.reason = reason
        self.node = node
        self.t = t
        where = "" if node is None else f" at node {node} (t={t!r})"
        super().__init__(f"{reason}{where}")


@dataclass(frozen=True)
class Guard:
    """Domain check: ``ok(x, xdot, t)`` is a boolean mask, ``reason`` names the failure."""

    reason: str
    ok: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class Lagrangian:
    dim: int
    value: Evaluator
    grad_x: Evaluator | None = None
    grad_xdot: Evaluator | None = None
    guards: tuple[Guard, ...] = ()
    name: str = "custom"
    partials_mode: str = field(init=False, default="analytic")

    def __post_init__(self):
        if (self.grad_x is None) != (self.grad_xdot is None):
            raise ValueError("supply both analytic partials or neither")
        if self.grad_x is None:
            object.__setattr__(self, "partials_mode", "finite_difference")
            object.__setattr__(self, "grad_x", _fd_partial(self.value, wrt=0))
            object.__setattr__(self, "grad_xdot", _fd_partial(self.value, wrt=1))

    def check_domain(self, x, xdot, t):
        x, xdot, t = _as_batch(x, xdot, t, self.dim)
        for g in self.guards:
            ok = np.asarray(g.ok(x, xdot, t), dtype=bool)
            if not ok.all():
                i = int(np.argmin(ok))
                raise DomainError(g.reason, i, float(t[i]))

    def __call__(self, x, xdot, t) -> np.ndarray:
        return self.value(*_as_batch(x, xdot, t, self.dim))

    def partials(self, x, xdot, t) -> tuple[np.ndarray, np.ndarray]:
        x, xdot, t = _as_batch(x, xdot, t, self.dim)
        return self.grad_x(x, xdot, t), self.grad_xdot(x, xdot, t)

    def scaled(self, c: float) -> Lagrangian:
        c = float(c)
        return Lagrangian(
            self.dim,
            lambda x, v, t: c * self.value(x, v, t),
            lambda x, v, t: c * self.grad_x(x, v, t),
            lambda x, v, t: c * self.grad_xdot(x, v, t),
            self.guards,
            f"{c!r}*{self.name}",
        )

    def __add__(self, other: Lagrangian) -> Lagrangian:
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return Lagrangian(
            self.dim,
            lambda x, v, t: self.value(x, v, t) + other.value(x, v, t),
            lambda x, v, t: self.grad_x(x, v, t) + other.grad_x(x, v, t),
            lambda x, v, t: self.grad_xdot(x, v, t) + other.grad_xdot(x, v, t),
            self.guards + other.guards,
            f"{self.name}+{other.name}",
        )


def _as_batch(x, xdot, t, dim):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    xdot = np.atleast_2d(np.asarray(xdot, dtype=float))
    if x.shape[1] != dim or xdot.shape != x.shape:
        raise ValueError(f"expected (n, {dim}) arrays, got {x.shape} and {xdot.shape}")
    t = np.broadcast_to(np.asarray(t, dtype=float), (x.shape[0],))
    return x, xdot, t


def _fd_partial(value: Evaluator, wrt: int) -> Evaluator:
    """Central differences of ``value`` in ``x`` (wrt=0) or ``xdot`` (wrt=1)."""

    def grad(x, xdot, t):
        args = [np.array(x, dtype=float), np.array(xdot, dtype=float)]
        base = args[wrt]
        out = np.empty_like(base)
        for k in range(base.shape[1]):
            step = FD_STEP * np.maximum(1.0, np.abs(base[:, k]))
            plus, minus = base.copy(), base.copy()
            plus[:, k] += step
            minus[:, k] -= step
            a = list(args)
            a[wrt] = plus
            fp = value(a[0], a[1], t)
            a[wrt] = minus
            fm = value(a[0], a[1], t)
            out[:, k] = (fp - fm) / ((plus[:, k] - minus[:, k]))
        return out

    return grad


def fd_partials(lag: Lagrangian, x, xdot, t) -> tuple[np.ndarray, np.ndarray]:
    x, xdot, t = _as_batch(x, xdot, t, lag.dim)
    return _fd_partial(lag.value, 0)(x, xdot, t), _fd_partial(lag.value, 1)(x, xdot, t)


def partials_check(lag: Lagrangian, x, xdot, t) -> float:
    """Largest absolute gap between the stored partials and central differences."""
    gx, gv = lag.partials(x, xdot, t)
    if lag.partials_mode == "finite_difference":
        return 0.0
    fx, fv = fd_partials(lag, x, xdot, t)
    return float(max(np.max(np.abs(gx - fx)), np.max(np.abs(gv - fv))))


def evaluate_along(lag: Lagrangian, path: Path):
    """Return ``(x, xdot, t)`` node arrays for ``path`` after the domain check."""
    if lag.dim != path.dim:
        raise ValueError(f"Lagrangian has dim {lag.dim}, path has dim {path.dim}")
    x = path.samples
    xdot = derivative(path).samples
    t = path.t
    lag.check_domain(x, xdot, t)
    return x, xdot, t


def action(lag: Lagrangian, path: Path) -> float:
    """``S(gamma) = int_a^b L(gamma, gamma', t) dt`` by composite Simpson."""
    x, xdot, t = evaluate_along(lag, path)
    return integrate(path.grid, lag.value(x, xdot, t))


# -- built-ins --------------------------------------------------------------


def _speed(v):
    return np.sqrt(np.sum(v * v, axis=1))


_SPEED_GUARD = Guard("zero speed", lambda x, v, t: _speed(v) > 0.0)


def euclidean_length(dim: int = 2) -> Lagrangian:
    return Lagrangian(
        dim,
        lambda x, v, t: _speed(v),
        lambda x, v, t: np.zeros_like(x),
        lambda x, v, t: v / _speed(v)[:, None],
        (_SPEED_GUARD,),
        "euclidean_length" if dim == 2 else f"euclidean_length_{dim}d",
    )


def hyperbolic_length() -> Lagrangian:
    """Upper half-plane length element ``|v| / y``."""

    def grad_x(x, v, t):
        g = np.zeros_like(x)
        g[:, 1] = -_speed(v) / x[:, 1] ** 2
        return g

    return Lagrangian(
        2,
        lambda x, v, t: _speed(v) / x[:, 1],
        grad_x,
        lambda x, v, t: v / (_speed(v) * x[:, 1])[:, None],
        (Guard("y <= 0", lambda x, v, t: x[:, 1] > 0.0), _SPEED_GUARD),
        "hyperbolic_length",
    )


def green_area() -> Lagrangian:
    """Signed area swept by the position vector, ``(x*ydot - xdot*y) / 2``."""
    return Lagrangian(
        2,
        lambda x, v, t: 0.5 * (x[:, 0] * v[:, 1] - v[:, 0] * x[:, 1]),
        lambda x, v, t: 0.5 * np.stack([v[:, 1], -v[:, 0]], axis=1),
        lambda x, v, t: 0.5 * np.stack([-x[:, 1], x[:, 0]], axis=1),
        (),
        "green_area",
    )


def projectile(g: float = 9.8) -> Lagrangian:
    g = float(g)
    if not math.isfinite(g):
        raise ValueError(f"g must be finite, got {g}")

    def grad_x(x, v, t):
        out = np.zeros_like(x)
        out[:, 1] = -g
        return out

    return Lagrangian(
        2,
        lambda x, v, t: 0.5 * np.sum(v * v, axis=1) - g * x[:, 1],
        grad_x,
        lambda x, v, t: v.copy(),
        (),
        f"projectile(g={g!r})",
    )


def oscillator() -> Lagrangian:
    return Lagrangian(
        1,
        lambda x, v, t: 0.5 * v[:, 0] ** 2 - 0.5 * x[:, 0] ** 2,
        lambda x, v, t: -x,
        lambda x, v, t: v.copy(),
        (),
        "oscillator",
    )


@dataclass(frozen=True, eq=False)
class DensityFn:
    """Joint density ``p(x, y)`` on ``[0, 1]^2``; ``p`` must broadcast over arrays."""

    p: Callable[[np.ndarray, np.ndarray], np.ndarray]
    y_nodes: int = 64
    name: str = "custom"

    def __post_init__(self):
        if self.y_nodes < 8 or self.y_nodes % 2:
            raise ValueError(f"y_nodes must be even and >= 8, got {self.y_nodes}")

    @property
    def y(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.y_nodes + 1)

    @property
    def y_weights(self) -> np.ndarray:
        w = np.full(self.y_nodes + 1, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        return w / (3.0 * self.y_nodes)

    def table(self, x: np.ndarray) -> np.ndarray:
        """``p(x_i, y_j)`` as an ``(len(x), y_nodes + 1)`` array."""
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(self.p(x[:, None], self.y[None, :]), (len(x), self.y_nodes + 1))

    def moments(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``(int p dy, int y p dy)`` at each ``x``."""
        pt = self.table(x)
        w = self.y_weights
        return np.sum(pt * w, axis=1), np.sum(pt * (self.y * w), axis=1)


def uniform_density(y_nodes: int = 64) -> DensityFn:
    return DensityFn(lambda x, y: np.ones(np.broadcast(x, y).shape), y_nodes, "uniform")


def bilinear_density(y_nodes: int = 64) -> DensityFn:
    """Unnormalized ``p(x, y) = 1 + x*y``."""
    return DensityFn(lambda x, y: 1.0 + x * y, y_nodes, "1+xy")


def squared_loss(density: DensityFn | None = None) -> Lagrangian:
    """``L(q, qdot, x) = int_0^1 (q - y)^2 p(x, y) dy``; time plays the role of x."""
    density = density or uniform_density()
    y, w = density.y, density.y_weights

    def value(q, v, x):
        r = q[:, :1] - y[None, :]
        return np.sum(r * r * density.table(x) * w, axis=1)

    def grad_q(q, v, x):
        r = q[:, :1] - y[None, :]
        return (2.0 * np.sum(r * density.table(x) * w, axis=1))[:, None]

    return Lagrangian(1, value, grad_q, lambda q, v, x: np.zeros_like(v), (), f"squared_loss({density.name})")


_BUILTINS: dict[str, Callable[..., Lagrangian]] = {
    "euclidean_length": lambda **kw: euclidean_length(2),
    "hyperbolic_length": lambda **kw: hyperbolic_length(),
    "euclidean_length_3d": lambda **kw: euclidean_length(3),
    "green_area": lambda **kw: green_area(),
    "projectile": lambda g=9.8, **kw: projectile(g),
    "oscillator": lambda **kw: oscillator(),
    "squared_loss": lambda density=None, **kw: squared_loss(density),
}

# scenario ids resolve to the Lagrangian whose action the scenario studies
SCENARIO_LAGRANGIANS = {
    "euclidean": "euclidean_length",
    "hyperbolic": "hyperbolic_length",
    "spherical": "euclidean_length_3d",
    "isoperimetric": "green_area",
    "projectile": "projectile",
    "oscillator": "oscillator",
    "regression": "squared_loss",
}


def builtin_names() -> Sequence[str]:
    return tuple(_BUILTINS) + tuple(k for k in SCENARIO_LAGRANGIANS if k not in _BUILTINS)


def builtin(name: str, **params) -> Lagrangian:
    key = SCENARIO_LAGRANGIANS.get(name, name)
    try:
        factory = _BUILTINS[key]
    except KeyError:
        raise KeyError(f"unknown Lagrangian {name!r}; choose from {', '.join(builtin_names())}") from None
    return factory(**params)
