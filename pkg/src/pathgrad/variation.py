"""The Euler-Lagrange path as the gradient of the action.

``el_path`` builds ``EL(t) = dL/dx - d/dt dL/dxdot`` from first partials only,
differentiating the sampled momentum path with the grid stencils.  The pairing
``<EL, eta>`` against an endpoint-vanishing direction must reproduce the
directional derivative of the action, which ``fd_directional`` measures
independently by central differences of ``action``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lagrangian import DomainError, Lagrangian, action, evaluate_along
from .pathspace import Direction, Path, PathError, diff_array, inner_product, integrate, linear_combine, sup_norm

DEFAULT_FD_STEP = 1e-5


@dataclass(frozen=True, eq=False)
class ELPath:
    path: Path
    source_action: float

    @property
    def samples(self) -> np.ndarray:
        return self.path.samples

    @property
    def grid(self):
        return self.path.grid


def el_path(lag: Lagrangian, gamma: Path) -> ELPath:
    x, xdot, t = evaluate_along(lag, gamma)
    force = lag.grad_x(x, xdot, t)
    momentum = lag.grad_xdot(x, xdot, t)
    el = force - diff_array(momentum, gamma.grid.h)
    s = integrate(gamma.grid, lag.value(x, xdot, t))
    return ELPath(Path(gamma.grid, el), s)


def _as_direction(eta) -> Direction:
    return eta if isinstance(eta, Direction) else Direction(eta)


def pair_gradient(el: ELPath, eta: Direction | Path) -> float:
    """``<EL, eta>``: the action's derivative along ``eta`` according to the EL path."""
    eta = _as_direction(eta)
    return inner_product(el.path, eta.path)


def fd_directional(lag: Lagrangian, gamma: Path, eta: Direction | Path, h: float = DEFAULT_FD_STEP) -> float:
    """``(S(gamma + h eta) - S(gamma - h eta)) / 2h``."""
    eta = _as_direction(eta)
    if eta.grid != gamma.grid or eta.dim != gamma.dim:
        raise PathError("direction does not match the path's grid/dim")
    if not np.any(eta.samples):
        return 0.0
    out = []
    for sign in (1.0, -1.0):
        try:
            out.append(action(lag, linear_combine(1.0, gamma, sign * h, eta.path)))
        except DomainError as exc:
            raise DomainError(f"{exc.reason} on gamma {'+' if sign > 0 else '-'} h*eta", exc.node, exc.t) from None
    return (out[0] - out[1]) / (2.0 * h)


def stationarity_residual(lag: Lagrangian, gamma: Path) -> float:
    """Interior sup norm of the EL path; zero exactly at stationary paths."""
    return sup_norm(el_path(lag, gamma).path, interior_only=True)


def hat_direction(grid, dim: int, node: int, coord: int) -> Direction:
    """Piecewise-linear bump: one at ``node`` in coordinate ``coord``, zero at other nodes."""
    if not 0 < node < grid.m:
        raise ValueError(f"bump node must be interior, got {node}")
    s = np.zeros((grid.n_nodes, dim))
    s[node, coord] = 1.0
    return Direction(Path(grid, s))


def bump_pairings(el: ELPath) -> np.ndarray:
    """``<EL, eta>`` for every interior hat direction, shape ``(m - 1, N)``.

    With nodal hats the Simpson pairing reduces to ``w_i * EL_i``.
    """
    w = el.grid.simpson_weights()
    return (el.samples * w[:, None])[1:-1]
