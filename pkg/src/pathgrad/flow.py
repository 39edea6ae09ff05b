"""Gradient descent/ascent on fixed-endpoint paths, with Armijo backtracking.

Each step moves along the (negated, for minimization) gradient direction built
from the EL path, restricted to endpoint-vanishing variations, then re-pins
the endpoints.  Two representatives of the gradient are available:

``"l2"``
    ``Z(EL)``, the EL path with its endpoint samples zeroed.  This is the
    literal L2 gradient.  It is stiff (stable steps shrink like ``h**2``) and,
    because ``Z(EL)`` jumps at the ends, stops being a descent direction for
    the discretized action once the path is close to stationary; expect a
    :class:`FlowStalled` there.
``"h1"`` (default)
    the Sobolev gradient ``g`` solving ``-g'' + g / (b - a)**2 = EL`` with
    ``g(a) = g(b) = 0``.  It pairs with EL as ``<EL, g> = |g|_H1**2 > 0``, is
    smooth up to the endpoints and removes the ``h**2`` step restriction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .lagrangian import DomainError, Lagrangian, action
from .pathspace import FixedEndpointPath, Grid, Path, integrate
from .variation import el_path


class FlowError(RuntimeError):
    """Numerical failure during descent.

    ``snapshot`` is the last accepted iterate and ``trace`` the history up to it.
    """

    def __init__(self, message: str, snapshot: FixedEndpointPath, iteration: int, trace: FlowTrace | None = None):
        super().__init__(f"{message} (iteration {iteration})")
        self.snapshot = snapshot
        self.iteration = iteration
        self.trace = trace


class FlowStalled(FlowError):
    pass


@dataclass(frozen=True)
class FlowOptions:
    direction: str = "minimize"
    metric: str = "h1"
    initial_step: float | None = None  # 0.1 for l2, 1.0 for h1
    armijo_c: float = 1e-4
    shrink: float = 0.5
    max_backtracks: int = 40
    tol: float = 1e-6
    max_iters: int = 5000

    def __post_init__(self):
        if self.direction not in ("minimize", "maximize"):
            raise ValueError(f"direction must be 'minimize' or 'maximize', got {self.direction!r}")
        if self.metric not in ("l2", "h1"):
            raise ValueError(f"metric must be 'l2' or 'h1', got {self.metric!r}")
        if not 0.0 < self.shrink < 1.0:
            raise ValueError("shrink must lie in (0, 1)")
        if not 0.0 < self.armijo_c < 0.5:
            raise ValueError("armijo_c must lie in (0, 1/2)")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.initial_step is not None and not self.initial_step > 0:
            raise ValueError("initial_step must be positive")
        if self.max_iters < 0 or self.max_backtracks < 1:
            raise ValueError("max_iters >= 0 and max_backtracks >= 1 required")

    @property
    def step0(self) -> float:
        if self.initial_step is not None:
            return self.initial_step
        return 0.1 if self.metric == "l2" else 1.0

    @property
    def sign(self) -> float:
        return 1.0 if self.direction == "minimize" else -1.0


@dataclass(frozen=True)
class StepRecord:
    iteration: int
    action_before: float
    action_after: float
    step: float
    slope: float  # <EL, d>, the predicted first-order change per unit step


@dataclass(frozen=True, eq=False)
class FlowTrace:
    iterates_kept: list[tuple[int, float, float]]
    paths_kept: dict[int, Path]
    steps: list[StepRecord]
    final: FixedEndpointPath
    converged: bool
    options: FlowOptions = field(default_factory=FlowOptions)

    @property
    def iterations(self) -> int:
        return self.iterates_kept[-1][0]

    @property
    def final_action(self) -> float:
        return self.iterates_kept[-1][1]

    @property
    def final_residual(self) -> float:
        return self.iterates_kept[-1][2]


def zero_endpoint_rows(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=float)
    out[0] = 0.0
    out[-1] = 0.0
    return out


def sobolev_gradient(grid: Grid, el: np.ndarray) -> np.ndarray:
    """Solve ``-g'' + g/(b-a)^2 = el`` on the interior with zero Dirichlet ends."""
    n = grid.m - 1
    inv_h2 = 1.0 / grid.h**2
    ab = np.empty((3, n))
    ab[0] = -inv_h2
    ab[1] = 2.0 * inv_h2 + 1.0 / (grid.b - grid.a) ** 2
    ab[2] = -inv_h2
    g = np.zeros_like(el, dtype=float)
    g[1:-1] = solve_banded((1, 1), ab, el[1:-1])
    return g


def search_direction(grid: Grid, el: np.ndarray, metric: str) -> np.ndarray:
    if metric == "l2":
        return zero_endpoint_rows(el)
    return sobolev_gradient(grid, el)


def descend(lag: Lagrangian, start: FixedEndpointPath, opts: FlowOptions | None = None) -> FlowTrace:
    opts = opts or FlowOptions()
    sign = opts.sign
    grid = start.grid
    keep_every = max(1, math.ceil(opts.max_iters / 100))

    current = start
    s_cur = action(lag, current.path)
    step = opts.step0
    kept: list[tuple[int, float, float]] = []
    paths: dict[int, Path] = {}
    steps: list[StepRecord] = []
    converged = False
    k = 0
    while True:
        el = el_path(lag, current.path).samples
        residual = float(np.max(np.linalg.norm(el[1:-1], axis=1)))
        if k % keep_every == 0 or residual <= opts.tol or k == opts.max_iters:
            kept.append((k, s_cur, residual))
            paths[k] = current.path
        if residual <= opts.tol:
            converged = True
            break
        if k == opts.max_iters:
            break

        def fail(cls, message):
            if not kept or kept[-1][0] != k:
                kept.append((k, s_cur, residual))
                paths[k] = current.path
            return cls(message, current, k, FlowTrace(kept, paths, steps, current, False, opts))

        d = search_direction(grid, el, opts.metric)
        slope = integrate(grid, np.sum(el * d, axis=1))
        if not slope > 0.0:
            raise fail(FlowStalled, "search direction is not a descent direction")

        step = min(step / opts.shrink, opts.step0)
        accepted = None
        domain_failure: DomainError | None = None
        for _ in range(opts.max_backtracks):
            trial = current.repin(Path(grid, current.samples - sign * step * d))
            try:
                s_new = action(lag, trial.path)
            except DomainError as exc:
                domain_failure = exc
                step *= opts.shrink
                continue
            if sign * (s_cur - s_new) >= opts.armijo_c * step * slope:
                accepted = (trial, s_new)
                break
            domain_failure = None
            step *= opts.shrink
        if accepted is None:
            if domain_failure is not None:
                raise fail(FlowError, f"line search failed: {domain_failure}")
            raise fail(FlowStalled, "stalled: no step satisfies the Armijo condition")

        trial, s_new = accepted
        steps.append(StepRecord(k, s_cur, s_new, step, slope))
        current, s_cur = trial, s_new
        k += 1

    return FlowTrace(kept, paths, steps, current, converged, opts)


def armijo_violations(trace: FlowTrace) -> list[StepRecord]:
    """Accepted steps that fail the sufficient-change condition (should be empty)."""
    c, sign = trace.options.armijo_c, trace.options.sign
    return [r for r in trace.steps if sign * (r.action_before - r.action_after) < c * r.step * r.slope]


def write_trace_csv(trace: FlowTrace, dest):
    with open(dest, "w") as fh:
        fh.write("iter,action,residual\n")
        for k, s, r in trace.iterates_kept:
            fh.write(f"{k},{s!r},{r!r}\n")
