"""The seven worked examples as runnable, self-checking scenarios.

Each scenario fixes a grid, a Lagrangian, a few closed-form paths and the
their closed-form EL paths, then ``run`` recomputes everything
numerically and records every comparison as a :class:`Check`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import svg
from .constraints import ConstraintReport, HolonomicConstraint, holonomic_check, isoperimetric_check, sphere
from .flow import FlowError, FlowOptions, FlowTrace, descend
from .lagrangian import (
    DensityFn,
    Lagrangian,
    action,
    bilinear_density,
    euclidean_length,
    green_area,
    hyperbolic_length,
    oscillator,
    projectile,
    squared_loss,
    uniform_density,
)
from .pathspace import FixedEndpointPath, Grid, Path, make_grid, path_from_array_fn, sup_norm
from .variation import ELPath, el_path

G = 9.8
HYPERBOLIC_DISTANCE = 2.0 * math.log1p(math.sqrt(2.0))

PathFn = Callable[[np.ndarray], np.ndarray]


def _stack(*cols):
    return np.stack([np.broadcast_to(np.asarray(c, dtype=float), np.shape(cols[0])) for c in cols], axis=1)


@dataclass(frozen=True)
class Expected:
    path: str
    fn: PathFn
    source: str
    which: str = "L"  # EL of the primary Lagrangian, or "M" for the constraint Lagrangian, "grad_g"


@dataclass(frozen=True)
class FlowSpec:
    start: str
    target: str | None = None  # named path the flow should approach
    target_action: float | None = None
    tol: float = 1e-3
    geometric: bool = False  # compare traces (reparametrization-free) instead of nodes


@dataclass(frozen=True)
class ArrowSpec:
    paths: tuple[str, ...]
    count: int = 5
    scale: float = 1.0
    t_values: tuple[float, ...] | None = None
    # reference -EL arrows, in the path's own coordinates
    figure: dict[str, tuple[tuple[tuple[float, float], tuple[float, float]], ...]] = field(default_factory=dict)
    figure_tol: float = 1e-6


@dataclass(frozen=True)
class Scenario:
    id: str
    title: str
    description: str
    a: float
    b: float
    m: int
    dim: int
    lagrangian: Callable[[], Lagrangian]
    paths: dict[str, PathFn]
    expected: tuple[Expected, ...] = ()
    stationary: str | None = None
    holonomic: Callable[[], HolonomicConstraint] | None = None
    integral: tuple[Callable[[], Lagrangian], float] | None = None
    flows: tuple[FlowSpec, ...] = ()
    arrows: ArrowSpec | None = None
    analysis_only: bool = False
    axis_labels: tuple[str, str] = ("x", "y")
    project: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    @property
    def constrained(self) -> bool:
        return self.holonomic is not None or self.integral is not None

    def grid(self, m: int | None = None) -> Grid:
        return make_grid(self.a, self.b, m or self.m)

    def sample(self, name: str, grid: Grid) -> Path:
        return path_from_array_fn(grid, self.paths[name])

    def plot_points(self, t: np.ndarray, samples: np.ndarray) -> np.ndarray:
        if self.project is not None:
            return self.project(t, samples)
        if samples.shape[1] == 1:
            return np.stack([t, samples[:, 0]], axis=1)
        return samples[:, :2]

    def plot_vector(self, v: np.ndarray) -> np.ndarray:
        """Map an EL vector to plot coordinates (time axis carries no component)."""
        if self.project is not None:
            return self.project(np.zeros(len(v)), v)
        if v.shape[1] == 1:
            return np.stack([np.zeros(len(v)), v[:, 0]], axis=1)
        return v[:, :2]


# -- registry ---------------------------------------------------------------


def _euclid_el(sign):
    def el(t):
        d = (1.0 + (1.0 - 2.0 * t) ** 2) ** 1.5
        return _stack(2.0 * (2.0 * t - 1.0) / d, sign * 2.0 / d)

    return el


def _sphere_wobble(t):
    u = _stack(0.5 * np.sin(2.0 * t), np.cos(t), np.sin(t))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def _regression_lagrangian():
    return squared_loss(uniform_density())


_SCENARIOS: dict[str, Scenario] = {}


def _register(s: Scenario):
    _SCENARIOS[s.id] = s


_register(
    Scenario(
        id="euclidean",
        title="Euclidean geometry",
        description="plane length; straight line between (0,0) and (1,0) vs two parabolas",
        a=0.0,
        b=1.0,
        m=200,
        dim=2,
        lagrangian=lambda: euclidean_length(2),
        paths={
            "gamma0": lambda t: _stack(t, 0.0 * t),
            "gamma1": lambda t: _stack(t, t * (1.0 - t)),
            "gamma2": lambda t: _stack(t, t * (t - 1.0)),
        },
        expected=(
            Expected("gamma1", _euclid_el(1.0), "closed form, EL of gamma1"),
            Expected("gamma2", _euclid_el(-1.0), "closed form, EL of gamma2"),
            Expected("gamma0", lambda t: _stack(0.0 * t, 0.0 * t), "straight line is stationary"),
        ),
        stationary="gamma0",
        flows=(
            FlowSpec("gamma1", "gamma0", geometric=True),
            FlowSpec("gamma2", "gamma0", geometric=True),
        ),
        arrows=ArrowSpec(("gamma1", "gamma2"), count=5, scale=0.25),
    )
)

_register(
    Scenario(
        id="hyperbolic",
        title="Hyperbolic geometry",
        description="upper half-plane length; circular arc vs straight segment between (-1,1) and (1,1)",
        a=math.pi / 4,
        b=3 * math.pi / 4,
        m=400,
        dim=2,
        lagrangian=hyperbolic_length,
        paths={
            "gamma0": lambda t: _stack(math.sqrt(2.0) * np.cos(t), math.sqrt(2.0) * np.sin(t)),
            "gamma1": lambda t: _stack(4.0 * t / math.pi - 2.0, 1.0 + 0.0 * t),
        },
        expected=(
            Expected("gamma1", lambda t: _stack(0.0 * t, -4.0 / math.pi + 0.0 * t), "closed form"),
        ),
        stationary="gamma0",
        flows=(FlowSpec("gamma1", target_action=HYPERBOLIC_DISTANCE),),
        arrows=ArrowSpec(("gamma1",), count=7, scale=0.25),
    )
)

_register(
    Scenario(
        id="spherical",
        title="Spherical geometry",
        description="3-d length constrained to the unit sphere; half great circle in the yz-plane",
        a=0.0,
        b=math.pi,
        m=200,
        dim=3,
        lagrangian=lambda: euclidean_length(3),
        paths={
            "gamma0": lambda t: _stack(0.0 * t, np.cos(t), np.sin(t)),
            "wobble": _sphere_wobble,
        },
        expected=(
            Expected("gamma0", lambda t: _stack(0.0 * t, np.cos(t), np.sin(t)), "closed form, EL"),
            Expected(
                "gamma0",
                lambda t: _stack(0.0 * t, 2.0 * np.cos(t), 2.0 * np.sin(t)),
                "closed form, grad g along gamma",
                which="grad_g",
            ),
        ),
        stationary="gamma0",
        holonomic=sphere,
        arrows=ArrowSpec(("gamma0", "wobble"), count=8, scale=0.3),
        axis_labels=("y", "z"),
        project=lambda t, s: s[:, 1:3],
    )
)

_register(
    Scenario(
        id="isoperimetric",
        title="An isoperimetric problem",
        description="enclosed area under a length constraint; unit circle through the origin",
        a=0.0,
        b=2 * math.pi,
        m=200,
        dim=2,
        lagrangian=green_area,
        paths={"gamma0": lambda t: _stack(1.0 - np.cos(t), np.sin(t))},
        expected=(
            Expected("gamma0", lambda t: _stack(np.cos(t), -np.sin(t)), "closed form, EL of the area"),
            Expected(
                "gamma0", lambda t: _stack(-np.cos(t), np.sin(t)), "closed form, EL of the length", "M"
            ),
        ),
        stationary="gamma0",
        integral=(lambda: euclidean_length(2), 2 * math.pi),
        arrows=ArrowSpec(("gamma0",), count=8, scale=0.3),
    )
)

_register(
    Scenario(
        id="projectile",
        title="Projectiles",
        description="unit mass under gravity g=9.8 from (0,0) to (3,0) over t in [0,1]",
        a=0.0,
        b=1.0,
        m=240,
        dim=2,
        lagrangian=lambda: projectile(G),
        paths={
            "gamma0": lambda t: _stack(3.0 * t, -0.5 * G * t * (t - 1.0)),
            "gamma1": lambda t: _stack(3.0 * t, -G * t * (t - 1.0)),
        },
        expected=(Expected("gamma1", lambda t: _stack(0.0 * t, G + 0.0 * t), "closed form"),),
        stationary="gamma0",
        flows=(FlowSpec("gamma1", "gamma0"),),
        arrows=ArrowSpec(
            ("gamma1",),
            count=5,
            scale=0.1,
            t_values=tuple(k / 6 for k in range(1, 6)),
            figure={
                "gamma1": (
                    ((0.5, 1.3611111111111112), (0.5, 0.38111111111111107)),
                    ((1.0, 2.177777777777778), (1.0, 1.197777777777778)),
                    ((1.5, 2.45), (1.5, 1.4700000000000002)),
                    ((2.0, 2.177777777777778), (2.0, 1.197777777777778)),
                    ((2.5, 1.361111111111111), (2.5, 0.38111111111111085)),
                )
            },
        ),
    )
)

_register(
    Scenario(
        id="oscillator",
        title="Harmonic oscillators",
        description="unit-mass oscillator from -1 to 1 over t in [0, pi]",
        a=0.0,
        b=math.pi,
        m=240,
        dim=1,
        lagrangian=oscillator,
        paths={
            "gamma0": lambda t: -np.cos(t),
            "gamma1": lambda t: 2.0 * t / math.pi - 1.0,
        },
        expected=(Expected("gamma1", lambda t: (-2.0 * t / math.pi + 1.0)[:, None], "closed form"),),
        stationary="gamma0",
        flows=(FlowSpec("gamma1", "gamma0"),),
        arrows=ArrowSpec(
            ("gamma1",),
            count=4,
            scale=1.0,
            t_values=(math.pi / 6, math.pi / 3, 2 * math.pi / 3, 5 * math.pi / 6),
            figure_tol=1e-5,  # reference arrows use pi = 3.14159 for its t coordinates
            figure={
                "gamma1": (
                    ((0.5235983333333333, -0.6666666666666667), (0.5235983333333333, -1.3333333333333335)),
                    ((1.0471966666666666, -0.33333333333333337), (1.0471966666666666, -0.6666666666666667)),
                    ((2.094393333333333, 0.33333333333333326), (2.094393333333333, 0.6666666666666665)),
                    ((2.6179916666666667, 0.6666666666666667), (2.6179916666666667, 1.3333333333333335)),
                )
            },
        ),
        axis_labels=("t", "x"),
    )
)

_register(
    Scenario(
        id="regression",
        title="Minimizing the loss function in a statistical learning problem",
        description="expected squared loss of a model f on [0,1]; x plays the time role",
        a=0.0,
        b=1.0,
        m=200,
        dim=1,
        lagrangian=_regression_lagrangian,
        paths={
            "f_half": lambda x: 0.5 + 0.0 * x,
            "f1": lambda x: x,
        },
        expected=(
            Expected("f1", lambda x: (2.0 * x - 1.0)[:, None], "EL = 2 f int p - 2 int y p with p = 1"),
            Expected("f_half", lambda x: (0.0 * x)[:, None], "optimal model f = 1/2 for p = 1"),
        ),
        stationary="f_half",
        arrows=ArrowSpec(("f1",), count=6, scale=0.25),
        analysis_only=True,
        axis_labels=("x", "f"),
    )
)


def get(scenario_id: str) -> Scenario:
    try:
        return _SCENARIOS[scenario_id]
    except KeyError:
        raise KeyError(f"unknown scenario {scenario_id!r}; choose from {', '.join(_SCENARIOS)}") from None


def ids() -> list[str]:
    return list(_SCENARIOS)


def list_scenarios() -> list[dict]:
    """One entry per scenario: id, one-line description and flags."""
    return [
        {
            "id": s.id,
            "title": s.title,
            "description": s.description,
            "constrained": s.constrained,
            "analysis_only": s.analysis_only,
        }
        for s in _SCENARIOS.values()
    ]


# -- running ----------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float
    relation: str = "<="  # value <= tol, or value >= tol for ">="
    source: str = ""
    gating: bool = True
    skipped: bool = False

    @property
    def passed(self) -> bool:
        if self.skipped:
            return True
        if not math.isfinite(self.value):
            return False
        return self.value <= self.tol if self.relation == "<=" else self.value >= self.tol

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        if not self.gating and not self.skipped:
            status = "INFO"
        return f"[{status}] {self.name}: {self.value:.6g} {self.relation} {self.tol:.3g}" + (
            f"  ({self.source})" if self.source else ""
        )


@dataclass(eq=False)
class ScenarioReport:
    scenario: Scenario
    grid: Grid
    paths: dict[str, Path]
    el: dict[str, ELPath]
    el_m: dict[str, ELPath]
    checks: list[Check]
    constraint_reports: dict[str, ConstraintReport]
    flows: dict[str, FlowTrace]
    arrows: dict[str, list[tuple[np.ndarray, np.ndarray]]]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.gating)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def text(self) -> str:
        s = self.scenario
        lines = [
            f"scenario: {s.id} ({s.title})",
            f"grid: a={self.grid.a!r} b={self.grid.b!r} m={self.grid.m}",
            f"lagrangian: {s.lagrangian().name}",
        ]
        for name, e in self.el.items():
            lines.append(
                f"path {name}: action={e.source_action!r} interior |EL|_sup={sup_norm(e.path, True)!r}"
            )
        for name, tr in self.flows.items():
            lines.append(
                f"flow {name}: iterations={tr.iterations} converged={tr.converged} "
                f"action={tr.final_action!r} residual={tr.final_residual!r}"
            )
        lines.append("checks:")
        lines += ["  " + c.line() for c in self.checks]
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def svg(self, spec: svg.SvgSpec = svg.SvgSpec()) -> str:
        s = self.scenario
        t = self.grid.t
        polylines = {name: s.plot_points(t, p.samples) for name, p in self.paths.items()}
        arrows = self.arrows
        if spec.arrow_count is not None or spec.arrow_scale is not None:
            arrows = arrow_samples(self, spec.arrow_count, spec.arrow_scale)
        return svg.render(f"{s.title}: -EL arrows", polylines, arrows, spec, s.axis_labels)


def _max_err(samples: np.ndarray, expected: np.ndarray) -> float:
    return float(np.max(np.abs(samples - expected)))


def _arrow_nodes(grid: Grid, count: int, t_values=None) -> list[int]:
    if t_values is None:
        t_values = [grid.a + (j + 1) * (grid.b - grid.a) / (count + 1) for j in range(count)]
    return [int(round((tv - grid.a) / grid.h)) for tv in t_values]


def arrow_samples(report: ScenarioReport, count: int | None = None, scale: float | None = None):
    """Arrow (base, tip) pairs in plot coordinates: base on the path, tip = base - scale * EL."""
    s = report.scenario
    spec = s.arrows
    if spec is None:
        return {}
    t_values = spec.t_values if count is None else None
    count = count or spec.count
    scale = spec.scale if scale is None else scale
    nodes = _arrow_nodes(report.grid, count, t_values)
    t = report.grid.t
    out = {}
    for name in spec.paths:
        base = s.plot_points(t[nodes], report.paths[name].samples[nodes])
        vec = s.plot_vector(report.el[name].samples[nodes])
        out[name] = [(base[j], base[j] - scale * vec[j]) for j in range(len(nodes))]
    return out


def regression_zero(lag: Lagrangian, grid: Grid) -> Path:
    """Nodewise root of EL for a Lagrangian with no velocity dependence (affine in q here)."""
    x = grid.t
    q0 = np.zeros((grid.n_nodes, 1))
    q1 = np.ones((grid.n_nodes, 1))
    e0 = lag.grad_x(q0, q0, x)[:, 0]
    e1 = lag.grad_x(q1, q0, x)[:, 0]
    q = -e0 / (e1 - e0)
    # one Newton polish with the secant slope; exact when EL is affine in q
    e = lag.grad_x(q[:, None], q0, x)[:, 0]
    q = q - e / (e1 - e0)
    return Path(grid, q)


def regression_zero_closed_form(density: DensityFn, x: np.ndarray) -> np.ndarray:
    mass, first = density.moments(x)
    return first / mass


def run(
    scenario_id: str,
    m: int | None = None,
    *,
    flows: bool = True,
    flow_options: FlowOptions | None = None,
) -> ScenarioReport:
    s = get(scenario_id)
    grid = s.grid(m)
    lag = s.lagrangian()
    paths = {name: s.sample(name, grid) for name in s.paths}
    el = {name: el_path(lag, p) for name, p in paths.items()}
    el_m: dict[str, ELPath] = {}
    checks: list[Check] = []
    creports: dict[str, ConstraintReport] = {}

    if s.integral is not None:
        lag_m = s.integral[0]()
        el_m = {name: el_path(lag_m, p) for name, p in paths.items()}

    for ex in s.expected:
        want = np.asarray(ex.fn(grid.t), dtype=float).reshape(grid.n_nodes, -1)
        if ex.which == "L":
            got = el[ex.path].samples
            label = f"EL[{ex.path}] matches closed form"
        elif ex.which == "M":
            got = el_m[ex.path].samples
            label = f"EL^M[{ex.path}] matches closed form"
        else:
            got = s.holonomic().grad_g(paths[ex.path].samples)
            label = f"grad g[{ex.path}] matches closed form"
        checks.append(Check(label, _max_err(got, want), 1e-6, source=ex.source))

    if s.stationary and not s.constrained:
        r = sup_norm(el[s.stationary].path, interior_only=True)
        checks.append(Check(f"{s.stationary} is stationary (interior |EL|)", r, 1e-6))

    if s.holonomic is not None:
        con = s.holonomic()
        for name, p in paths.items():
            creports[name] = holonomic_check(lag, con, p)
        rep = creports[s.stationary]
        checks.append(Check(f"{s.stationary} constrained residual", rep.residual_norm, 1e-6))
        checks.append(
            Check(
                f"{s.stationary} projection coefficient = 1/2",
                float(np.max(np.abs(rep.projection.samples - 0.5))),
                1e-6,
                source="ratio of the closed-form EL and grad g vectors",
            )
        )
        checks.append(Check(f"{s.stationary} lies on the constraint set", rep.constraint_violation, 1e-12))
        for name, rep in creports.items():
            if name != s.stationary:
                checks.append(Check(f"{name} is not a constrained geodesic (residual)", rep.residual_norm, 0.1, ">="))

    if s.integral is not None:
        lag_m, value = s.integral[0](), s.integral[1]
        rep = isoperimetric_check(lag, lag_m, paths[s.stationary], value)
        creports[s.stationary] = rep
        checks.append(Check(f"{s.stationary} constrained residual", rep.residual_norm, 1e-6))
        checks.append(Check(f"{s.stationary} multiplier lambda* = 1", abs(rep.lam - 1.0), 1e-6))
        ortho = abs(np.sum(rep.residual_path.samples * el_m[s.stationary].samples * grid.simpson_weights()[:, None]))
        nl = math.sqrt(max(np.sum(el[s.stationary].samples ** 2 * grid.simpson_weights()[:, None]), 0.0))
        nm = math.sqrt(max(np.sum(el_m[s.stationary].samples ** 2 * grid.simpson_weights()[:, None]), 0.0))
        checks.append(Check("residual orthogonal to EL^M", ortho / (nl * nm), 1e-9))
        checks.append(Check("constraint value (length 2*pi)", rep.constraint_violation, 1e-6))

    checks += _extra_checks(s, grid, lag, paths, el)

    arrows_placeholder = ScenarioReport(s, grid, paths, el, el_m, checks, creports, {}, {})
    arrows = arrow_samples(arrows_placeholder)
    checks += _figure_checks(s, grid, arrows)

    traces: dict[str, FlowTrace] = {}
    if flows and not s.analysis_only:
        opts = flow_options or FlowOptions()
        for fs in s.flows:
            start = FixedEndpointPath(paths[fs.start])
            try:
                tr = descend(lag, start, opts)
            except FlowError as exc:
                checks.append(Check(f"flow from {fs.start} ended early: {exc}", exc.trace.final_residual, opts.tol, gating=False))
                tr = exc.trace
            traces[fs.start] = tr
            final = tr.final.path
            if fs.target_action is not None:
                checks.append(
                    Check(
                        f"flow from {fs.start}: |action - target|",
                        abs(tr.final_action - fs.target_action),
                        fs.tol,
                        source="closed-form geodesic length",
                    )
                )
            if fs.target is not None:
                target = paths[fs.target]
                nodewise = sup_norm(final - target)
                if fs.geometric:
                    checks.append(
                        Check(
                            f"flow from {fs.start}: distance to the trace of {fs.target}",
                            trace_distance(final, target),
                            fs.tol,
                        )
                    )
                    checks.append(
                        Check(
                            f"flow from {fs.start}: nodewise sup-distance to {fs.target} (parametrization drift)",
                            nodewise,
                            fs.tol,
                            gating=False,
                        )
                    )
                else:
                    checks.append(Check(f"flow from {fs.start}: sup-distance to {fs.target}", nodewise, fs.tol))

    return ScenarioReport(s, grid, paths, el, el_m, checks, creports, traces, arrows)


def trace_distance(path: Path, target: Path) -> float:
    """Max over nodes of ``path`` of the distance to the polyline through ``target``'s nodes."""
    p = path.samples
    a = target.samples[:-1]
    b = target.samples[1:]
    ab = b - a
    L2 = np.sum(ab * ab, axis=1)
    best = np.full(len(p), np.inf)
    for j in range(len(a)):
        if L2[j] == 0:
            d = np.linalg.norm(p - a[j], axis=1)
        else:
            u = np.clip((p - a[j]) @ ab[j] / L2[j], 0.0, 1.0)
            d = np.linalg.norm(p - (a[j] + u[:, None] * ab[j]), axis=1)
        best = np.minimum(best, d)
    return float(best.max())


def _extra_checks(s: Scenario, grid: Grid, lag: Lagrangian, paths, el) -> list[Check]:
    out = []
    if s.id == "hyperbolic":
        out.append(
            Check(
                "length of gamma0 = 2 ln(1 + sqrt 2)",
                abs(action(lag, paths["gamma0"]) - HYPERBOLIC_DISTANCE),
                1e-8,
                source="closed-form integral of csc t",
            )
        )
    if s.id == "oscillator":
        t = grid.t
        minus_el = -el["gamma1"].samples[:, 0]
        left = t < math.pi / 2 - 1e-12
        right = t > math.pi / 2 + 1e-12
        out.append(Check("-EL[gamma1] < 0 for t < pi/2 (max value)", float(minus_el[left].max()), 0.0, "<="))
        out.append(Check("-EL[gamma1] > 0 for t > pi/2 (min value)", float(minus_el[right].min()), 0.0, ">="))
    if s.id == "regression":
        f = paths["f1"].samples[:, 0]
        minus_el = -el["f1"].samples[:, 0]
        below, above = f < 0.5 - 1e-12, f > 0.5 + 1e-12
        out.append(Check("-EL[f1] > 0 where f1 < 1/2 (min value)", float(minus_el[below].min()), 0.0, ">="))
        out.append(Check("-EL[f1] < 0 where f1 > 1/2 (max value)", float(minus_el[above].max()), 0.0, "<="))
        zero = regression_zero(lag, grid)
        out.append(Check("EL zero with p = 1 is f = 1/2", float(np.max(np.abs(zero.samples - 0.5))), 1e-9))
        dens = bilinear_density()
        lag_b = squared_loss(dens)
        zb = regression_zero(lag_b, grid).samples[:, 0]
        x = grid.t
        closed = (0.5 + x / 3.0) / (1.0 + x / 2.0)
        out.append(Check("EL zero with p = 1 + xy matches (1/2 + x/3)/(1 + x/2)", float(np.max(np.abs(zb - closed))), 1e-8))
    return out


def _figure_checks(s: Scenario, grid: Grid, arrows) -> list[Check]:
    spec = s.arrows
    if spec is None or not spec.figure:
        return []
    out = []
    on_nodes = spec.t_values is not None and all(
        abs((tv - grid.a) / grid.h - round((tv - grid.a) / grid.h)) < 1e-9 for tv in spec.t_values
    )
    for name, fig in spec.figure.items():
        label = f"-EL arrows on {name} match the reference figure"
        if not on_nodes:
            out.append(Check(label, float("nan"), 1e-6, skipped=True, source="arrow times are not grid nodes"))
            continue
        got = np.array([[b, tp] for b, tp in arrows[name]])
        want = np.array(fig, dtype=float)
        out.append(Check(label, float(np.max(np.abs(got - want))), spec.figure_tol, source=f"{s.title} figure"))
    return out
