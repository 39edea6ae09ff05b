"""Multiplier checks for constrained stationary paths.

Holonomic constraints ``g(gamma(t)) = c`` need ``EL(t)`` parallel to
``grad g(gamma(t))`` at every node, with a multiplier function ``lambda(t)``.
Integral constraints ``int M = c`` need ``EL^L`` parallel to ``EL^M`` with one
scalar multiplier.  Away from stationarity the multiplier is defined by
orthogonal projection, so the residual measures how far the path is from
satisfying the constrained equations.

Sign convention: EL is always ``dL/dx - d/dt dL/dxdot``.  The constrained
equations read ``EL + lambda * grad g = 0`` (holonomic) and
``EL^L + lambda * EL^M = 0`` (integral); the reported ``lam`` follows them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .lagrangian import Lagrangian, action
from .pathspace import Path, inner_product, sup_norm
from .variation import el_path

REGULARITY_TOL = 1e-10


class ConstraintError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HolonomicConstraint:
    """Level set ``g(x) = level``; ``g`` and ``grad_g`` are vectorized over rows."""

    g: Callable[[np.ndarray], np.ndarray]
    grad_g: Callable[[np.ndarray], np.ndarray]
    level: float
    name: str = "custom"

    def gradient_check(self, probes: np.ndarray, step: float = 1e-6) -> float:
        """Max gap between ``grad_g`` and central differences of ``g`` at ``probes``."""
        probes = np.atleast_2d(np.asarray(probes, dtype=float))
        fd = np.empty_like(probes)
        for k in range(probes.shape[1]):
            e = np.zeros(probes.shape[1])
            e[k] = step
            fd[:, k] = (self.g(probes + e) - self.g(probes - e)) / (2 * step)
        return float(np.max(np.abs(fd - self.grad_g(probes))))


def sphere(radius: float = 1.0, dim: int = 3) -> HolonomicConstraint:
    """``|x|^2 = radius^2``."""
    return HolonomicConstraint(
        lambda x: np.sum(np.asarray(x) ** 2, axis=-1),
        lambda x: 2.0 * np.asarray(x, dtype=float),
        radius**2,
        "sphere",
    )


@dataclass(frozen=True, eq=False)
class ConstraintReport:
    kind: str  # "holonomic" or "isoperimetric"
    lam: Path | float
    projection: Path | float  # coefficient of grad g (or EL^M) in EL, i.e. -lam
    residual_path: Path
    residual_norm: float
    constraint_violation: float | None

    @property
    def lambda_values(self) -> np.ndarray:
        if isinstance(self.lam, Path):
            return self.lam.samples[:, 0]
        return np.array([self.lam])


def holonomic_check(lag: Lagrangian, con: HolonomicConstraint, gamma: Path) -> ConstraintReport:
    el = el_path(lag, gamma).samples
    grad = np.asarray(con.grad_g(gamma.samples), dtype=float)
    gn2 = np.sum(grad * grad, axis=1)
    small = np.sqrt(gn2) < REGULARITY_TOL
    if small.any():
        i = int(np.argmax(small))
        raise ConstraintError(f"grad g vanishes at node {i} (t={gamma.t[i]!r})")
    coef = np.sum(el * grad, axis=1) / gn2
    residual = Path(gamma.grid, el - coef[:, None] * grad)
    violation = float(np.max(np.abs(con.g(gamma.samples) - con.level)))
    return ConstraintReport(
        "holonomic",
        Path(gamma.grid, -coef),
        Path(gamma.grid, coef),
        residual,
        sup_norm(residual, interior_only=True),
        violation,
    )


def isoperimetric_check(
    lag_l: Lagrangian, lag_m: Lagrangian, gamma: Path, value: float | None = None
) -> ConstraintReport:
    el_l = el_path(lag_l, gamma).path
    el_m = el_path(lag_m, gamma).path
    mm = inner_product(el_m, el_m)
    if not np.sqrt(max(mm, 0.0)) >= REGULARITY_TOL:
        raise ConstraintError("EL path of the constraint Lagrangian vanishes; multiplier undefined")
    lam = -inner_product(el_l, el_m) / mm
    residual = Path(gamma.grid, el_l.samples + lam * el_m.samples)
    violation = None if value is None else abs(action(lag_m, gamma) - value)
    return ConstraintReport("isoperimetric", lam, -lam, residual, sup_norm(residual, interior_only=True), violation)


def write_report_csv(report: ConstraintReport, dest):
    """Per-node ``t, lambda, residual_1..N`` rows followed by a ``#`` summary block."""
    res = report.residual_path
    lam = report.lambda_values
    with open(dest, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "lambda", *(f"residual_{k + 1}" for k in range(res.dim))])
        for i, (ti, row) in enumerate(zip(res.t, res.samples)):
            li = lam[i] if lam.shape[0] > 1 else lam[0]
            w.writerow([repr(float(ti)), repr(float(li)), *(repr(float(v)) for v in row)])
        fh.write(f"# kind,{report.kind}\n")
        fh.write(f"# residual_norm,{report.residual_norm!r}\n")
        if report.constraint_violation is not None:
            fh.write(f"# constraint_violation,{report.constraint_violation!r}\n")
        if not isinstance(report.lam, Path):
            fh.write(f"# lambda,{report.lam!r}\n")
