"""Euler-Lagrange paths as gradients of action functionals on discretized path space."""

from .constraints import HolonomicConstraint, holonomic_check, isoperimetric_check, sphere
from .flow import FlowOptions, FlowTrace, descend
from .lagrangian import Lagrangian, action, builtin
from .pathspace import Direction, FixedEndpointPath, Grid, Path, make_grid
from .variation import el_path, fd_directional, pair_gradient

__all__ = [
    "Direction",
    "FixedEndpointPath",
    "FlowOptions",
    "FlowTrace",
    "Grid",
    "HolonomicConstraint",
    "Lagrangian",
    "Path",
    "action",
    "builtin",
    "descend",
    "el_path",
    "fd_directional",
    "holonomic_check",
    "isoperimetric_check",
    "make_grid",
    "pair_gradient",
    "sphere",
]
