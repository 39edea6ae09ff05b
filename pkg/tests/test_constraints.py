import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathgrad.constraints import (
    ConstraintError,
    HolonomicConstraint,
    holonomic_check,
    isoperimetric_check,
    sphere,
    write_report_csv,
)
from pathgrad.lagrangian import euclidean_length, green_area
from pathgrad.pathspace import Path, inner_product, l2_norm, make_grid, path_from_array_fn
from pathgrad.variation import el_path

LEN3 = euclidean_length(3)


def _great_circle(m=400, radius=1.0):
    g = make_grid(0, math.pi, m)
    return path_from_array_fn(g, lambda t: radius * np.stack([0 * t, np.cos(t), np.sin(t)]))


def _loop(m=400):
    g = make_grid(0, 2 * math.pi, m)
    return path_from_array_fn(g, lambda t: np.stack([1 - np.cos(t), np.sin(t)]))


def _wobble(m=400):
    g = make_grid(0, math.pi, m)
    t = g.t
    raw = np.stack([0.5 * np.sin(2 * t), np.cos(t), np.sin(t)], axis=1)
    return Path(g, raw / np.linalg.norm(raw, axis=1, keepdims=True))


def test_sphere_gradient_is_consistent():
    probes = np.random.default_rng(1).normal(size=(20, 3))
    assert sphere().gradient_check(probes) <= 1e-6


def test_great_circle_vectors_and_multiplier():
    gamma = _great_circle()
    t = gamma.t
    el = el_path(LEN3, gamma).samples
    assert np.max(np.abs(el - np.stack([0 * t, np.cos(t), np.sin(t)], axis=1))) <= 1e-6
    np.testing.assert_allclose(sphere().grad_g(gamma.samples), 2 * gamma.samples)
    rep = holonomic_check(LEN3, sphere(), gamma)
    assert rep.residual_norm <= 1e-6
    assert np.max(np.abs(rep.projection.samples - 0.5)) <= 1e-6
    assert np.max(np.abs(rep.lambda_values + 0.5)) <= 1e-6
    assert rep.constraint_violation <= 1e-12


def test_non_geodesic_sphere_path():
    rep = holonomic_check(LEN3, sphere(), _wobble())
    assert rep.constraint_violation <= 1e-12
    assert rep.residual_norm > 0.1


def test_off_sphere_violation():
    rep = holonomic_check(LEN3, sphere(), _great_circle(radius=2.0))
    assert rep.constraint_violation == pytest.approx(3.0, abs=1e-12)


def test_vanishing_constraint_gradient_errors():
    con = HolonomicConstraint(lambda x: np.sum(x**2, axis=-1), lambda x: 2 * x, 0.0)
    g = make_grid(0, 1, 20)
    gamma = path_from_array_fn(g, lambda t: np.stack([t - 0.5, 0 * t + 0.2 * t, 0 * t]))
    s = gamma.samples.copy()
    s[10] = 0.0
    s[9] = [-0.05, 0.09, 0.0]
    with pytest.raises(ConstraintError, match="node 10"):
        holonomic_check(LEN3, con, Path(g, s))


@pytest.mark.parametrize("make", [_great_circle, _wobble])
def test_holonomic_residual_orthogonal_to_gradient(make):
    gamma = make()
    rep = holonomic_check(LEN3, sphere(), gamma)
    grad = sphere().grad_g(gamma.samples)
    dots = np.sum(rep.residual_path.samples * grad, axis=1)
    el = el_path(LEN3, gamma).samples
    scale = np.linalg.norm(el, axis=1) * np.linalg.norm(grad, axis=1)
    assert np.all(np.abs(dots) <= 1e-10 * np.maximum(scale, 1e-300))


def test_isoperimetric_circle():
    gamma = _loop()
    t = gamma.t
    el_l = el_path(green_area(), gamma).samples
    el_m = el_path(euclidean_length(), gamma).samples
    assert np.max(np.abs(el_l - np.stack([np.cos(t), -np.sin(t)], axis=1))) <= 1e-6
    assert np.max(np.abs(el_m - np.stack([-np.cos(t), np.sin(t)], axis=1))) <= 1e-6
    rep = isoperimetric_check(green_area(), euclidean_length(), gamma, 2 * math.pi)
    assert abs(rep.lam - 1.0) <= 1e-6
    assert rep.residual_norm <= 1e-6
    assert rep.constraint_violation <= 1e-6


def test_isoperimetric_length_on_fine_grid():
    rep = isoperimetric_check(green_area(), euclidean_length(), _loop(800), 2 * math.pi)
    assert rep.constraint_violation <= 1e-8


def test_isoperimetric_self_parallel():
    rep = isoperimetric_check(euclidean_length(), euclidean_length(), _loop(100))
    assert rep.lam == pytest.approx(-1.0, abs=1e-14)
    assert rep.residual_norm <= 1e-14


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 100), st.booleans(), st.floats(0, 0.3))
def test_lambda_scale_equivariance(s, flip, amp):
    s = -s if flip else s
    g = make_grid(0, 2 * math.pi, 100)
    gamma = path_from_array_fn(g, lambda t: np.stack([1 - np.cos(t), np.sin(t) + amp * np.sin(2 * t)]))
    base = isoperimetric_check(green_area(), euclidean_length(), gamma)
    sc = isoperimetric_check(green_area(), euclidean_length().scaled(s), gamma)
    assert sc.lam == pytest.approx(base.lam / s, rel=1e-12)
    scale = np.max(np.abs(base.residual_path.samples)) + 1e-300
    assert np.max(np.abs(sc.residual_path.samples - base.residual_path.samples)) <= 1e-12 * max(scale, 1.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 0.3), st.floats(0, 0.3))
def test_isoperimetric_residual_orthogonal(a1, a2):
    g = make_grid(0, 2 * math.pi, 100)
    gamma = path_from_array_fn(g, lambda t: np.stack([1 - np.cos(t) + a1 * np.sin(3 * t), np.sin(t) + a2 * np.sin(2 * t)]))
    el_l = el_path(green_area(), gamma).path
    el_m = el_path(euclidean_length(), gamma).path
    rep = isoperimetric_check(green_area(), euclidean_length(), gamma)
    assert abs(inner_product(rep.residual_path, el_m)) <= 1e-9 * l2_norm(el_l) * l2_norm(el_m)


@pytest.mark.parametrize("coord", [0, 1, 2])
def test_perturbation_breaks_holonomic_parallelism(coord):
    gamma = _great_circle()
    t = gamma.t
    s = gamma.samples.copy()
    s[:, coord] += 0.05 * t * (math.pi - t)
    assert holonomic_check(LEN3, sphere(), Path(gamma.grid, s)).residual_norm > 1e-3


@pytest.mark.parametrize("coord", [0, 1])
def test_perturbation_breaks_isoperimetric_parallelism(coord):
    gamma = _loop()
    t = gamma.t
    s = gamma.samples.copy()
    s[:, coord] += 0.05 * t * (2 * math.pi - t)
    assert isoperimetric_check(green_area(), euclidean_length(), Path(gamma.grid, s)).residual_norm > 1e-3


def test_degenerate_integral_constraint():
    g = make_grid(0, 1, 20)
    line = path_from_array_fn(g, lambda t: np.stack([t, 0 * t]))
    with pytest.raises(ConstraintError, match="vanishes"):
        isoperimetric_check(green_area(), euclidean_length(), line)


def test_report_csv(tmp_path):
    rep = holonomic_check(LEN3, sphere(), _great_circle(40))
    f = tmp_path / "r.csv"
    write_report_csv(rep, f)
    lines = f.read_text().splitlines()
    assert lines[0] == "t,lambda,residual_1,residual_2,residual_3"
    assert len([ln for ln in lines if not ln.startswith("#")]) == 42
    assert lines[-2].startswith("# residual_norm,")
    iso = isoperimetric_check(green_area(), euclidean_length(), _loop(40))
    write_report_csv(iso, f)
    assert f.read_text().splitlines()[-1] == f"# lambda,{iso.lam!r}"
