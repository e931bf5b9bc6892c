import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2lab.g2sphere.frame import (SphereChart, SpherePoint, adapted_frame, complete_unit,
                            horizontal_lift, inverse_stereo, sample_chart_points, sasaki_metric,
                            stereo, stereo_jacobian, vertical_embed)
from g2lab.riemann4 import CATALOG_NAMES, catalog, christoffel

unit4 = st.lists(st.floats(-1, 1), min_size=4, max_size=4).map(np.array).filter(
    lambda v: np.linalg.norm(v) > 0.1).map(lambda v: v / np.linalg.norm(v))


@given(unit4)
def test_complete_unit(c):
    B = complete_unit(c)
    assert np.allclose(B.T @ B, np.eye(4), atol=1e-12)
    assert np.allclose(B[:, 0], c)
    assert np.linalg.det(B) > 0


def test_complete_unit_skips_axis():
    B = complete_unit(np.array([1.0, 0, 0, 0]))
    assert np.allclose(B, np.eye(4))
    B = complete_unit(np.array([0, 1.0, 0, 0]))
    assert np.allclose(B[:, 1], [1, 0, 0, 0])
    assert np.linalg.det(B) > 0


def test_sphere_point_normalisation():
    m = catalog("sphere4")
    x = np.array([0.5, 0, 0, 0])
    with pytest.raises(ValueError):
        SpherePoint.create(m, x, [1, 0, 0, 0])
    p = SpherePoint.normalized(m, x, [1, 2, 0, 0])
    assert p.u @ m.g(x) @ p.u == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_gram_identity(name):
    m = catalog(name)
    rng = np.random.default_rng(11)
    chart = SphereChart(m)
    worst = 0.0
    for z in sample_chart_points(m, 100, rng):
        fr = chart.adapted_frame(z)
        worst = max(worst, np.max(np.abs(fr.gram() - np.eye(7))))
        assert fr.orientation() == 1.0
        assert np.allclose(fr.base[:, 0], fr.u)
    assert worst < 1e-10


def test_flat_frame_is_explicit():
    m = catalog("flat")
    u = np.array([0.0, 0.6, 0.8, 0.0])
    fr = adapted_frame(m, SpherePoint.create(m, np.zeros(4), u))
    assert np.allclose(fr.vectors[0], np.r_[u, np.zeros(4)])
    # vertical vectors are (0, f_a), horizontal lifts have no vertical part
    assert np.allclose(fr.vectors[4:, :4], 0.0)
    assert np.allclose(fr.vectors[:4, 4:], 0.0)
    assert np.allclose(sasaki_metric(np.eye(4), np.zeros((4, 4, 4)), u), np.eye(8))


def test_horizontal_lift_has_zero_vertical_part(rng):
    m = catalog("cp2")
    x = np.array([0.2, 0.1, -0.3, 0.4])
    p = SpherePoint.normalized(m, x, rng.standard_normal(4))
    fr = adapted_frame(m, p)
    X = rng.standard_normal(4)
    h, v = fr.split(horizontal_lift(m, p, X))
    assert np.allclose(h, X) and np.allclose(v, 0.0, atol=1e-14)
    Y = rng.standard_normal(4)
    h, v = fr.split(vertical_embed(p, Y))
    assert np.allclose(h, 0.0) and np.allclose(v, Y)


def test_lift_moves_u_by_parallel_transport():
    # Oracle: integrate the parallel transport ODE with RK4 along x(t) = x0 + t X
    # and compare a central difference along the horizontal lift.
    m = catalog("sphere4")
    x0 = np.array([0.3, -0.1, 0.2, 0.4])
    p = SpherePoint.normalized(m, x0, np.array([1.0, 0.5, -0.2, 0.3]))
    X = np.array([0.2, -0.4, 0.1, 0.3])
    lift = horizontal_lift(m, p, X)

    def rhs(t, u):
        return -np.einsum("kij,i,j->k", christoffel(m, x0 + t * X), X, u)

    def transport(dt, steps=10):
        t, u = 0.0, p.u.copy()
        for _ in range(steps):
            k1 = rhs(t, u)
            k2 = rhs(t + dt / 2, u + dt / 2 * k1)
            k3 = rhs(t + dt / 2, u + dt / 2 * k2)
            k4 = rhs(t + dt, u + dt * k3)
            u = u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += dt
        return t, u

    t, u = transport(1e-3)
    _, u_back = transport(-1e-3)
    assert np.allclose((u - u_back) / (2 * t), lift[4:], atol=1e-5)
    # transported u stays unit
    assert u @ m.g(x0 + t * X) @ u == pytest.approx(1.0, abs=1e-10)


@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3).map(np.array))
def test_stereo_round_trip(w):
    c = stereo(w)
    assert np.linalg.norm(c) == pytest.approx(1.0)
    assert np.allclose(inverse_stereo(c), w, atol=1e-10)


def test_stereo_jacobian_fd():
    w = np.array([0.3, -1.2, 0.5])
    h = 1e-6
    fd = np.column_stack([(stereo(w + h * e) - stereo(w - h * e)) / (2 * h) for e in np.eye(3)])
    assert np.allclose(stereo_jacobian(w), fd, atol=1e-8)


@pytest.mark.parametrize("name", ["sphere4", "cp2", "s2xs2"])
def test_chart_coframe_matches_embedding(name):
    # Oracle: the Jacobian of the chart map into TM by central differences,
    # fed through the coframe of the adapted frame in (xdot, vdot) coordinates.
    m = catalog(name)
    chart = SphereChart(m)
    for z in sample_chart_points(m, 4, np.random.default_rng(5)):
        h = 1e-6
        J = np.column_stack([(chart.embed(z + h * e) - chart.embed(z - h * e)) / (2 * h)
                             for e in np.eye(7)])
        fr = chart.adapted_frame(z)
        assert np.allclose(fr.coframe() @ J, chart.coframe(z), atol=1e-7)


def test_chart_frame_agrees_with_pointwise_frame(rng):
    m = catalog("hyperbolic4")
    chart = SphereChart(m)
    for z in sample_chart_points(m, 10, rng):
        a = chart.adapted_frame(z)
        b = adapted_frame(m, chart.point(z))
        assert np.allclose(a.vectors, b.vectors, atol=1e-12)
        assert np.allclose(chart.locate(chart.point(z)), z, atol=1e-10)


def test_pole_is_rejected():
    chart = SphereChart(catalog("flat"))
    with pytest.raises(ValueError, match="pole"):
        chart.check(np.r_[np.zeros(4), 20.0, 0.0, 0.0])
