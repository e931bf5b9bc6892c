import numpy as np
import pytest

from g2lab import exterior7 as ex
from g2lab.g2sphere import (SphereChart, SpherePoint, a_tensor, adapted_frame, d_numeric,
                            dphi_closed, dstarphi_closed, form_field, frame_curvature, never_calibrated_check,
                            ricci_u_vertical, sample_chart_points, tau0_general)
from g2lab.riemann4 import catalog

MU_A1 = ex.wedge(ex.mu(), ex.alpha1())
B2 = ex.wedge(ex.beta(), ex.beta())


def _frames(name, n=3, seed=9, **kw):
    m = catalog(name, **kw)
    chart = SphereChart(m)
    zs = sample_chart_points(m, n, np.random.default_rng(seed))
    return m, chart, zs


def test_flat_dphi():
    m, chart, zs = _frames("flat")
    fr = chart.adapted_frame(zs[0])
    assert dphi_closed(m, fr).allclose(-B2)
    true = dphi_closed(m, fr, corrected=True)
    assert true.allclose(-B2 - 2 * MU_A1)
    assert true.norm() == pytest.approx(np.sqrt(24))


def test_sphere_dphi():
    m, chart, zs = _frames("sphere4")
    fr = chart.adapted_frame(zs[0])
    assert dphi_closed(m, fr).allclose(-MU_A1 - B2 + 3 * ex.base_volume(), atol=1e-10)


@pytest.mark.parametrize("name", ["flat", "sphere4", "hyperbolic4", "cp2", "s2xs2"])
def test_dphi_against_oracle(name):
    m, chart, zs = _frames(name)
    field = form_field(m, chart, "phi")
    for z in zs:
        oracle = d_numeric(field, z)
        fr = chart.adapted_frame(z)
        assert (oracle - dphi_closed(m, fr, corrected=True)).max_abs() < 1e-6
        # the stated expression misses exactly -2 mu ^ alpha1
        assert (oracle - dphi_closed(m, fr) + 2 * MU_A1).max_abs() < 1e-6


@pytest.mark.parametrize("name", ["sphere4", "cp2", "s2xs2"])
def test_dstarphi_against_oracle(name):
    m, chart, zs = _frames(name)
    field = form_field(m, chart, "star_phi")
    for z in zs:
        fr = chart.adapted_frame(z)
        assert (d_numeric(field, z) - dstarphi_closed(m, fr)).max_abs() < 1e-6


def test_a_tensor_antisymmetry():
    m, chart, zs = _frames("cp2")
    a = a_tensor(m, chart.adapted_frame(zs[0]))
    assert np.allclose(a, -np.transpose(a, (2, 1, 0)))
    assert np.any(np.abs(a) > 1e-3)
    assert np.allclose(a[4:], 0) and np.allclose(a[:, :4], 0)


def test_a_tensor_constant_curvature():
    # R(e_i, e_k) e_0 = C (<e_k, e_0> e_i - <e_i, e_0> e_k)
    m, chart, zs = _frames("sphere4")
    a = a_tensor(m, chart.adapted_frame(zs[0]))
    for j in range(4, 7):
        assert a[0, j, j - 3] == pytest.approx(-0.5, abs=1e-10)
        assert a[j - 3, j, 0] == pytest.approx(0.5, abs=1e-10)


def test_s2xs2_not_cocalibrated():
    m, chart, zs = _frames("s2xs2", n=5)
    norms = [dstarphi_closed(m, chart.adapted_frame(z)).norm() for z in zs]
    assert min(norms) > 1e-3
    # u tangent to one factor: Ric u is parallel to u and d*phi vanishes
    x = np.array([1.0, 0.3, 1.2, -0.4])
    p = SpherePoint.normalized(m, x, np.array([1.0, 0.0, 0.0, 0.0]))
    assert dstarphi_closed(m, adapted_frame(m, p)).max_abs() < 1e-12


def test_einstein_metrics_are_cocalibrated():
    for name in ["sphere4", "hyperbolic4", "cp2"]:
        m, chart, zs = _frames(name)
        for z in zs:
            fr = chart.adapted_frame(z)
            assert dstarphi_closed(m, fr).max_abs() < 1e-10
            assert ricci_u_vertical(m, fr).max_abs() < 1e-10


def test_tau0_general():
    m, chart, zs = _frames("cp2")
    _, star_phi = ex.g2_model_forms()
    field = form_field(m, chart, "phi")
    for z in zs:
        fr = chart.adapted_frame(z)
        ric = frame_curvature(m, fr).ric[0, 0]
        assert ric == pytest.approx(6.0, abs=1e-9)
        oracle = ex.inner(d_numeric(field, z), star_phi) / 7
        assert tau0_general(m, fr, corrected=True) == pytest.approx(oracle, abs=1e-6)
        assert tau0_general(m, fr) == pytest.approx(oracle - 6 / 7, abs=1e-6)


@pytest.mark.parametrize("name", ["flat", "sphere4", "hyperbolic4", "cp2", "s2xs2"])
def test_never_calibrated(name):
    m, chart, zs = _frames(name, n=5)
    frames = [chart.adapted_frame(z) for z in zs]
    rep = never_calibrated_check(m, frames)
    assert rep.passed and rep.min_norm > 3
    assert never_calibrated_check(m, frames, corrected=False).max_component_residual < 1e-10
