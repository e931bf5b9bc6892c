import numpy as np
import pytest

from g2lab import exterior7 as ex
from g2lab.g2sphere import (SphereChart, canonical_forms, d_numeric, form_field,
                            sample_chart_points)
from g2lab.g2sphere.forms import chart_to_frame, frame_to_chart
from g2lab.riemann4 import catalog

METRICS = ["flat", "sphere4", "hyperbolic4", "cp2", "s2xs2"]


def _z(name, n=3, seed=7):
    m = catalog(name)
    return m, sample_chart_points(m, n, np.random.default_rng(seed))


def test_canonical_forms_are_model_forms():
    f = canonical_forms()
    phi, star_phi = ex.g2_model_forms()
    assert f["phi"].allclose(phi) and f["star_phi"].allclose(star_phi)
    assert f["star_mu"].allclose(ex.hodge_star(ex.mu()))
    with pytest.raises(KeyError):
        form_field(catalog("flat"), None, "omega")


def test_chart_round_trip(rng):
    E = rng.standard_normal((7, 7))
    w = ex.AltForm(3, rng.standard_normal(35))
    assert chart_to_frame(frame_to_chart(w, E), E).allclose(w, atol=1e-10)


@pytest.mark.parametrize("name", METRICS)
def test_dmu_is_minus_beta(name):
    m, zs = _z(name)
    field = form_field(m, None, "mu")
    for z in zs:
        assert (d_numeric(field, z) + ex.beta()).max_abs() < 1e-7


@pytest.mark.parametrize("name", ["sphere4", "cp2"])
def test_base_volume_is_closed(name):
    m, zs = _z(name)
    field = form_field(m, None, "base_volume")
    for z in zs:
        assert d_numeric(field, z).max_abs() < 1e-7


def test_d_squared_vanishes():
    # d(d alpha) from a field built out of the numerical d alpha would need
    # second differences; instead use d(beta) = d(-d mu) = 0.
    m, zs = _z("cp2")
    field = form_field(m, None, "beta")
    for z in zs:
        assert d_numeric(field, z).max_abs() < 1e-7


def test_rotated_frames_give_the_same_phi():
    # G2 contains the diagonal SO(3) acting on (f_a) and their vertical copies
    m, zs = _z("cp2")
    c, s = np.cos(0.7), np.sin(0.7)
    rot = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])
    a = form_field(m, SphereChart(m), "phi")
    b = form_field(m, SphereChart(m, rotation=rot), "phi")
    for z in zs:
        assert a(z).allclose(b(z), atol=1e-12)


def test_second_order_consistency():
    m, zs = _z("sphere4", 1)
    field = form_field(m, None, "phi")
    coarse = d_numeric(field, zs[0], h=1e-3)
    fine = d_numeric(field, zs[0], h=5e-4)
    assert (coarse - fine).max_abs() < 1e-7


def test_step_bounds():
    m, zs = _z("flat", 1)
    with pytest.raises(ValueError):
        d_numeric(form_field(m, None, "phi"), zs[0], h=1e-2)


def test_chart_components_option():
    m, zs = _z("flat", 1)
    field = form_field(m, None, "mu")
    z = zs[0]
    in_chart = d_numeric(field, z, frame=False)
    assert chart_to_frame(in_chart, SphereChart(m).coframe(z)).allclose(d_numeric(field, z))
