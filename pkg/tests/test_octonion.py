import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2lab import exterior7 as ex
from g2lab import octonion as oc
from g2lab.octonion import Octonion, Quaternion

F1, F2, F3 = np.eye(3)
PHI, _ = ex.g2_model_forms()

coords = st.floats(-10, 10, allow_nan=False)
quats = st.lists(coords, min_size=4, max_size=4).map(Quaternion.from_array)
octs = st.lists(coords, min_size=8, max_size=8).map(Octonion.from_array)


def imag(q):
    return Quaternion(0.0, q.imag)


def test_cross_examples():
    assert np.allclose(oc.cross(F1, F2), F3)
    assert np.allclose(oc.cross(F2, F1), -F3)
    assert np.allclose(oc.cross(F1, F1), 0)


@given(quats, quats)
def test_cross_skew(p, q):
    X, Y = p.imag, q.imag
    assert abs(oc.cross(X, Y) @ X) < 1e-9
    assert np.allclose(oc.cross(X, Y), -oc.cross(Y, X))


def test_cross_is_volume():
    ctx = oc.QuatContext()
    for X, Y, Z in itertools.product(np.eye(3), repeat=3):
        vol = np.linalg.det(np.column_stack([ctx.u, np.r_[0, X], np.r_[0, Y], np.r_[0, Z]]))
        assert oc.cross(X, Y) @ Z == pytest.approx(vol)


def test_quat_examples():
    i, j = Quaternion(0, F1), Quaternion(0, F2)
    assert np.allclose(oc.quat_mul(i, j).as_array(), [0, 0, 0, 1])
    assert np.allclose(oc.quat_mul(i, i).as_array(), [-1, 0, 0, 0])
    q = Quaternion(0.3, [1, -2, 0.5])
    assert np.allclose(oc.quat_mul(Quaternion(1.0), q).as_array(), q.as_array())


@given(quats, quats)
def test_quat_norm_and_conjugation(p, q):
    pq = oc.quat_mul(p, q)
    assert pq.norm() == pytest.approx(p.norm() * q.norm(), rel=1e-12, abs=1e-12)
    assert np.allclose(pq.conj().as_array(), oc.quat_mul(q.conj(), p.conj()).as_array(), atol=1e-9)
    # cross product of imaginaries is the imaginary part of conj(Y) X
    X, Y = imag(p), imag(q)
    assert np.allclose(oc.cross(X.imag, Y.imag), oc.quat_mul(Y.conj(), X).imag, atol=1e-9)


def test_octonion_norm_multiplicative_1000_pairs():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        a, b = (Octonion.from_array(v) for v in rng.standard_normal((2, 8)))
        worst = max(worst, abs(oc.oct_mul(a, b).norm() - a.norm() * b.norm()))
    assert worst < 1e-12


@given(octs, octs)
def test_octonion_norm_multiplicative(a, b):
    assert oc.oct_mul(a, b).norm() == pytest.approx(a.norm() * b.norm(), rel=1e-12, abs=1e-9)


def test_octonion_examples():
    o = Octonion.from_array(np.arange(1.0, 9.0))
    assert np.allclose(oc.oct_mul(Octonion(Quaternion(1.0)), o).as_array(), o.as_array())
    a = Octonion(Quaternion(0, F1))
    b = Octonion(Quaternion(0, F3))
    assert np.allclose(oc.oct_mul(a, b).as_array(), [0, 0, -1, 0, 0, 0, 0, 0])


@given(quats, quats)
def test_subalgebra(p, q):
    prod = oc.oct_mul(Octonion(p), Octonion(q))
    assert np.allclose(prod.first.as_array(), oc.quat_mul(p, q).as_array())
    assert np.allclose(prod.second.as_array(), 0)


@given(quats, quats, quats, quats)
def test_imaginary_expansion(a1, a2, a3, a4):
    lhs = oc.oct_mul(Octonion(imag(a1), a2), Octonion(imag(a3), a4))
    rhs = oc.imag_oct_mul(a1.imag, a2, a3.imag, a4)
    assert np.allclose(lhs.as_array(), rhs.as_array(), atol=1e-9)


@given(quats, quats, quats, quats, quats, quats)
def test_trilinear_matches_expansion(a1, a2, a3, a4, a5, a6):
    o1, o2, o3 = Octonion(imag(a1), a2), Octonion(imag(a3), a4), Octonion(imag(a5), a6)
    assert oc.phi_trilinear(o1, o2, o3) == pytest.approx(oc.phi_expansion(o1, o2, o3), abs=1e-8)
    assert oc.phi_trilinear(o1, o1, o3) == pytest.approx(0, abs=1e-8)


def test_trilinear_requires_imaginary_first_slot():
    with pytest.raises(ValueError):
        oc.phi_trilinear(Octonion(Quaternion(1.0)), Octonion(), Octonion())


def test_phi_from_octonions():
    assert oc.phi_is_alternating()
    assert (oc.phi_altform() - PHI).max_abs() < 1e-12
    e4, e5, e6 = (oc.frame_octonion(i) for i in (4, 5, 6))
    assert oc.phi_trilinear(e4, e5, e6) == 1.0


def test_other_dictionary_gives_other_form():
    # pairing e1..e3 with the first quaternion does not reproduce phi
    slots = {0: (1, 0), 1: (0, 1), 2: (0, 2), 3: (0, 3), 4: (1, 1), 5: (1, 2), 6: (1, 3)}
    assert (oc.phi_altform(slots) - PHI).max_abs() > 0.5
