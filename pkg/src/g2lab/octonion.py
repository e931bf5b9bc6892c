"""Quaternions and octonions built from an oriented Euclidean 4-space and a unit vector.

The unit vector ``u`` is the real unit; ``u^perp`` carries the cross product
``<X x Y, Z> = Vol(u, X, Y, Z)``.  Octonions are pairs of quaternions under the
Cayley-Dickson rule ``(a1, a2)(a3, a4) = (a1 a3 - conj(a4) a2, a4 a1 + a2 conj(a3))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .exterior7 import AltForm, basis

__all__ = [
    "QuatContext",
    "Quaternion",
    "Octonion",
    "cross",
    "quat_mul",
    "oct_mul",
    "imag_oct_mul",
    "phi_trilinear",
    "phi_expansion",
    "frame_octonion",
    "phi_altform",
    "FRAME_SLOTS",
    "phi_is_alternating",
]


@dataclass(frozen=True)
class QuatContext:
    """Oriented orthonormal basis ``(u, f1, f2, f3)`` of a Euclidean 4-space.

    ``basis`` holds the four vectors as columns in some ambient orthonormal
    coordinates.  Quaternion components are taken in this basis, so the
    product is the same for every context; the context matters when mapping
    ambient vectors in and out.
    """

    basis: np.ndarray = field(default_factory=lambda: np.eye(4))

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=float)
        if B.shape != (4, 4):
            raise ValueError("QuatContext needs a 4x4 basis matrix")
        if not np.allclose(B.T @ B, np.eye(4), atol=1e-12):
            raise ValueError("basis is not orthonormal")
        if np.linalg.det(B) < 0:
            raise ValueError("basis (u, f1, f2, f3) is negatively oriented")
        object.__setattr__(self, "basis", B)

    @property
    def u(self) -> np.ndarray:
        return self.basis[:, 0]

    def quaternion(self, v) -> "Quaternion":
        """Quaternion of an ambient 4-vector."""
        c = self.basis.T @ np.asarray(v, dtype=float)
        return Quaternion(c[0], c[1:])

    def ambient(self, q: "Quaternion") -> np.ndarray:
        return self.basis @ np.concatenate([[q.real], q.imag])


@dataclass(frozen=True)
class Quaternion:
    """``real * u + imag``, with ``imag`` given in the ``(f1, f2, f3)`` basis."""

    real: float = 0.0
    imag: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "real", float(self.real))
        object.__setattr__(self, "imag", np.asarray(self.imag, dtype=float).reshape(3))

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.real + other.real, self.imag + other.imag)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.real - other.real, self.imag - other.imag)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.real, -self.imag)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        return Quaternion(self.real * other, self.imag * other)

    __rmul__ = __mul__

    def conj(self) -> "Quaternion":
        return Quaternion(self.real, -self.imag)

    def norm(self) -> float:
        return float(np.sqrt(self.real ** 2 + self.imag @ self.imag))

    def as_array(self) -> np.ndarray:
        return np.concatenate([[self.real], self.imag])

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        return cls(a[0], a[1:])


@dataclass(frozen=True)
class Octonion:
    first: Quaternion = field(default_factory=Quaternion)
    second: Quaternion = field(default_factory=Quaternion)

    def __mul__(self, other: "Octonion") -> "Octonion":
        return oct_mul(self, other)

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.first + other.first, self.second + other.second)

    def conj(self) -> "Octonion":
        return Octonion(self.first.conj(), -self.second)

    def norm(self) -> float:
        return float(np.sqrt(self.first.norm() ** 2 + self.second.norm() ** 2))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.first.as_array(), self.second.as_array()])

    @classmethod
    def from_array(cls, a) -> "Octonion":
        a = np.asarray(a, dtype=float)
        return cls(Quaternion.from_array(a[:4]), Quaternion.from_array(a[4:]))


def cross(X, Y) -> np.ndarray:
    """Cross product on ``u^perp`` in the oriented basis ``(f1, f2, f3)``.

    ``<X x Y, Z> = Vol(u, X, Y, Z)``, so the components are the determinant
    cofactors; written out to avoid depending on a library sign convention.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return np.array([
        X[1] * Y[2] - X[2] * Y[1],
        X[2] * Y[0] - X[0] * Y[2],
        X[0] * Y[1] - X[1] * Y[0],
    ])


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """``(l u + X)(m u + Y) = (l m - <X, Y>) u + l Y + m X + X x Y``."""
    lam, X = p.real, p.imag
    mu_, Y = q.real, q.imag
    return Quaternion(lam * mu_ - X @ Y, lam * Y + mu_ * X + cross(X, Y))


def oct_mul(o1: Octonion, o2: Octonion) -> Octonion:
    a1, a2 = o1.first, o1.second
    a3, a4 = o2.first, o2.second
    return Octonion(
        quat_mul(a1, a3) - quat_mul(a4.conj(), a2),
        quat_mul(a4, a1) + quat_mul(a2, a3.conj()),
    )


def imag_oct_mul(X1, a2: Quaternion, X3, a4: Quaternion) -> Octonion:
    """Expanded product ``(X1, a2)(X3, a4)`` for ``X1, X3`` in ``u^perp``.

    Written term by term from the component expansion; kept separate from
    :func:`oct_mul` so the two can be compared.
    """
    X1 = np.asarray(X1, dtype=float)
    X3 = np.asarray(X3, dtype=float)
    l2, X2 = a2.real, a2.imag
    l4, X4 = a4.real, a4.imag
    first = Quaternion(
        -l4 * l2 - X4 @ X2 - X1 @ X3,
        cross(X1, X3) - l4 * X2 + l2 * X4 + cross(X4, X2),
    )
    second = Quaternion(
        X2 @ X3 - X4 @ X1,
        l4 * X1 + cross(X4, X1) - l2 * X3 - cross(X2, X3),
    )
    return Octonion(first, second)


def _imaginary(o: Octonion) -> None:
    if abs(o.first.real) > 1e-12:
        raise ValueError("first quaternion must be orthogonal to u")


def phi_trilinear(o1: Octonion, o2: Octonion, o3: Octonion) -> float:
    """``phi(o1, o2, o3) = <o1 o2, o3>`` on ``u^perp + Q``."""
    for o in (o1, o2, o3):
        _imaginary(o)
    return float(oct_mul(o1, o2).as_array() @ o3.as_array())


def phi_expansion(o1: Octonion, o2: Octonion, o3: Octonion) -> float:
    """The ten-term scalar expansion of the trilinear form."""
    X1, (l2, X2) = o1.first.imag, (o1.second.real, o1.second.imag)
    X3, (l4, X4) = o2.first.imag, (o2.second.real, o2.second.imag)
    X5, (l6, X6) = o3.first.imag, (o3.second.real, o3.second.imag)
    return float(
        cross(X1, X3) @ X5 - l4 * (X2 @ X5) + l2 * (X4 @ X5) + cross(X4, X2) @ X5
        + l6 * (X2 @ X3) - l6 * (X4 @ X1) + l4 * (X1 @ X6)
        + cross(X4, X1) @ X6 - l2 * (X3 @ X6) - cross(X2, X3) @ X6
    )


# Frame index -> (slot, component) in the pair of quaternions.  The first
# quaternion is the vertical side (fibre directions e4..e6), the second the
# horizontal side with its real part along the horizontal copy of u (e0).
FRAME_SLOTS: dict[int, tuple[int, int]] = {
    0: (1, 0),
    1: (1, 1), 2: (1, 2), 3: (1, 3),
    4: (0, 1), 5: (0, 2), 6: (0, 3),
}


def frame_octonion(i: int, slots: dict[int, tuple[int, int]] = FRAME_SLOTS) -> Octonion:
    a = np.zeros(8)
    slot, comp = slots[i]
    a[4 * slot + comp] = 1.0
    return Octonion.from_array(a)


def phi_altform(slots: dict[int, tuple[int, int]] = FRAME_SLOTS) -> AltForm:
    """The 3-form on the frame induced by :func:`phi_trilinear`."""
    frame = [frame_octonion(i, slots) for i in range(7)]
    comps = [phi_trilinear(frame[i], frame[j], frame[k]) for i, j, k in basis(3)]
    return AltForm(3, comps)


def phi_is_alternating(slots: dict[int, tuple[int, int]] = FRAME_SLOTS, atol: float = 1e-12) -> bool:
    frame = [frame_octonion(i, slots) for i in range(7)]
    for i, j, k in itertools.product(range(7), repeat=3):
        v = phi_trilinear(frame[i], frame[j], frame[k])
        w = phi_trilinear(frame[j], frame[i], frame[k])
        z = phi_trilinear(frame[i], frame[k], frame[j])
        if abs(v + w) > atol or abs(v + z) > atol:
            return False
    return True
