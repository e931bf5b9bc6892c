"""Points, adapted frames and the stereographic chart of the unit tangent bundle.

Tangent vectors of ``TM`` are 8-vectors ``(xdot, vdot)`` in the induced
coordinates.  For such a vector at ``(x, u)`` the horizontal part is ``xdot``
and the vertical part is ``vdot + Gamma(xdot, u)``.  The metric on ``S_M`` is
``g`` on both parts with the two parts orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..riemann4 import BOUNDARY_MARGIN, MetricModel, christoffel, orthonormal_frame

__all__ = [
    "SpherePoint",
    "AdaptedFrame",
    "SphereChart",
    "complete_unit",
    "horizontal_lift",
    "vertical_embed",
    "adapted_frame",
    "sasaki_metric",
    "stereo",
    "stereo_jacobian",
    "inverse_stereo",
    "sample_chart_points",
    "POLE_LIMIT",
]

SKIP_TOL = 1e-6
POLE_LIMIT = 10.0


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """``(x, u)`` with ``g_x(u, u) = 1``."""

    x: np.ndarray
    u: np.ndarray

    @classmethod
    def create(cls, m: MetricModel, x, u) -> "SpherePoint":
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        n = float(u @ m.g(x) @ u)
        if abs(n - 1.0) >= 1e-12:
            raise ValueError(f"|u|^2 = {n!r} is not 1 within 1e-12")
        return cls(x, u)

    @classmethod
    def normalized(cls, m: MetricModel, x, v) -> "SpherePoint":
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        return cls(x, v / np.sqrt(v @ m.g(x) @ v))


def complete_unit(c: np.ndarray, skip_tol: float = SKIP_TOL) -> np.ndarray:
    """Euclidean unit 4-vector ``c`` -> positively oriented orthonormal ``[c, c1, c2, c3]``.

    Gram-Schmidt over the standard axes in order 1..4, skipping an axis whose
    component orthogonal to the span so far has norm below ``skip_tol``.
    """
    basis = [np.asarray(c, dtype=float)]
    for k in range(4):
        e = np.zeros(4)
        e[k] = 1.0
        for b in basis:
            e = e - (e @ b) * b
        n = np.linalg.norm(e)
        if n < skip_tol:
            continue
        basis.append(e / n)
        if len(basis) == 4:
            break
    B = np.array(basis).T
    if np.linalg.det(B) < 0:
        B[:, 3] = -B[:, 3]
    return B


@dataclass(frozen=True, eq=False)
class AdaptedFrame:
    """Adapted frame ``e_0..e_6`` of ``T S_M`` at a point.

    ``base`` has columns ``(u, f1, f2, f3)``: a positively oriented
    g-orthonormal basis of ``T_x M``.  ``vectors[i]`` is ``e_i`` as an 8-vector:
    ``e_0, e_a`` are horizontal lifts of ``u, f_a`` and ``e_{a+3}`` is the
    vertical copy of ``f_a``.
    """

    point: SpherePoint
    base: np.ndarray
    vectors: np.ndarray
    christoffel: np.ndarray
    g: np.ndarray

    @property
    def u(self) -> np.ndarray:
        return self.point.u

    def split(self, xi) -> tuple[np.ndarray, np.ndarray]:
        """(horizontal, vertical) parts of an 8-vector, as vectors of ``T_x M``."""
        xi = np.asarray(xi, dtype=float)
        h = xi[:4]
        v = xi[4:] + np.einsum("kij,i,j->k", self.christoffel, h, self.u)
        return h, v

    def coframe(self) -> np.ndarray:
        """7x8 matrix of the dual coframe ``e^0..e^6`` on 8-vectors."""
        out = np.zeros((7, 8))
        for c in range(8):
            xi = np.zeros(8)
            xi[c] = 1.0
            out[:, c] = self.components(xi)
        return out

    def components(self, xi) -> np.ndarray:
        h, v = self.split(xi)
        gh = self.base.T @ self.g @ h
        gv = self.base.T @ self.g @ v
        return np.concatenate([gh, gv[1:]])

    def gram(self) -> np.ndarray:
        S = sasaki_metric(self.g, self.christoffel, self.u)
        return self.vectors @ S @ self.vectors.T

    def orientation(self) -> float:
        return float(np.sign(np.linalg.det(self.base)))


def sasaki_metric(g: np.ndarray, gamma: np.ndarray, u: np.ndarray) -> np.ndarray:
    """8x8 matrix of the horizontal+vertical metric in ``(xdot, vdot)`` coordinates."""
    K = np.einsum("kij,j->ki", gamma, u)  # vertical part = vdot + K xdot
    S = np.zeros((8, 8))
    S[:4, :4] = g + K.T @ g @ K
    S[:4, 4:] = K.T @ g
    S[4:, :4] = g @ K
    S[4:, 4:] = g
    return S


def horizontal_lift(m: MetricModel, p: SpherePoint, X, gamma: Optional[np.ndarray] = None) -> np.ndarray:
    """``(X, -Gamma(X, u))``: the lift along which ``U`` is parallel."""
    if gamma is None:
        gamma = christoffel(m, p.x)
    X = np.asarray(X, dtype=float)
    return np.concatenate([X, -np.einsum("kij,i,j->k", gamma, X, p.u)])


def vertical_embed(p: SpherePoint, Y) -> np.ndarray:
    Y = np.asarray(Y, dtype=float)
    return np.concatenate([np.zeros(4), Y])


def adapted_frame(m: MetricModel, p: SpherePoint, rotation: Optional[np.ndarray] = None,
                  margin: float = BOUNDARY_MARGIN) -> AdaptedFrame:
    """Adapted frame induced by the deterministic completion of ``u``.

    The completion is computed in the orthonormal frame of ``T_x M`` given by
    :func:`~g2lab.riemann4.orthonormal_frame`.  ``rotation`` (in SO(3)) mixes
    ``f1, f2, f3`` to produce another admissible frame.
    """
    gamma = christoffel(m, p.x, margin)
    g = m.g(p.x)
    F = orthonormal_frame(m, p.x)
    c = np.linalg.solve(F, p.u)
    C = complete_unit(c)
    if rotation is not None:
        C = C.copy()
        C[:, 1:] = C[:, 1:] @ np.asarray(rotation, dtype=float)
    base = F @ C
    vecs = np.zeros((7, 8))
    for i in range(4):
        vecs[i] = horizontal_lift(m, p, base[:, i], gamma)
    for a in range(1, 4):
        vecs[a + 3] = vertical_embed(p, base[:, a])
    return AdaptedFrame(point=p, base=base, vectors=vecs, christoffel=gamma, g=g)


# -- stereographic chart -----------------------------------------------------

def stereo(w) -> np.ndarray:
    """Inverse stereographic map R^3 -> S^3 from the pole ``(-1, 0, 0, 0)``."""
    w = np.asarray(w, dtype=float)
    s = 1.0 + w @ w
    return np.concatenate([[2.0 / s - 1.0], 2.0 * w / s])


def stereo_jacobian(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    s = 1.0 + w @ w
    J = np.zeros((4, 3))
    J[0] = -4.0 * w / s ** 2
    J[1:] = 2.0 * np.eye(3) / s - 4.0 * np.outer(w, w) / s ** 2
    return J


def inverse_stereo(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    return c[1:] / (1.0 + c[0])


@dataclass(frozen=True, eq=False)
class SphereChart:
    """Chart ``(x, w) -> (x, F(x) stereo(w))`` of ``S_M``.

    ``F`` is the orthonormal frame of ``M``.  Chart points are 7-vectors
    ``z = (x1..x4, w1..w3)``.  The coframe matrix at ``z`` expresses the
    adapted coframe in the chart cobasis and is computed exactly from the
    metric derivatives through the connection form of ``F``.
    """

    metric: MetricModel
    rotation: Optional[np.ndarray] = None
    margin: float = BOUNDARY_MARGIN

    def check(self, z) -> None:
        z = np.asarray(z, dtype=float)
        self.metric.domain.check(z[:4], self.margin)
        if np.linalg.norm(z[4:]) > POLE_LIMIT:
            raise ValueError(f"|w| = {np.linalg.norm(z[4:]):.3g} exceeds {POLE_LIMIT}: too close to the pole")

    def point(self, z) -> SpherePoint:
        z = np.asarray(z, dtype=float)
        F = orthonormal_frame(self.metric, z[:4])
        return SpherePoint(z[:4].copy(), F @ stereo(z[4:]))

    def frame_data(self, z):
        """``(F, C, omega, g, gamma)`` at ``z``.

        ``C`` has columns ``sigma, c1, c2, c3`` in the orthonormal frame ``F``;
        ``omega[m] = F^-1 (d_m F + Gamma_m F)`` is the connection form of ``F``.
        """
        z = np.asarray(z, dtype=float)
        self.check(z)
        x, w = z[:4], z[4:]
        m = self.metric
        g = m.g(x)
        dg = m.dg(x)
        ginv = np.linalg.inv(g)
        low = 0.5 * (np.transpose(dg, (2, 0, 1)) + np.transpose(dg, (2, 1, 0)) - dg)
        gamma = np.einsum("kl,lij->kij", ginv, low)
        L = np.linalg.cholesky(g)
        F = np.linalg.inv(L).T
        Finv = L.T
        omega = np.empty((4, 4, 4))
        for k in range(4):
            S = F.T @ dg[k] @ F
            K = -np.triu(S, 1) - 0.5 * np.diag(np.diag(S))
            omega[k] = K + Finv @ gamma[:, k, :] @ F
        C = complete_unit(stereo(w))
        if self.rotation is not None:
            C = C.copy()
            C[:, 1:] = C[:, 1:] @ np.asarray(self.rotation, dtype=float)
        return F, C, omega, g, gamma

    def coframe(self, z) -> np.ndarray:
        """7x7 matrix ``E`` with ``e^i = sum_c E[i, c] dz^c``."""
        z = np.asarray(z, dtype=float)
        F, C, omega, _, _ = self.frame_data(z)
        sigma = C[:, 0]
        E = np.zeros((7, 7))
        # horizontal: e^i(d_m) = g(d_m, F c_i) = (F^-1)^T ... -> row c_i^T F^-1
        E[:4, :4] = C.T @ np.linalg.inv(F)
        # vertical: e^{a+3}(d_m) = c_a . omega_m sigma ; e^{a+3}(d_w) = c_a . dsigma/dw
        for k in range(4):
            E[4:, k] = C[:, 1:].T @ (omega[k] @ sigma)
        E[4:, 4:] = C[:, 1:].T @ stereo_jacobian(z[4:])
        return E

    def adapted_frame(self, z) -> AdaptedFrame:
        z = np.asarray(z, dtype=float)
        F, C, _, g, gamma = self.frame_data(z)
        p = SpherePoint(z[:4].copy(), F @ C[:, 0])
        base = F @ C
        vecs = np.zeros((7, 8))
        for i in range(4):
            vecs[i] = np.concatenate([base[:, i], -np.einsum("kij,i,j->k", gamma, base[:, i], p.u)])
        for a in range(1, 4):
            vecs[a + 3, 4:] = base[:, a]
        return AdaptedFrame(point=p, base=base, vectors=vecs, christoffel=gamma, g=g)

    def embed(self, z) -> np.ndarray:
        """The point of ``TM`` as an 8-vector ``(x, u)``."""
        p = self.point(z)
        return np.concatenate([p.x, p.u])

    def locate(self, p: SpherePoint) -> np.ndarray:
        """Chart point of ``p`` (inverse of :meth:`point`)."""
        F = orthonormal_frame(self.metric, p.x)
        c = np.linalg.solve(F, p.u)
        return np.concatenate([p.x, inverse_stereo(c)])


def sample_chart_points(m: MetricModel, n: int, rng: np.random.Generator,
                        max_w: float = 3.0) -> np.ndarray:
    """Seeded chart points ``z = (x, w)``: ``x`` from the domain sampler, ``u``
    uniform on the unit sphere of ``T_x M`` conditioned on ``|w| <= max_w``."""
    xs = m.domain.sample(rng, n)
    out = np.empty((n, 7))
    for k, x in enumerate(xs):
        while True:
            c = rng.standard_normal(4)
            c /= np.linalg.norm(c)
            w = inverse_stereo(c) if c[0] > -1 + 1e-12 else None
            if w is not None and np.linalg.norm(w) <= max_w:
                break
        out[k, :4] = x
        out[k, 4:] = w
    return out
