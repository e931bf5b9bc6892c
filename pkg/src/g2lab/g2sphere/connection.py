"""Levi-Civita connection of ``S_M``: Koszul formula on the chart metric versus
the closed form ``D_X Y = nabla*_X Y - 1/2 R*(X, Y) U + A_X Y``.

Vector fields are callables ``z -> 7-vector`` of chart coefficients.  All
derivatives are central differences with one Richardson level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..riemann4 import MetricModel, curvature
from .forms import richardson_partials
from .frame import SphereChart

__all__ = [
    "VectorField",
    "chart_metric",
    "chart_christoffel",
    "levi_civita_SM",
    "levi_civita_closed",
    "ConnectionPieces",
    "connection_pieces",
    "ConnectionCheck",
    "connection_check",
    "linear_field",
    "chart_direction",
    "covariant_dU",
]

VectorField = Callable[[np.ndarray], np.ndarray]


def linear_field(a, M=None, z0=None) -> VectorField:
    """``z -> a + M (z - z0)``."""
    a = np.asarray(a, dtype=float)
    M = np.zeros((a.size, a.size)) if M is None else np.asarray(M, dtype=float)
    z0 = np.zeros(a.size) if z0 is None else np.asarray(z0, dtype=float)
    return lambda z: a + M @ (np.asarray(z, dtype=float) - z0)


def chart_metric(chart: SphereChart, z) -> np.ndarray:
    E = chart.coframe(z)
    return E.T @ E


def _directional(fn, z, X, h):
    """``d/dt fn(z + t X)`` at ``t = 0``."""
    X = np.asarray(X, dtype=float)
    n = np.linalg.norm(X)
    if n == 0:
        return np.zeros_like(np.asarray(fn(z), dtype=float))
    d = richardson_partials(lambda t: fn(z + t[0] * X / n), np.zeros(1), h)[0]
    return n * d


def chart_christoffel(chart: SphereChart, z, h: float = 1e-4) -> np.ndarray:
    """``Gamma[c, a, b]`` of the chart metric from the Koszul formula."""
    z = np.asarray(z, dtype=float)
    G = chart_metric(chart, z)
    dG = richardson_partials(lambda t: chart_metric(chart, t), z, h)  # [d, a, b]
    low = 0.5 * (np.transpose(dG, (2, 0, 1)) + np.transpose(dG, (2, 1, 0)) - dG)  # [d, a, b]
    return np.einsum("cd,dab->cab", np.linalg.inv(G), low)


def levi_civita_SM(m: MetricModel, chart: SphereChart, z, X: VectorField, Y: VectorField,
                   h: float = 1e-4) -> np.ndarray:
    """``D_X Y`` at ``z`` in chart coefficients, from the metric alone."""
    z = np.asarray(z, dtype=float)
    chart.check(z)
    Xz, Yz = np.asarray(X(z), float), np.asarray(Y(z), float)
    gam = chart_christoffel(chart, z, h)
    return _directional(Y, z, Xz, h) + np.einsum("cab,a,b->c", gam, Xz, Yz)


def _split(chart: SphereChart, z, xi):
    """Horizontal and vertical parts of chart vector ``xi`` as vectors of ``T_x M``."""
    fr = chart.adapted_frame(z)
    comp = chart.coframe(z) @ xi
    return fr.base @ comp[:4], fr.base[:, 1:] @ comp[4:], fr


def _frame_vector(fr, hvec, vvec) -> np.ndarray:
    """Frame components of the vector with horizontal part ``hvec`` and vertical part ``vvec``."""
    gh = fr.base.T @ fr.g @ hvec
    gv = fr.base.T @ fr.g @ vvec
    return np.concatenate([gh, gv[1:]])


@dataclass(frozen=True)
class ConnectionPieces:
    """Terms of the closed form, each in adapted-frame components at ``z``."""

    nabla_star: np.ndarray
    vertical_correction: np.ndarray
    horizontal_correction: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.nabla_star + self.vertical_correction + self.horizontal_correction


def connection_pieces(m: MetricModel, chart: SphereChart, z, X: VectorField, Y: VectorField,
                      h: float = 1e-4) -> ConnectionPieces:
    """``nabla*_X Y``, ``-1/2 R*(X, Y) U`` and ``A_X Y`` in the adapted frame at ``z``.

    ``nabla*`` differentiates the horizontal part with the pulled back
    connection and the vertical part with the same connection projected to
    ``u^perp``.  ``A_X Y`` is horizontal with
    ``<A_X Y, Z> = 1/2 <R(hX, Z) u, vY> + 1/2 <R(hY, Z) u, vX>``.
    """
    z = np.asarray(z, dtype=float)
    Xz, Yz = np.asarray(X(z), float), np.asarray(Y(z), float)
    hX, vX, fr = _split(chart, z, Xz)
    hY, vY, _ = _split(chart, z, Yz)
    u = fr.u
    data = curvature(m, z[:4], chart.margin)
    dx = Xz[:4]

    def parts(t):
        h_, v_, _ = _split(chart, t, np.asarray(Y(t), float))
        return np.concatenate([h_, v_])

    dparts = _directional(parts, z, Xz, h)
    nh = dparts[:4] + data.Gamma(dx, hY)
    nv = dparts[4:] + data.Gamma(dx, vY)
    nv = nv - (u @ fr.g @ nv) * u
    nabla = _frame_vector(fr, nh, nv)

    Ru = data.R(hX, hY, u)
    vert = _frame_vector(fr, np.zeros(4), -0.5 * Ru)

    cov = 0.5 * (np.einsum("abcd,a,c,d->b", data.riemann, hX, u, vY)
                 + np.einsum("abcd,a,c,d->b", data.riemann, hY, u, vX))
    A = data.ginv @ cov
    horiz = _frame_vector(fr, A, np.zeros(4))
    return ConnectionPieces(nabla, vert, horiz)


def levi_civita_closed(m: MetricModel, chart: SphereChart, z, X: VectorField, Y: VectorField,
                       h: float = 1e-4) -> np.ndarray:
    """``nabla*_X Y - 1/2 R*(X, Y) U + A_X Y`` in chart coefficients."""
    pieces = connection_pieces(m, chart, z, X, Y, h)
    return np.linalg.solve(chart.coframe(z), pieces.total)


@dataclass(frozen=True)
class ConnectionCheck:
    torsion: float
    metric: float
    vertical: float
    horizontal: float
    total: float
    dmu: float
    corrections: float

    def passed(self, tol: float = 1e-4) -> bool:
        return max(self.torsion, self.metric, self.vertical, self.horizontal,
                   self.total, self.dmu) <= tol


def connection_check(m: MetricModel, chart: SphereChart, z, X: VectorField, Y: VectorField,
                     Z: VectorField, h: float = 1e-4) -> ConnectionCheck:
    """Residuals of the Koszul-FD connection against its defining properties
    and against the closed form.

    ``corrections`` is the size of ``-1/2 R* U + A`` (zero on flat models).
    ``dmu`` compares ``(D_X mu)(Y)`` with ``<X, theta Y> - mu(A_X Y)``.
    """
    z = np.asarray(z, dtype=float)
    E = chart.coframe(z)
    G = E.T @ E
    Xz, Yz, Zz = (np.asarray(F(z), float) for F in (X, Y, Z))
    DXY = levi_civita_SM(m, chart, z, X, Y, h)
    DYX = levi_civita_SM(m, chart, z, Y, X, h)
    DXZ = levi_civita_SM(m, chart, z, X, Z, h)
    bracket = _directional(Y, z, Xz, h) - _directional(X, z, Yz, h)
    torsion = np.max(np.abs(E @ (DXY - DYX - bracket)))

    pair = lambda t: np.asarray(Y(t)) @ chart_metric(chart, t) @ np.asarray(Z(t))
    lhs = _directional(lambda t: np.array([pair(t)]), z, Xz, h)[0]
    metric = abs(lhs - (DXY @ G @ Zz + Yz @ G @ DXZ))

    pieces = connection_pieces(m, chart, z, X, Y, h)
    D = E @ DXY
    diff = D - pieces.nabla_star
    vertical = np.max(np.abs(diff[4:] - pieces.vertical_correction[4:]))
    horizontal = np.max(np.abs(diff[:4] - pieces.horizontal_correction[:4]))
    total = np.max(np.abs(D - pieces.total))

    mu_of = lambda t, V: (chart.coframe(t) @ np.asarray(V))[0]
    dmu_lhs = _directional(lambda t: np.array([mu_of(t, Y(t))]), z, Xz, h)[0] - D[0]
    Xf, Yf = E @ Xz, E @ Yz
    dmu_rhs = Xf[4:] @ Yf[1:4] - pieces.horizontal_correction[0]
    dmu = abs(dmu_lhs - dmu_rhs)

    corr = np.max(np.abs(pieces.vertical_correction + pieces.horizontal_correction))
    return ConnectionCheck(float(torsion), float(metric), float(vertical), float(horizontal),
                           float(total), float(dmu), float(corr))


def chart_direction(chart: SphereChart, z, frame_components) -> np.ndarray:
    """Chart vector whose adapted-frame components are ``frame_components``."""
    return np.linalg.solve(chart.coframe(z), np.asarray(frame_components, dtype=float))


def covariant_dU(m: MetricModel, chart: SphereChart, z, zeta, h: float = 1e-4) -> np.ndarray:
    """``(f* nabla)_zeta U`` at ``z`` from finite differences of ``u`` along the chart.

    Computed as ``du/dt + Gamma(dx/dt, u)`` with ``du/dt`` differenced through
    the chart map; independent of the horizontal-lift formula.
    """
    z = np.asarray(z, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    du = _directional(lambda t: chart.point(t).u, z, zeta, h)
    p = chart.point(z)
    data = curvature(m, z[:4], chart.margin)
    return du + data.Gamma(zeta[:4], p.u)
