"""Levi-Civita data of a chart metric.

Convention: ``R(X, Y) Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``.
With it the round sphere has ``R(X, Y) Z = <Y, Z> X - <X, Z> Y`` (curvature +1)
and ``r(X, Y) = tr(Z -> R(Z, X) Y)`` is positive on spheres.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metric import MetricError, MetricModel

__all__ = ["CurvatureData", "christoffel", "curvature", "orthonormal_frame", "BOUNDARY_MARGIN"]

# reject points closer than this to the chart boundary (10 x the oracle step)
BOUNDARY_MARGIN = 1e-3
COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class CurvatureData:
    """Curvature at a chart point.

    ``christoffel[k, i, j] = Gamma^k_ij``; ``riemann[a, b, c, d] = g(R(d_a, d_b) d_c, d_d)``;
    ``ricci[b, c] = r(d_b, d_c)``; ``ric_endo = g^-1 r``.
    """

    x: np.ndarray
    g: np.ndarray
    ginv: np.ndarray
    christoffel: np.ndarray
    riemann_op: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scal: float
    ric_endo: np.ndarray
    einstein_residual: float

    def R(self, X, Y, Z) -> np.ndarray:
        """Coordinate components of ``R(X, Y) Z``."""
        return np.einsum("abcm,a,b,c->m", self.riemann_op, X, Y, Z)

    def Rlow(self, X, Y, Z, W) -> float:
        return float(np.einsum("abcd,a,b,c,d->", self.riemann, X, Y, Z, W))

    def Gamma(self, X, Y) -> np.ndarray:
        """``Gamma(X, Y)^k = Gamma^k_ij X^i Y^j``."""
        return np.einsum("kij,i,j->k", self.christoffel, X, Y)

    def sectional(self, X, Y) -> float:
        X, Y = np.asarray(X, float), np.asarray(Y, float)
        gXX, gYY, gXY = X @ self.g @ X, Y @ self.g @ Y, X @ self.g @ Y
        return self.Rlow(X, Y, Y, X) / (gXX * gYY - gXY ** 2)

    def bianchi_residual(self) -> float:
        R = self.riemann
        cyc = R + np.transpose(R, (1, 2, 0, 3)) + np.transpose(R, (2, 0, 1, 3))
        return float(np.max(np.abs(cyc)))

    def symmetry_residual(self) -> float:
        R = self.riemann
        return float(max(
            np.max(np.abs(R + np.transpose(R, (1, 0, 2, 3)))),
            np.max(np.abs(R + np.transpose(R, (0, 1, 3, 2)))),
            np.max(np.abs(R - np.transpose(R, (2, 3, 0, 1)))),
            np.max(np.abs(self.christoffel - np.transpose(self.christoffel, (0, 2, 1)))),
        ))


def _metric_at(m: MetricModel, x: np.ndarray, margin: float) -> tuple[np.ndarray, np.ndarray]:
    m.domain.check(x, margin)
    g = m.g(x)
    if np.max(np.abs(g - g.T)) > 1e-12:
        raise MetricError("metric matrix is not symmetric")
    if np.linalg.cond(g) > COND_LIMIT:
        raise MetricError(f"metric is ill-conditioned at {np.round(x, 6).tolist()}")
    return g, np.linalg.inv(g)


def _gamma_low(dg: np.ndarray) -> np.ndarray:
    # [l, i, j] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    return 0.5 * (np.transpose(dg, (2, 0, 1)) + np.transpose(dg, (2, 1, 0)) - dg)


def christoffel(m: MetricModel, x, margin: float = BOUNDARY_MARGIN) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    _, ginv = _metric_at(m, x, margin)
    return np.einsum("kl,lij->kij", ginv, _gamma_low(m.dg(x)))


def curvature(m: MetricModel, x, margin: float = BOUNDARY_MARGIN) -> CurvatureData:
    x = np.asarray(x, dtype=float)
    g, ginv = _metric_at(m, x, margin)
    dg = m.dg(x)
    d2g = m.d2g(x)

    low = _gamma_low(dg)
    gam = np.einsum("kl,lij->kij", ginv, low)
    # d_m Gamma^k_ij
    dginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    dlow = 0.5 * (np.transpose(d2g, (0, 3, 1, 2)) + np.transpose(d2g, (0, 3, 2, 1))
                  - d2g)  # [m, l, i, j]
    dgam = np.einsum("mkl,lij->mkij", dginv, low) + np.einsum("kl,mlij->mkij", ginv, dlow)

    # riemann_op[a, b, c, m]: component m of R(d_a, d_b) d_c
    op = (np.transpose(dgam, (0, 2, 3, 1)) - np.transpose(dgam, (2, 0, 3, 1))
          + np.einsum("lbc,mal->abcm", gam, gam) - np.einsum("lac,mbl->abcm", gam, gam))
    riemann = np.einsum("abcm,md->abcd", op, g)
    ricci = np.einsum("abca->bc", op)
    ricci = 0.5 * (ricci + ricci.T)
    scal = float(np.einsum("bc,bc->", ginv, ricci))
    ric_endo = ginv @ ricci
    resid = float(np.max(np.abs(ric_endo - scal / 4 * np.eye(4))))
    return CurvatureData(x=x, g=g, ginv=ginv, christoffel=gam, riemann_op=op, riemann=riemann,
                         ricci=ricci, scal=scal, ric_endo=ric_endo, einstein_residual=resid)


def orthonormal_frame(m: MetricModel, x) -> np.ndarray:
    """Gram-Schmidt of the coordinate basis in order; columns are the frame.

    Equal to ``L^-T`` for the Cholesky factor ``g = L L^T``: upper triangular
    with positive diagonal, hence positively oriented.
    """
    g = m.g(np.asarray(x, dtype=float))
    L = np.linalg.cholesky(g)
    return np.linalg.inv(L).T
