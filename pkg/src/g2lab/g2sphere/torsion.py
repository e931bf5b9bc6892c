"""Torsion forms of a G2 structure from ``d phi`` and ``d *phi``.

With ``dphi = tau0 *phi + 3 tau1 ^ phi + *tau3`` and
``d*phi = 4 tau1 ^ *phi + tau2 ^ phi``, where ``tau2`` lies in the 14-dimensional
piece of 2-forms and ``tau3`` in the 27-dimensional piece of 3-forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .. import exterior7 as ex
from ..exterior7 import AltForm

__all__ = ["TorsionForms", "DegradedFitError", "torsion_extract", "constant_curvature_torsion"]


class DegradedFitError(ArithmeticError):
    """The inputs are not the differentials of a G2 structure to within tolerance."""

    def __init__(self, residual: float, tol: float, forms: "TorsionForms", context: str = ""):
        where = f" ({context})" if context else ""
        super().__init__(f"torsion fit residual {residual:.3e} exceeds tolerance {tol:.1e}{where}")
        self.context = context
        self.residual = residual
        self.tol = tol
        self.forms = forms


@dataclass(frozen=True)
class TorsionForms:
    tau0: float
    tau1: AltForm
    tau2: AltForm
    tau3: AltForm
    residual: float
    tau2_membership: float
    tau3_membership: float
    dphi_reconstruction: float
    dstarphi_reconstruction: float

    def norms(self) -> tuple[float, float, float, float]:
        return (abs(self.tau0), self.tau1.norm(), self.tau2.norm(), self.tau3.norm())


@lru_cache(maxsize=None)
def _tau1_solver(phi_key: bytes) -> tuple[np.ndarray, np.ndarray]:
    phi = AltForm(3, np.frombuffer(phi_key))
    # columns: e^i ^ phi in the 35 coordinates of 4-forms
    M = np.column_stack([ex.wedge(ex.monomial(i), phi).components for i in range(7)])
    gram = M.T @ M
    return M, gram


def torsion_extract(dphi: AltForm, dstarphi: AltForm, phi: Optional[AltForm] = None,
                    star_phi: Optional[AltForm] = None, tol: Optional[float] = 1e-6) -> TorsionForms:
    """Split ``dphi`` and ``dstarphi`` into torsion forms.

    ``tau1`` comes from the least-squares solution of ``3 gamma ^ phi = dphi``
    using the numerically computed Gram matrix of ``{e^i ^ phi}``.  The
    residual is the largest of the two reconstruction errors and the two
    membership defects; above ``tol`` a :class:`DegradedFitError` is raised
    (``tol=None`` disables the check).
    """
    if dphi.degree != 4 or dstarphi.degree != 5:
        raise ValueError("expected a 4-form and a 5-form")
    if phi is None or star_phi is None:
        phi, star_phi = ex.g2_model_forms()
    tau0 = ex.inner(dphi, star_phi) / 7.0
    M, gram = _tau1_solver(np.ascontiguousarray(phi.components).tobytes())
    coeff = np.linalg.solve(gram, M.T @ dphi.components) / 3.0
    tau1 = AltForm(1, coeff)
    rest4 = dphi - tau0 * star_phi - 3.0 * ex.wedge(tau1, phi)
    tau3 = ex.hodge_star(rest4)
    rest5 = dstarphi - 4.0 * ex.wedge(tau1, star_phi)
    tau2 = ex.hodge_star(rest5)

    rec_dphi = (dphi - (tau0 * star_phi + 3.0 * ex.wedge(tau1, phi) + ex.hodge_star(tau3))).max_abs()
    rec_dstar = (dstarphi - (4.0 * ex.wedge(tau1, star_phi) + ex.wedge(tau2, phi))).max_abs()
    m2 = (ex.wedge(tau2, phi) - ex.hodge_star(tau2)).max_abs()
    m3 = max(ex.wedge(tau3, phi).max_abs(), ex.wedge(tau3, star_phi).max_abs())
    residual = float(max(rec_dphi, rec_dstar, m2, m3))
    out = TorsionForms(float(tau0), tau1, tau2, tau3, residual, float(m2), float(m3),
                       float(rec_dphi), float(rec_dstar))
    if tol is not None and residual > tol:
        raise DegradedFitError(residual, tol, out)
    return out


def constant_curvature_torsion(C: float, corrected: bool = False) -> tuple[float, AltForm]:
    """Expected ``(tau0, tau3)`` on a space of constant curvature ``C``.

    Stated:    ``tau0 = 6(C+1)/7``, ``tau3 = (3C-tau0) alpha + (2-tau0) mu^beta - (C-tau0) alpha2``.
    Corrected: ``tau0 = 6(C+2)/7``, and ``C + 2`` in place of ``C`` in the ``alpha2`` term.
    """
    shift = 2.0 if corrected else 0.0
    tau0 = 6.0 * (C + 1.0 + (1.0 if corrected else 0.0)) / 7.0
    tau3 = ((3 * C - tau0) * ex.alpha()
            + (2 - tau0) * ex.wedge(ex.mu(), ex.beta())
            - (C + shift - tau0) * ex.alpha2())
    return tau0, tau3
