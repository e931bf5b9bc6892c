"""Canonical forms of the sphere bundle as fields on a chart, and a numerical d."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .. import exterior7 as ex
from ..exterior7 import AltForm
from ..riemann4 import MetricModel
from .frame import AdaptedFrame, SphereChart

__all__ = [
    "FORM_IDS",
    "canonical_forms",
    "FormField",
    "form_field",
    "d_numeric",
    "richardson_partials",
    "frame_to_chart",
    "chart_to_frame",
]

FORM_IDS = ("alpha", "mu", "beta", "alpha1", "alpha2", "phi", "star_phi",
            "star_mu", "base_volume")


def canonical_forms(frame: Optional[AdaptedFrame] = None) -> dict[str, AltForm]:
    """The canonical forms in the adapted coframe of ``frame``.

    They are constant there, so ``frame`` only fixes where they live; the
    returned components are the same for every adapted frame.
    """
    phi, star_phi = ex.g2_model_forms()
    return {
        "alpha": ex.alpha(),
        "mu": ex.mu(),
        "beta": ex.beta(),
        "alpha1": ex.alpha1(),
        "alpha2": ex.alpha2(),
        "phi": phi,
        "star_phi": star_phi,
        "star_mu": ex.hodge_star(ex.mu()),
        "base_volume": ex.base_volume(),
    }


def frame_to_chart(form: AltForm, coframe: np.ndarray) -> AltForm:
    return ex.pullback(form, coframe)


def chart_to_frame(form: AltForm, coframe: np.ndarray) -> AltForm:
    return ex.pullback(form, np.linalg.inv(coframe))


@dataclass(frozen=True, eq=False)
class FormField:
    """A frame-constant form evaluated in chart components at chart points ``z``."""

    chart: SphereChart
    form: AltForm
    name: str = ""

    @property
    def degree(self) -> int:
        return self.form.degree

    def coframe(self, z) -> np.ndarray:
        return self.chart.coframe(z)

    def __call__(self, z) -> AltForm:
        return frame_to_chart(self.form, self.chart.coframe(z))


def form_field(m: MetricModel, chart: Optional[SphereChart], form_id) -> FormField:
    """Field of a canonical form (by id) or of an explicit frame-constant :class:`AltForm`."""
    chart = chart or SphereChart(m)
    if isinstance(form_id, AltForm):
        return FormField(chart, form_id)
    forms = canonical_forms()
    if form_id not in forms:
        raise KeyError(f"unknown form {form_id!r}; choose from {', '.join(FORM_IDS)}")
    return FormField(chart, forms[form_id], form_id)


def richardson_partials(fn: Callable[[np.ndarray], np.ndarray], z, h: float) -> np.ndarray:
    """``[c] -> d_c fn(z)`` by central differences with one Richardson level."""
    z = np.asarray(z, dtype=float)
    out = []
    for c in range(z.size):
        e = np.zeros(z.size)
        e[c] = 1.0

        def central(s):
            return (np.asarray(fn(z + s * e)) - np.asarray(fn(z - s * e))) / (2 * s)

        out.append((4 * central(h / 2) - central(h)) / 3)
    return np.array(out)


def d_numeric(field, z, h: float = 1e-4, frame: bool = True) -> AltForm:
    """Exterior derivative of a form field by finite differences.

    ``(dw)_{i0..ip} = sum_j (-1)^j d_{i_j} w_{..^i_j..}`` on chart components,
    each partial from central differences at steps ``h`` and ``h/2`` combined
    by Richardson extrapolation.  With ``frame=True`` the result is returned in
    the adapted coframe at ``z``; otherwise in the chart cobasis.
    """
    if not 1e-6 <= h <= 1e-3:
        raise ValueError(f"step {h:g} outside [1e-6, 1e-3]")
    z = np.asarray(z, dtype=float)
    if hasattr(field, "chart"):
        field.chart.check(z)
    p = field(z).degree
    partials = richardson_partials(lambda t: field(t).components, z, h)
    dw = ex.d_from_partials(partials, p)
    if frame:
        return chart_to_frame(dw, field.coframe(z))
    return dw
