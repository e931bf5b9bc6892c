"""The canonical G2 structure on the unit tangent bundle of a 4-manifold."""

from .closed import (
    FrameCurvature,
    NeverCalibratedReport,
    a_tensor,
    curvature_two_form,
    dphi_closed,
    dstarphi_closed,
    frame_curvature,
    never_calibrated_check,
    ricci_u_vertical,
    tau0_general,
)
from .connection import (
    ConnectionCheck,
    ConnectionPieces,
    chart_christoffel,
    chart_direction,
    chart_metric,
    connection_check,
    connection_pieces,
    covariant_dU,
    levi_civita_closed,
    levi_civita_SM,
    linear_field,
)
from .forms import FORM_IDS, FormField, canonical_forms, d_numeric, form_field, richardson_partials
from .frame import (
    POLE_LIMIT,
    AdaptedFrame,
    SphereChart,
    SpherePoint,
    adapted_frame,
    complete_unit,
    horizontal_lift,
    inverse_stereo,
    sample_chart_points,
    sasaki_metric,
    stereo,
    vertical_embed,
)
from .torsion import DegradedFitError, TorsionForms, constant_curvature_torsion, torsion_extract
