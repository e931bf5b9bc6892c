"""
Co-calibration and the Einstein condition
=========================================

d*phi vanishes on the Einstein catalog metrics and not on S^2 x S^2 with
unequal radii; there it is -Vol_M ^ (Ric U)^flat.
"""

import numpy as np

from g2lab.g2sphere import (SphereChart, d_numeric, dstarphi_closed, form_field,
                            ricci_u_vertical, sample_chart_points)
from g2lab.riemann4 import catalog, curvature

spacer = "_" * 60
rng = np.random.default_rng(3)

for name in ("flat", "sphere4", "hyperbolic4", "cp2"):
    m = catalog(name)
    chart = SphereChart(m)
    zs = sample_chart_points(m, 5, rng)
    worst = max(d_numeric(form_field(m, chart, "star_phi"), z, 1e-3).norm() for z in zs)
    ric = curvature(m, zs[0][:4])
    print(f"{name:12s} Einstein residual {ric.einstein_residual:.1e}   max |d*phi| {worst:.1e}")

print(spacer)

for r1, r2 in ((1.0, 2.0), (1.5, 1.5)):
    m = catalog("s2xs2", r1, r2)
    chart = SphereChart(m)
    z = sample_chart_points(m, 1, rng)[0]
    frame = chart.adapted_frame(z)
    num = d_numeric(form_field(m, chart, "star_phi"), z, 1e-3)
    print(f"\ns2xs2({r1}, {r2}) at z = {np.round(z, 2)}")
    print("  Ric endomorphism diagonal:", np.round(np.diag(curvature(m, z[:4]).ric_endo), 4))
    print("  |d*phi| numerical      :", num.norm())
    print("  |Vol_M ^ (Ric U)^flat| :", ricci_u_vertical(m, frame).norm())
    print("  closed form difference :", (num - dstarphi_closed(m, frame)).max_abs())
