"""
d phi on the unit tangent bundle of the round 4-sphere
======================================================

Differentiate phi numerically in a chart of S_M and compare with the
curvature expression, with and without the -2 mu^alpha1 term.
"""

import numpy as np

from g2lab import exterior7 as ex
from g2lab.g2sphere import (SphereChart, d_numeric, dphi_closed, form_field,
                            sample_chart_points, torsion_extract)
from g2lab.riemann4 import catalog

spacer = "_" * 60

m = catalog("sphere4")
chart = SphereChart(m)
z = sample_chart_points(m, 1, np.random.default_rng(7))[0]
print("chart point z = (x, w):", np.round(z, 3))

frame = chart.adapted_frame(z)
print("u =", np.round(frame.u, 4), " g(u, u) =", frame.u @ frame.g @ frame.u)
print("adapted frame Gram matrix - I:", np.max(np.abs(frame.gram() - np.eye(7))))

print(spacer)

dphi = d_numeric(form_field(m, chart, "phi"), z)
print("\nd phi from central differences (adapted coframe), rounded to 8 digits:")
print("   ", ex.AltForm(4, np.round(dphi.components, 8) + 0.0))

curv = dphi_closed(m, frame)
print("\ncurvature expression without the mu^alpha1 term:")
print("    max difference =", (dphi - curv).max_abs())
print("    difference + 2 mu^alpha1 =",
      (dphi - curv + 2 * ex.wedge(ex.mu(), ex.alpha1())).max_abs())
print("with it:", (dphi - dphi_closed(m, frame, corrected=True)).max_abs())

print(spacer)

dstar = d_numeric(form_field(m, chart, "star_phi"), z)
t = torsion_extract(dphi, dstar)
print("\ntorsion forms from the numerical derivatives")
print("tau0 =", t.tau0, " (18/7 =", 18 / 7, ")")
print("|tau1|, |tau2| =", t.tau1.norm(), t.tau2.norm())
print("|tau3| =", t.tau3.norm())
print("reconstruction residual:", t.residual)
