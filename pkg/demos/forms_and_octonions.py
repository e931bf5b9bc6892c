"""
The model G2 form on R^7
========================

Build phi from the canonical pieces, check it against the octonion product
and split a random 3-form into its G2 pieces.
"""

import numpy as np

from g2lab import exterior7 as ex
from g2lab import octonion as oc

spacer = "_" * 60

phi, star_phi = ex.g2_model_forms()
print("phi = alpha + mu^beta - alpha2 =")
print("   ", phi)
print("|phi|^2 =", ex.inner(phi, phi))
print("*phi =")
print("   ", star_phi)
print("phi ^ *phi = 7 Vol ?", (ex.wedge(phi, star_phi) - 7 * ex.volume()).max_abs() == 0)

print(spacer)

print("\nThe same form from octonion multiplication, <X1 X2, X3> on imaginary octonions")
print("with e0 placed in the real slot of the second quaternion:")
from_octonions = oc.phi_altform()
print("max difference over the 35 basis triples:", (from_octonions - phi).max_abs())

rng = np.random.default_rng(0)
a, b = (oc.Octonion.from_array(v) for v in rng.standard_normal((2, 8)))
print("|ab| =", oc.oct_mul(a, b).norm(), " |a||b| =", a.norm() * b.norm())

print(spacer)

print("\nA random 3-form splits as 1 + 7 + 27:")
gamma = ex.AltForm(3, rng.standard_normal(35))
parts = ex.g2_project3(gamma)
for name, part in zip(("1", "7", "27"), parts):
    print(f"  |part{name}| = {part.norm():.4f}")
print("sum of parts - gamma:", (sum(parts, ex.AltForm(3, np.zeros(35))) - gamma).max_abs())
print("part27 ^ phi, part27 ^ *phi:", ex.wedge(parts.part27, phi).max_abs(),
      ex.wedge(parts.part27, star_phi).max_abs())
