"""Spin transformations of the plane.

B = (1, conj z) solves the Dirac-type equation with rho = 1 and carries the
flat plane (0, u, v) to the paraboloid ((u^2 + v^2)/2, u, v), an isotropic
sphere with H = 1.  Dropping rho to 0 breaks the equation; the transformed
differential stops being closed, and we can see that in the residuals.

    python3 demos/spin_plane_to_sphere.py
"""
import numpy as np

from isogeo import represent, spin
from isogeo.errors import IntegrabilityError
from isogeo.grid import GridSpec

grid = GridSpec(-1, 1, -1, 1, 101, 101)
plane = represent.base_plane(grid)
U, V = grid.mesh()

field = spin.SpinField.from_functions(grid, np.ones_like, np.conj, rho=1.0)
print("rho recovered from B on the plane:", float(np.mean(spin.rho_base_plane(field))))
print("Dirac residual, rho = 1:", spin.dirac_residual(field, plane))
print("Dirac residual, rho = 0:", spin.dirac_residual(field, plane, rho=0.0))

patch = spin.integrate_spin(field, plane, base=(50, 50))
paraboloid = np.stack([(U ** 2 + V ** 2) / 2, U, V], -1)
print("loop residual:", patch.meta["loop_residual"])
print("max |x - paraboloid|:", np.max(np.abs(patch.iso - paraboloid)))
print("H range:", patch.forms.H.min(), patch.forms.H.max())
print("max |Q|:", np.max(np.abs(patch.forms.Q)))

# a second example: alpha = e^{z/2}, beta = e^{zbar} e^{z/2}; rho = e^u varies
field = spin.SpinField.from_functions(grid, lambda Z: np.exp(Z / 2),
                                      lambda Z: np.exp(np.conj(Z) + Z / 2))
rho = spin.rho_base_plane(field)
field = spin.SpinField(grid, field.alpha, field.beta, rho)
patch = spin.integrate_spin(field, plane, rule="cubic")
print()
print("max |rho - e^u|:", np.max(np.abs(rho - np.exp(U))))
print("max |H - (H + rho)/det B|:", np.max(np.abs(patch.forms.H - patch.meta["H_expected"])))

# an incompatible field: no rho can make the differential closed
bad = spin.SpinField.from_functions(grid, np.ones_like, lambda Z: Z * np.conj(Z), rho=0.0)
try:
    spin.integrate_spin(bad, plane)
except IntegrabilityError as exc:
    print()
    print("beta = |z|^2 rejected:", exc)
