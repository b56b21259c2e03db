"""Tour of the closed-form cmc catalogue.

Builds every family twice, once from its closed form and once by integrating
its Kenmotsu data, and prints how far apart they are along with the
measured mean curvature and the worst structure-equation residual.

    python3 demos/catalogue_tour.py
"""
from fractions import Fraction

import numpy as np

from isogeo import holo, represent, surf
from isogeo.grid import GridSpec

grid = GridSpec(-1, 1, -1, 1, 101, 101)
center = (50, 50)

cases = [
    ("sphere", {"H": 1.0}),
    ("cylinder", {"H": 1.0}),
    ("delaunay", {"H": 1.0, "a": 1.0}),
    ("delaunay", {"H": 1.0, "a": -2.0}),
    ("singly_periodic", {"H": 1.0, "a": Fraction(1), "b": Fraction(-3)}),
    ("singly_periodic", {"H": 1.0, "a": Fraction(1, 3), "b": Fraction(4, 3)}),
]

print(f"{'family':<18}{'params':<22}{'|x - x_closed|':>15}{'|H - 1|':>11}{'structure':>11}")
for name, params in cases:
    closed = represent.example_catalogue(name, params, grid)

    # integrate the Kenmotsu data; h1 has to start at the catalogue's value
    data, h1 = represent.catalogue_kenmotsu(name, params)
    h1_base = complex(holo.evaluate(h1, grid.z()[center]))
    gen = represent.kenmotsu_surface(data, grid, basepoint=center, x0=closed.iso[center],
                                     h1_base=h1_base)

    err = np.max(np.abs(gen.iso - closed.iso))
    dH = np.max(np.abs(gen.forms.H - 1))
    worst = max(surf.max_residuals(surf.structure_residuals(closed)).values())
    shown = ", ".join(f"{k}={v}" for k, v in params.items() if k != "H")
    print(f"{name:<18}{shown:<22}{err:>15.2e}{dH:>11.2e}{worst:>11.2e}")

# symmetry data for the three singly periodic parameter sets
print()
for a, b in [("1", "-3"), ("2", "8/3"), ("1/3", "4/3")]:
    pair = represent.RationalPair.from_strings(a, b)
    print(f"a={a:<4} b={b:<4}  L={str(represent.period_L(pair)):<4} symmetry {represent.dihedral_label(pair)}")
