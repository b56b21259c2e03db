"""Laguerre geometry of isotropic 3-space inside Minkowski 4-space.

Generate, transform and numerically verify conformal spacelike surfaces of
isotropic space, including minimal and constant mean curvature surfaces
built from spinor, Weierstrass-type and Kenmotsu-type data.
"""
from . import cli, export, grid, herm, holo, lmink, represent, spin, surf
from .errors import (CompatibilityError, DegenerateGrid, IntegrabilityError, IsogeoError,
                     LightlikePlane, LineInsideIsotropicSpace, NonConformal, NonFiniteError,
                     NonSpacelike, ParseError, PoleError)
from .grid import GridSpec
from .herm import Herm2, SpinFactor
from .lmink import P, PT, ContactLine, PlaneI, SphereI, mink_inner
from .represent import (KenmotsuData, RationalPair, SpinorData, example_catalogue,
                        gauss_from_h, kenmotsu_surface, period_L, spinor_surface,
                        weierstrass_surface)
from .surf import Jet, SurfacePatch

__version__ = "0.1.0"
