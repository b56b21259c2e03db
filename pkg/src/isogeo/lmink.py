"""Minkowski 4-space and the Laguerre dictionary of isotropic 3-space.

Vectors of Minkowski space are plain float arrays with a trailing axis of
length 4, ``(x0, x1, x2, x3)``, paired with signature ``(-, +, +, +)``.
Points of isotropic space are arrays with a trailing axis of length 3,
``(l, x, y)``, embedded as ``(l, x, y, l)``.  Every function broadcasts over
leading axes, so whole grids can be processed at once.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGrid, LightlikePlane, LineInsideIsotropicSpace

#: Lightlike point sphere complex of isotropic space.
P = np.array([1.0, 0.0, 0.0, 1.0])
#: Complementary null vector, <P, PT> = 1.
PT = np.array([-0.5, 0.0, 0.0, 0.5])
#: Timelike point sphere complex of Euclidean space.
P_EUCLID = np.array([1.0, 0.0, 0.0, 0.0])


def mink_inner(x, y):
    """Minkowski pairing ``-x0*y0 + x1*y1 + x2*y2 + x3*y3``.

    Bilinear, not sesquilinear: complex inputs are paired without conjugation,
    which is what the Wirtinger calculus on surfaces needs.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    # -x0 y0 + x3 y3 in null coordinates: no cancellation when x0 ~ x3 are large
    xm, xp = x[..., 3] - x[..., 0], x[..., 3] + x[..., 0]
    ym, yp = y[..., 3] - y[..., 0], y[..., 3] + y[..., 0]
    return 0.5 * (xm * yp + xp * ym) + x[..., 1] * y[..., 1] + x[..., 2] * y[..., 2]


def embed(p):
    """Isotropic coordinates ``(l, x, y)`` -> Minkowski vector ``(l, x, y, l)``."""
    p = np.asarray(p)
    return np.stack([p[..., 0], p[..., 1], p[..., 2], p[..., 0]], axis=-1)


def iso_coords(x):
    """Inverse of :func:`embed` for vectors with ``<x, P> = 0``.

    The l-coordinate is read from the average of the first and last slot, so
    that tiny violations of ``x0 = x3`` are not amplified.
    """
    x = np.asarray(x)
    return np.stack([0.5 * (x[..., 0] + x[..., 3]), x[..., 1], x[..., 2]], axis=-1)


def project_iso(x):
    """Projection onto isotropic space along PT: ``x - <x, P> PT``."""
    x = np.asarray(x, dtype=float)
    return x - mink_inner(x, P)[..., None] * PT


@dataclass(frozen=True)
class SphereI:
    """Oriented sphere of isotropic space with signed radius.

    ``radius == 0`` is a sphere of the cylindrical (lightlike) type.
    """

    center: np.ndarray
    radius: float


@dataclass(frozen=True)
class PlaneI:
    """Affine isotropic hyperplane ``{x : <x, g> = q}`` with lightlike ``g``."""

    g: np.ndarray
    q: float

    @property
    def is_spacelike(self):
        return mink_inner(self.g, P) != 0.0


@dataclass(frozen=True)
class ContactLine:
    """Affine null line ``base + t * dir``: a contact element."""

    base: np.ndarray
    dir: np.ndarray


def sphere_point(center, radius):
    """Minkowski point ``c + r PT`` of the sphere with given center and radius."""
    return embed(center) + np.asarray(radius, dtype=float)[..., None] * PT


def sphere_decompose(s):
    """Split ``s`` into center and signed radius: ``r = <s, P>``, ``c = s - r PT``."""
    s = np.asarray(s, dtype=float)
    radius = mink_inner(s, P)
    center = iso_coords(s - radius[..., None] * PT)
    return SphereI(center=center, radius=radius)


def sphere_residual(sphere, p):
    """``(x - c1)^2 + (y - c2)^2 - 2 r (l - c0)``; zero iff ``p`` is on the sphere."""
    c = np.asarray(sphere.center, dtype=float)
    p = np.asarray(p, dtype=float)
    return ((p[..., 1] - c[..., 1]) ** 2 + (p[..., 2] - c[..., 2]) ** 2
            - 2.0 * sphere.radius * (p[..., 0] - c[..., 0]))


def fit_sphere(points):
    """Least-squares isotropic sphere through sampled points ``(..., 3)``.

    The membership equation is linear in ``(c1, c2, r, k)`` after expanding,
    ``x^2 + y^2 = 2 c1 x + 2 c2 y + 2 r l - k`` with
    ``k = c1^2 + c2^2 + 2 r c0``; at least four points in general position are
    needed.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts) < 4:
        raise ValueError("an isotropic sphere has four parameters; need >= 4 points")
    l, x, y = pts.T
    A = np.column_stack([2 * x, 2 * y, 2 * l, -np.ones_like(l)])
    (c1, c2, r, k), *_ = np.linalg.lstsq(A, x * x + y * y, rcond=None)
    c0 = (k - c1 * c1 - c2 * c2) / (2 * r) if r != 0 else 0.0
    return SphereI(center=np.array([c0, c1, c2]), radius=r)


def plane_from_coefficients(a, b, c, q):
    """Plane ``a l + b x + c y = q`` as a normalized isotropic hyperplane.

    The lightlike ``g`` is scaled so that ``<g, P> = 1``.  Vertical planes
    (``a == 0``) have no lightlike representative (every ``g`` reproducing
    the equation has ``<g, g> = b^2 + c^2``) and raise
    :class:`LightlikePlane`; the null hyperplanes ``<x, P> = q`` parallel to
    isotropic space can be built directly as ``PlaneI(P, q)``.
    """
    if a == 0:
        raise LightlikePlane("vertical plane (a = 0) has no lightlike normal vector")
    g1, g2 = b / a, c / a
    g0 = -0.5 * (1.0 + g1 * g1 + g2 * g2)
    return PlaneI(g=np.array([g0, g1, g2, g0 + 1.0]), q=q / a)


def plane_unit_normal(a, b, c):
    """Unit normal of the spacelike plane ``a l + b x + c y = q``.

    Returns ``((b^2 + c^2) / (2 a^2), -b / a, -c / a)``, which lies on the
    isotropic unit sphere ``x^2 + y^2 = 2 l``.
    """
    if a == 0:
        raise LightlikePlane("plane with zero l-coefficient is lightlike")
    return np.array([(b * b + c * c) / (2.0 * a * a), -b / a, -c / a])


def oriented_contact_residual(s, plane):
    """``<s, g> - q``; zero iff the sphere ``s`` touches ``plane`` with orientation."""
    return mink_inner(s, plane.g) - plane.q


def contact_point(line):
    """Intersection of a contact line with isotropic space."""
    base = np.asarray(line.base, dtype=float)
    d = np.asarray(line.dir, dtype=float)
    dp = mink_inner(d, P)
    if np.any(dp == 0.0):
        raise LineInsideIsotropicSpace("contact line direction lies in isotropic space")
    t = -mink_inner(base, P) / dp
    return iso_coords(base + t[..., None] * d)


def euclid_sphere_decompose(s):
    """Euclidean isotropy projection ``s = c + r (1, 0, 0, 0)``.

    Returns ``(center, radius)``; the sign of the radius is the orientation.
    """
    s = np.asarray(s, dtype=float)
    return s[..., 1:].copy(), s[..., 0].copy()


def legendre_residuals(base, direction, spacing=(1.0, 1.0)):
    """Contact and immersion residuals of a sampled contact-element field.

    Parameters
    ----------
    base, direction : array_like, shape (nu, nv, 4)
        A section ``l = base`` of the lines and their null directions.
    spacing : tuple of float
        Grid spacing ``(hu, hv)``.

    Returns
    -------
    contact : float
        Max over interior samples of ``|<dl(X), g>|`` for ``X`` in the
        coordinate directions, with ``g = dir / <dir, P>``.
    immersion : float
        Min over interior samples of the smaller singular value of
        ``X -> dl(X)`` taken modulo the null direction.  Representatives are
        chosen in isotropic space, ``w - <w, P> g``, and measured in the
        ``(l, x, y)`` coordinates.
    """
    base = np.asarray(base, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if base.ndim != 3 or base.shape[0] < 3 or base.shape[1] < 3:
        raise DegenerateGrid("legendre_residuals needs at least a 3x3 grid")
    dp = mink_inner(direction, P)
    if np.any(dp == 0.0):
        raise LineInsideIsotropicSpace("a contact line is not spacelike-representable")
    g = direction / dp[..., None]
    hu, hv = spacing
    lu = (base[2:, 1:-1] - base[:-2, 1:-1]) / (2 * hu)
    lv = (base[1:-1, 2:] - base[1:-1, :-2]) / (2 * hv)
    gi = g[1:-1, 1:-1]
    contact = max(np.max(np.abs(mink_inner(lu, gi))), np.max(np.abs(mink_inner(lv, gi))))

    wu = iso_coords(lu - mink_inner(lu, P)[..., None] * gi)
    wv = iso_coords(lv - mink_inner(lv, P)[..., None] * gi)
    jac = np.stack([wu, wv], axis=-1)
    smin = np.linalg.svd(jac, compute_uv=False)[..., -1]
    return float(contact), float(np.min(smin))
