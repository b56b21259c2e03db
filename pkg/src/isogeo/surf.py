"""Sampled conformal surface patches in isotropic space.

A patch carries, per grid sample, the embedded position and its first and
second partial derivatives (the *jet*), the lightlike Gauss map ``g`` and the
fundamental-form data derived from them.  Wirtinger derivatives follow
``d/dz = (d/du - i d/dv) / 2``.

The surface Gauss map is ``nu = g - PT`` (projection of ``g`` to isotropic
space).  Note this is the opposite sign of the plane-normal convention of
:func:`isogeo.lmink.plane_unit_normal`.
"""
from dataclasses import dataclass, field

import numpy as np

from . import grid as _grid
from .errors import DegenerateGrid, NonConformal, NonFiniteError, NonSpacelike
from .lmink import P, PT, embed, iso_coords, mink_inner

#: Stencil order used for derivatives of derived fields (sigma, H, Q, g) and
#: for second derivatives built from analytic first derivatives.
VERIFY_ORDER = 8

COND_MAX = 1e8
CONFORMAL_TOL = 1e-6


@dataclass(frozen=True)
class Jet:
    """Embedded position and partial derivatives, each of shape ``(..., 4)``."""

    x: np.ndarray
    xu: np.ndarray
    xv: np.ndarray
    xuu: np.ndarray
    xuv: np.ndarray
    xvv: np.ndarray

    @property
    def iso(self):
        """Positions in ``(l, x, y)`` coordinates."""
        return iso_coords(self.x)


@dataclass(frozen=True)
class FundForms:
    sigma: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray
    H: np.ndarray
    Q: np.ndarray
    K: np.ndarray
    #: ``max(|<xu,xu> - <xv,xv>|, 2|<xu,xv>|) / e^{2 sigma}`` per sample.
    conformality: np.ndarray

    @property
    def e2s(self):
        return np.exp(2 * self.sigma)


@dataclass(frozen=True)
class SurfacePatch:
    grid: _grid.GridSpec
    jet: Jet
    g: np.ndarray
    forms: FundForms
    provenance: str = "closed-form"
    meta: dict = field(default_factory=dict)

    @property
    def iso(self):
        return self.jet.iso

    @property
    def xz(self):
        return 0.5 * (self.jet.xu - 1j * self.jet.xv)

    @property
    def gauss_normal(self):
        """Gauss map ``nu = pi_I g`` in ``(l, x, y)`` coordinates."""
        return iso_coords(self.g - PT)

    def fields(self):
        """Per-sample scalar fields keyed by export name, each ``(nu, nv)``."""
        U, V = self.grid.mesh()
        iso = self.iso
        f = self.forms
        return {
            "u": U, "v": V,
            "l": iso[..., 0], "x": iso[..., 1], "y": iso[..., 2],
            "sigma": f.sigma, "H": f.H, "K": f.K,
            "Qre": f.Q.real, "Qim": f.Q.imag,
        }


def _finite(name, a):
    if not np.all(np.isfinite(a)):
        raise NonFiniteError(f"non-finite values in {name}")
    return a


def _sample(fn, U, V):
    out = np.asarray(fn(U, V), dtype=float)
    if out.shape[-1] == 3:
        out = embed(out)
    return out


def jets_from_closure(f, grid, derivs=None, order=2):
    """Sample position and derivatives of ``f`` on ``grid``.

    Parameters
    ----------
    f : callable
        ``f(U, V) -> array (..., 3)`` of ``(l, x, y)`` coordinates.
    derivs : dict, optional
        Analytic partials keyed ``"u", "v", "uu", "uv", "vv"``, same
        signature as ``f``.  Missing entries are replaced by finite
        differences: first derivatives from the sampled positions, second
        derivatives from the (analytic or differenced) first derivatives when
        ``"u"``/``"v"`` are supplied, else directly from positions.
    order : int
        Stencil order of the finite differences (centred in the interior,
        one-sided of the same order at the boundary).
    """
    derivs = derivs or {}
    U, V = grid.mesh()
    x = _finite("position", _sample(f, U, V))
    hu, hv = grid.hu, grid.hv

    def get(key, fallback):
        if key in derivs:
            return _finite(key, _sample(derivs[key], U, V))
        return fallback()

    xu = get("u", lambda: _grid.diff(x, hu, 0, 1, order))
    xv = get("v", lambda: _grid.diff(x, hv, 1, 1, order))
    first_analytic = "u" in derivs and "v" in derivs
    if first_analytic:
        xuu = get("uu", lambda: _grid.diff(xu, hu, 0, 1, order))
        xvv = get("vv", lambda: _grid.diff(xv, hv, 1, 1, order))
        xuv = get("uv", lambda: 0.5 * (_grid.diff(xu, hv, 1, 1, order)
                                       + _grid.diff(xv, hu, 0, 1, order)))
    else:
        xuu = get("uu", lambda: _grid.diff(x, hu, 0, 2, order))
        xvv = get("vv", lambda: _grid.diff(x, hv, 1, 2, order))
        xuv = get("uv", lambda: _grid.diff(_grid.diff(x, hu, 0, 1, order), hv, 1, 1, order))
    return Jet(x, xu, xv, xuu, xuv, xvv)


def lightlike_gauss(xu, xv, cond_max=COND_MAX):
    """Lightlike Gauss map from the tangent vectors.

    Solves ``<xu, g> = <xv, g> = 0`` for ``g = (n0 - 1/2, n1, n2, n0 + 1/2)``,
    i.e. the 2x2 system ``xu.x n1 + xu.y n2 = -xu.l`` (same for ``v``), then
    completes with ``n0 = -(n1^2 + n2^2) / 2`` so that ``<g, g> = 0`` and
    ``<g, P> = 1``.
    """
    xu = np.asarray(xu, dtype=float)
    xv = np.asarray(xv, dtype=float)
    a, b, c, d = xu[..., 1], xu[..., 2], xv[..., 1], xv[..., 2]
    lu = 0.5 * (xu[..., 0] + xu[..., 3])
    lv = 0.5 * (xv[..., 0] + xv[..., 3])
    det = a * d - b * c
    scale = np.maximum(np.hypot(a, b) * np.hypot(c, d), np.finfo(float).tiny)
    # 2x2 condition number via singular values of [[a, b], [c, d]].
    fro2 = a * a + b * b + c * c + d * d
    adet = np.abs(det)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = (fro2 + np.sqrt(np.maximum(fro2 * fro2 - 4 * adet * adet, 0.0))) / (2 * adet)
    if np.any(~(cond <= cond_max)) or np.any(adet <= 1e-300 * scale):
        raise NonSpacelike("tangent plane is not spacelike (singular 2x2 solve)")
    n1 = (-lu * d + lv * b) / det
    n2 = (-lv * a + lu * c) / det
    n0 = -0.5 * (n1 * n1 + n2 * n2)
    return np.stack([n0 - 0.5, n1, n2, n0 + 0.5], axis=-1)


def fundamental_forms(jet, g, conformal_tol=CONFORMAL_TOL):
    """Conformal factor, second fundamental form, H, Q and K per sample.

    ``e^{2 sigma}`` is the average of ``<xu, xu>`` and ``<xv, xv>``; samples
    whose conformality defect exceeds ``conformal_tol * e^{2 sigma}`` raise
    :class:`NonConformal` (pass ``conformal_tol=None`` to skip the check).
    """
    guu = mink_inner(jet.xu, jet.xu)
    gvv = mink_inner(jet.xv, jet.xv)
    guv = mink_inner(jet.xu, jet.xv)
    e2s = 0.5 * (guu + gvv)
    if np.any(e2s <= 0):
        raise NonSpacelike("induced metric is not positive definite")
    conf = np.maximum(np.abs(guu - gvv), 2 * np.abs(guv)) / e2s
    if conformal_tol is not None and np.any(conf > conformal_tol):
        raise NonConformal(f"conformality defect {np.max(conf):.3e} exceeds {conformal_tol:.1e}")
    L = mink_inner(jet.xuu, g)
    M = mink_inner(jet.xuv, g)
    N = mink_inner(jet.xvv, g)
    H = (L + N) / (2 * e2s)
    Q = 0.25 * (L - N - 2j * M)
    K = H * H - 4 * np.abs(Q) ** 2 / (e2s * e2s)
    return FundForms(0.5 * np.log(e2s), L, M, N, H, Q, K, conf)


def principal_curvatures(forms):
    """Eigenvalues ``k1 <= k2`` of the shape operator ``e^{-2 sigma} [[L, M], [M, N]]``."""
    e2s = np.exp(2 * forms.sigma)
    rad = np.hypot(0.5 * (forms.L - forms.N), forms.M) / e2s
    return forms.H - rad, forms.H + rad


def build_patch(grid, jet, provenance="closed-form", meta=None, conformal_tol=CONFORMAL_TOL):
    """Assemble a :class:`SurfacePatch` from a jet."""
    g = lightlike_gauss(jet.xu, jet.xv)
    forms = fundamental_forms(jet, g, conformal_tol)
    return SurfacePatch(grid, jet, g, forms, provenance, dict(meta or {}))


def patch_from_first_derivatives(grid, x, xu, xv, provenance="integrated", meta=None,
                                 order=None, conformal_tol=CONFORMAL_TOL):
    """Patch from sampled positions and exact first derivatives.

    Second derivatives are one level of centred differences of ``xu, xv``.
    Inputs may be given in ``(l, x, y)`` or embedded coordinates.
    """
    x, xu, xv = (embed(a) if np.shape(a)[-1] == 3 else np.asarray(a, dtype=float)
                 for a in (x, xu, xv))
    if order is None:
        order = _grid.fit_order(min(grid.nu, grid.nv), 1, VERIFY_ORDER)
    hu, hv = grid.hu, grid.hv
    xuu = _grid.diff(xu, hu, 0, 1, order)
    xvv = _grid.diff(xv, hv, 1, 1, order)
    xuv = 0.5 * (_grid.diff(xu, hv, 1, 1, order) + _grid.diff(xv, hu, 0, 1, order))
    jet = Jet(x, xu, xv, xuu, xuv, xvv)
    return build_patch(grid, jet, provenance, meta, conformal_tol)


def gauss_map_residuals(patch):
    """Per-sample invariants of ``g``: ``<g,g>``, ``<g,P> - 1`` and ``<dx, g>``."""
    g = patch.g
    return {
        "gg": np.abs(mink_inner(g, g)),
        "gp": np.abs(mink_inner(g, P) - 1.0),
        "dxg": np.maximum(np.abs(mink_inner(patch.jet.xu, g)),
                          np.abs(mink_inner(patch.jet.xv, g))),
    }


def _cnorm(a):
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=-1))


def structure_residuals(patch, order=None, trim=True):
    """Residuals of the Gauss, Codazzi, Gauss-Weingarten and vertical equations.

    Derivatives of ``sigma``, ``H``, ``Q`` and ``g`` are centred differences
    of the given ``order`` (default: :data:`VERIFY_ORDER`, lowered on small
    grids).  With ``trim`` the returned arrays cover only the interior samples
    where the centred stencil fits (``order // 2`` samples trimmed on each
    side); otherwise boundary samples use one-sided stencils.

    Returns
    -------
    dict of ndarray
        ``gauss = |sigma_{z zbar}|``,
        ``codazzi = |H_z - 2 e^{-2 sigma} Q_zbar|``,
        ``gw1 = |x_zz - 2 sigma_z x_z - Q P|``,
        ``gw2 = |x_{z zbar} - e^{2 sigma} H P / 2|``,
        ``gw3 = |g_z + H x_z + 2 e^{-2 sigma} Q x_zbar|`` and
        ``vertical = |l_{z zbar} - e^{2 sigma} H / 2|``.
    """
    grid = patch.grid
    n = min(grid.nu, grid.nv)
    if order is None:
        order = _grid.fit_order(n, 3, VERIFY_ORDER)
    if n < order + 3:
        raise DegenerateGrid("grid too small for structure residuals")
    w = order // 2 if trim else 0
    hu, hv = grid.hu, grid.hv
    f = patch.forms
    jet = patch.jet

    def d(a, axis, deriv=1):
        return _grid.diff(a, hu if axis == 0 else hv, axis, deriv, order)

    sigma, H, Q = f.sigma, f.H, f.Q
    e2s = np.exp(2 * sigma)
    sigma_z, _ = _grid.wirtinger(d(sigma, 0), d(sigma, 1))
    sigma_zzb = 0.25 * (d(sigma, 0, 2) + d(sigma, 1, 2))
    H_z, _ = _grid.wirtinger(d(H, 0), d(H, 1))
    _, Q_zb = _grid.wirtinger(d(Q, 0), d(Q, 1))
    g_z, _ = _grid.wirtinger(d(patch.g, 0), d(patch.g, 1))

    x_z = 0.5 * (jet.xu - 1j * jet.xv)
    x_zb = np.conj(x_z)
    x_zz = 0.25 * (jet.xuu - 2j * jet.xuv - jet.xvv)
    x_zzb = 0.25 * (jet.xuu + jet.xvv)

    gw1 = x_zz - 2 * sigma_z[..., None] * x_z - Q[..., None] * P
    gw2 = x_zzb - 0.5 * (e2s * H)[..., None] * P
    gw3 = g_z + H[..., None] * x_z + (2 * Q / e2s)[..., None] * x_zb
    l_zzb = 0.5 * (x_zzb[..., 0] + x_zzb[..., 3])

    out = {
        "gauss": np.abs(sigma_zzb),
        "codazzi": np.abs(H_z - 2 * Q_zb / e2s),
        "gw1": _cnorm(gw1),
        "gw2": _cnorm(gw2),
        "gw3": _cnorm(gw3),
        "vertical": np.abs(l_zzb - 0.5 * e2s * H),
    }
    return {k: _grid.trim(v, w) for k, v in out.items()}


def max_residuals(residuals):
    return {k: float(np.max(v)) for k, v in residuals.items()}
