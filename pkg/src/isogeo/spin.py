"""Spin transformations ``dX~ = B dX B*`` of conformal immersions.

``B = [[alpha, conj(beta)], [0, conj(alpha)]]`` takes values in
``R+ x SU(1,0,1)``.  Integrability of the transformed differential is
governed by the Dirac-type condition::

    B^{-1} dB ^ dX = -rho dX ^ Pt dX,    Pt = diag(0, -1),

and then the new mean curvature is ``(H + rho) / det B``.
"""
from dataclasses import dataclass

import numpy as np

from . import grid as _grid
from .errors import DegenerateGrid, IntegrabilityError
from .herm import SpinFactor, act, from_herm, herm_matrix
from .lmink import embed, iso_coords
from .surf import VERIFY_ORDER, patch_from_first_derivatives

P_TILDE = np.diag([0.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class SpinField:
    """Sampled spin factor over a grid.

    ``alpha`` and ``beta`` are complex arrays of the grid shape.  ``rho`` is
    optional (scalar or array).  ``derivs`` may hold exact Wirtinger
    derivatives under the keys ``alpha_z, alpha_zbar, beta_z, beta_zbar``;
    missing ones are taken by central differences.
    """

    grid: _grid.GridSpec
    alpha: np.ndarray
    beta: np.ndarray
    rho: object = None
    derivs: dict = None

    def __post_init__(self):
        alpha = np.broadcast_to(np.asarray(self.alpha, dtype=complex), self.grid.shape)
        beta = np.broadcast_to(np.asarray(self.beta, dtype=complex), self.grid.shape)
        if np.any(np.abs(alpha) < 1e-12):
            raise ValueError("alpha must not vanish")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_functions(cls, grid, alpha, beta, rho=None, derivs=None):
        """Sample callables ``alpha(Z)``, ``beta(Z)`` (and derivative callables)."""
        Z = grid.z()
        d = {k: np.broadcast_to(np.asarray(f(Z), dtype=complex), grid.shape)
             for k, f in (derivs or {}).items()}
        return cls(grid, alpha(Z), beta(Z), rho, d or None)

    @property
    def factor(self):
        return SpinFactor(self.alpha, self.beta)

    @property
    def matrix(self):
        return self.factor.matrix

    @property
    def det(self):
        return np.abs(self.alpha) ** 2

    def wirtinger(self, order=None):
        """``(B_z, B_zbar)`` as ``(nu, nv, 2, 2)`` arrays."""
        d = self.derivs or {}
        g = self.grid
        if order is None:
            order = _grid.fit_order(min(g.nu, g.nv), 1, VERIFY_ORDER)

        def zd(f, key):
            fu = _grid.diff(f, g.hu, 0, 1, order)
            fv = _grid.diff(f, g.hv, 1, 1, order)
            fz, fzb = _grid.wirtinger(fu, fv)
            return d.get(key + "_z", fz), d.get(key + "_zbar", fzb)

        a_z, a_zb = zd(self.alpha, "alpha")
        b_z, b_zb = zd(self.beta, "beta")
        zero = np.zeros(g.shape, dtype=complex)

        def mat(da, dbc, dac):
            return np.stack([np.stack([da, dbc], -1), np.stack([zero, dac], -1)], -2)

        # d conj(f)/dz = conj(df/dzbar)
        Bz = mat(a_z, np.conj(b_zb), np.conj(a_zb))
        Bzb = mat(a_zb, np.conj(b_z), np.conj(a_z))
        return Bz, Bzb


def spin_differential(B, dX):
    """``B dX B*`` for a :class:`SpinFactor` (or 2x2 matrix) ``B``."""
    M = B.matrix if isinstance(B, SpinFactor) else B
    return act(M, dX)


def transformed_mean(H, rho, detB):
    """``(H + rho) / det B``."""
    detB = np.asarray(detB, dtype=float)
    if np.any(detB <= 0):
        raise ValueError("det B must be positive")
    out = (np.asarray(H) + np.asarray(rho)) / detB
    return float(out) if out.ndim == 0 else out


def _herm_z(patch):
    """``(X_z, X_zbar)`` of a patch as complex 2x2 arrays."""
    xz = 0.5 * (patch.jet.xu - 1j * patch.jet.xv)
    return herm_matrix(xz), herm_matrix(np.conj(xz))


def dirac_pointwise(field, patch, rho=None, order=None):
    """Per-sample Frobenius norm of the Dirac-type residual.

    ``(B^{-1} B_z X_zbar - B^{-1} B_zbar X_z) + rho (X_z Pt X_zbar - X_zbar Pt X_z)``.
    """
    rho = field.rho if rho is None else rho
    if rho is None:
        raise ValueError("rho must be supplied")
    rho = np.broadcast_to(np.asarray(rho, dtype=float), field.grid.shape)
    Xz, Xzb = _herm_z(patch)
    Bz, Bzb = field.wirtinger(order)
    Binv = field.factor.inverse
    R = Binv @ Bz @ Xzb - Binv @ Bzb @ Xz
    R = R + rho[..., None, None] * (Xz @ P_TILDE @ Xzb - Xzb @ P_TILDE @ Xz)
    return np.linalg.norm(R, axis=(-2, -1))


def dirac_residual(field, patch, rho=None, order=None):
    """Max over interior samples of :func:`dirac_pointwise`."""
    n = min(field.grid.nu, field.grid.nv)
    if order is None:
        order = _grid.fit_order(n, 1, VERIFY_ORDER)
    w = order // 2
    if n <= 2 * w:
        raise DegenerateGrid("grid too small for the Dirac residual")
    return float(np.max(_grid.trim(dirac_pointwise(field, patch, rho, order), w)))


def rho_base_plane(field, order=None):
    """``rho`` for a spin transform of the base plane ``(0, u, v)``.

    There ``sigma = 0`` and ``rho`` is the (1,2) entry of ``B^{-1} B_z``,
    ``(conj(alpha) conj(beta)_z - conj(beta) conj(alpha)_z) / |alpha|^2``.
    The imaginary part (which must vanish for a compatible field) is dropped.
    """
    Bz, _ = field.wirtinger(order)
    omega = (field.factor.inverse @ Bz)[..., 0, 1]
    return omega.real


def integrate_spin(field, patch, base=None, x0=None, rule="trapezoid", first="u",
                   rel_tol=1e-6, order=None):
    """Integrate ``dX~ = B dX B*`` over the grid.

    The path runs along the base row then up the columns (``first="u"``) or
    the other way round.  The result is anchored so that the base sample maps
    to ``x0`` (origin by default).  ``meta`` records the loop residual (max
    circulation over grid cells) and the maximum difference between the two
    path orders.

    Raises
    ------
    IntegrabilityError
        If the loop residual exceeds ``rel_tol * diameter``.
    """
    grid = patch.grid
    B = field.matrix
    Xu = herm_matrix(patch.jet.xu)
    Xv = herm_matrix(patch.jet.xv)
    Bd = np.conj(np.swapaxes(B, -1, -2))
    xu = iso_coords(from_herm(B @ Xu @ Bd))
    xv = iso_coords(from_herm(B @ Xv @ Bd))
    loop = _grid.loop_residual(xu, xv, grid, rule)
    threshold = rel_tol * grid.diameter
    if not loop <= threshold:
        raise IntegrabilityError(loop, threshold)
    other = "v" if first == "u" else "u"

    def path(f):
        return np.stack([_grid.integrate_path(xu[..., k], xv[..., k], grid, base, rule, f)
                         for k in range(3)], axis=-1)

    pos = path(first)
    path_gap = float(np.max(np.abs(pos - path(other))))
    if x0 is not None:
        pos = pos + np.asarray(x0, dtype=float)
    rho = field.rho
    meta = {
        "generator": "spin",
        "loop_residual": loop,
        "path_difference": path_gap,
        "metric_expected": field.det ** 2 * np.exp(2 * patch.forms.sigma),
    }
    if rho is not None:
        meta["H_expected"] = transformed_mean(patch.forms.H, rho, field.det)
    return patch_from_first_derivatives(grid, embed(pos), embed(xu), embed(xv),
                                        "integrated", meta, order)

