"""Rectangular parameter grids, finite differences and path integration.

Sampled fields have shape ``(nu, nv, ...)``: axis 0 runs over ``u``, axis 1
over ``v``.  Row-major order therefore means ``u`` outer, ``v`` inner.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateGrid, IntegrabilityError


@dataclass(frozen=True)
class GridSpec:
    u0: float
    u1: float
    v0: float
    v1: float
    nu: int
    nv: int

    def __post_init__(self):
        if self.nu < 3 or self.nv < 3:
            raise DegenerateGrid(f"grid needs at least 3x3 samples, got {self.nu}x{self.nv}")
        if not (self.u0 < self.u1 and self.v0 < self.v1):
            raise DegenerateGrid("grid bounds must satisfy u0 < u1 and v0 < v1")

    @classmethod
    def square(cls, lo, hi, n):
        return cls(lo, hi, lo, hi, n, n)

    @property
    def hu(self):
        return (self.u1 - self.u0) / (self.nu - 1)

    @property
    def hv(self):
        return (self.v1 - self.v0) / (self.nv - 1)

    @property
    def u(self):
        return np.linspace(self.u0, self.u1, self.nu)

    @property
    def v(self):
        return np.linspace(self.v0, self.v1, self.nv)

    @property
    def shape(self):
        return (self.nu, self.nv)

    def mesh(self):
        """``(U, V)`` arrays of shape ``(nu, nv)``."""
        return np.meshgrid(self.u, self.v, indexing="ij")

    def z(self):
        U, V = self.mesh()
        return U + 1j * V

    @property
    def diameter(self):
        return float(np.hypot(self.u1 - self.u0, self.v1 - self.v0))

    def center_index(self):
        return ((self.nu - 1) // 2, (self.nv - 1) // 2)

    def index_of(self, u, v):
        """Index of the sample nearest to ``(u, v)``."""
        i = int(np.argmin(np.abs(self.u - u)))
        j = int(np.argmin(np.abs(self.v - v)))
        return i, j


# ---------------------------------------------------------------------------
# finite differences

@lru_cache(maxsize=None)
def fd_weights(offsets, deriv):
    """Weights ``w`` with ``sum w_k f(x + s_k h) ~ h^deriv f^(deriv)(x)``."""
    s = np.asarray(offsets, dtype=float)
    n = len(s)
    A = np.vander(s, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[deriv] = float(np.prod(np.arange(1, deriv + 1)))
    return tuple(np.linalg.solve(A, rhs))


def _stencil(i, n, deriv, order):
    """Offsets for sample ``i`` of ``n``: centred when possible, else shifted."""
    half = order // 2
    if half <= i < n - half:
        return tuple(range(-half, half + 1))
    width = order + deriv
    if n < width:
        raise DegenerateGrid(f"need at least {width} samples for this stencil")
    start = 0 if i < half else n - width
    return tuple(k - i for k in range(start, start + width))


def fit_order(n, need, max_order):
    """Largest even order ``<= max_order`` with ``n >= order + need``."""
    order = min(max_order, n - need)
    order -= order % 2
    if order < 2:
        raise DegenerateGrid(f"{n} samples are too few for a difference stencil")
    return order


def diff(f, h, axis, deriv=1, order=2):
    """Finite-difference derivative of ``f`` along ``axis`` at every sample.

    Interior samples use the centred ``order + 1`` point stencil; the first
    and last ``order // 2`` samples use one-sided stencils of the same order.
    """
    f = np.moveaxis(np.asarray(f), axis, 0)
    n = f.shape[0]
    half = order // 2
    if n < order + deriv:
        raise DegenerateGrid(f"need at least {order + deriv} samples along axis {axis}")
    out = np.empty_like(f, dtype=np.result_type(f, float))
    w = fd_weights(tuple(range(-half, half + 1)), deriv)
    acc = 0
    for k, wk in zip(range(-half, half + 1), w):
        if wk != 0.0:
            acc = acc + wk * f[half + k: n - half + k]
    out[half: n - half] = acc
    for i in list(range(half)) + list(range(n - half, n)):
        offs = _stencil(i, n, deriv, order)
        wi = fd_weights(offs, deriv)
        out[i] = sum(wk * f[i + k] for k, wk in zip(offs, wi))
    return np.moveaxis(out / h ** deriv, 0, axis)


def diff_interior(f, h, axis, deriv=1, order=2):
    """Centred derivative restricted to samples where the stencil fits.

    The result is shorter by ``order`` along ``axis`` (``order // 2`` samples
    trimmed at each end).
    """
    f = np.moveaxis(np.asarray(f), axis, 0)
    n = f.shape[0]
    half = order // 2
    if n < order + 1:
        raise DegenerateGrid("grid too small for centred differences")
    w = fd_weights(tuple(range(-half, half + 1)), deriv)
    acc = 0
    for k, wk in zip(range(-half, half + 1), w):
        if wk != 0.0:
            acc = acc + wk * f[half + k: n - half + k]
    return np.moveaxis(acc / h ** deriv, 0, axis)


def wirtinger(fu, fv):
    """``(f_z, f_zbar)`` from the partial derivatives ``f_u, f_v``."""
    return 0.5 * (fu - 1j * fv), 0.5 * (fu + 1j * fv)


def trim(f, width):
    """Drop ``width`` samples on every side of the first two axes."""
    if width == 0:
        return f
    return f[width:-width, width:-width]


# ---------------------------------------------------------------------------
# quadrature and path integration

@lru_cache(maxsize=None)
def _quad_weights(offsets):
    """Weights integrating the interpolant through ``offsets`` over [0, 1]."""
    s = np.asarray(offsets, dtype=float)
    n = len(s)
    A = np.vander(s, n, increasing=True).T
    rhs = 1.0 / np.arange(1, n + 1)
    return tuple(np.linalg.solve(A, rhs))


QUADRATURE_ORDER = {"trapezoid": 2, "cubic": 4}


def edge_integrals(f, h, axis, rule="trapezoid"):
    """Integral of ``f`` over each grid edge along ``axis``.

    ``rule="trapezoid"`` is the composite trapezoid rule; ``rule="cubic"``
    integrates the cubic through the four nearest samples (fourth order,
    shifted stencils at the ends).  The result is shorter by one along
    ``axis``.
    """
    f = np.moveaxis(np.asarray(f), axis, 0)
    n = f.shape[0]
    if rule == "trapezoid":
        out = 0.5 * (f[:-1] + f[1:])
    elif rule == "cubic":
        if n < 4:
            raise DegenerateGrid("cubic edge rule needs at least 4 samples")
        out = np.empty((n - 1,) + f.shape[1:], dtype=np.result_type(f, float))
        w = _quad_weights((-1, 0, 1, 2))
        out[1:n - 2] = w[0] * f[0:n - 3] + w[1] * f[1:n - 2] + w[2] * f[2:n - 1] + w[3] * f[3:n]
        w0 = _quad_weights((0, 1, 2, 3))
        out[0] = sum(wk * f[k] for k, wk in enumerate(w0))
        wl = _quad_weights((-2, -1, 0, 1))
        out[n - 2] = sum(wk * f[n - 4 + k] for k, wk in enumerate(wl))
    else:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    return np.moveaxis(out * h, 0, axis)


def _cumulate(edges, base):
    """Node values from per-edge increments, zero at index ``base``."""
    n = edges.shape[0] + 1
    out = np.zeros((n,) + edges.shape[1:], dtype=edges.dtype)
    out[base + 1:] = np.cumsum(edges[base:], axis=0)
    if base > 0:
        out[:base] = -np.cumsum(edges[:base][::-1], axis=0)[::-1]
    return out


def integrate_path(fu, fv, grid, base=None, rule="trapezoid", first="u"):
    """Integrate the 1-form ``fu du + fv dv`` from ``base`` over the grid.

    With ``first="u"`` the path runs along the base row (varying ``u``) and
    then up each column; ``first="v"`` swaps the order.  The value at
    ``base`` is zero.
    """
    fu = np.asarray(fu)
    fv = np.asarray(fv)
    i0, j0 = grid.center_index() if base is None else base
    Iu = edge_integrals(fu, grid.hu, 0, rule)
    Iv = edge_integrals(fv, grid.hv, 1, rule)
    if first == "u":
        row = _cumulate(Iu[:, j0], i0)
        cols = np.moveaxis(_cumulate(np.moveaxis(Iv, 1, 0), j0), 0, 1)
        return row[:, None] + cols
    if first == "v":
        col = _cumulate(Iv[i0, :], j0)
        rows = _cumulate(Iu, i0)
        return col[None, :] + rows
    raise ValueError("first must be 'u' or 'v'")


def loop_residual(fu, fv, grid, rule="trapezoid"):
    """Max over grid cells of the norm of the circulation of ``fu du + fv dv``."""
    Iu = edge_integrals(np.asarray(fu), grid.hu, 0, rule)
    Iv = edge_integrals(np.asarray(fv), grid.hv, 1, rule)
    circ = Iu[:, :-1] + Iv[1:, :] - Iu[:, 1:] - Iv[:-1, :]
    if circ.ndim > 2:
        mag = np.sqrt(np.sum(np.abs(circ) ** 2, axis=tuple(range(2, circ.ndim))))
    else:
        mag = np.abs(circ)
    return float(np.max(mag))


def check_closed(fu, fv, grid, rule="trapezoid", rel_tol=1e-6):
    """Loop residual, raising :class:`IntegrabilityError` above ``rel_tol * diameter``."""
    res = loop_residual(fu, fv, grid, rule)
    threshold = rel_tol * grid.diameter
    if not np.isfinite(res) or res > threshold:
        raise IntegrabilityError(res, threshold)
    return res
