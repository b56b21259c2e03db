"""Surface generators from holomorphic data.

All generators share one convention: with ``x_z`` the Wirtinger derivative
of the immersion, positions are obtained by integrating the real
differential ``dx = 2 Re(x_z dz)``, i.e. ``x_u = 2 Re x_z`` and
``x_v = -2 Im x_z``, with::

    x_z = (h, 1, -i) omega / 2        # (l, x, y) components

for Weierstrass/Kenmotsu data and ``h = beta / alpha``,
``omega = alpha^2`` for spinor data.  This is the normalisation under which
the closed-form catalogue below is reproduced exactly.

The module is called ``represent`` to avoid shadowing the ``repr``
builtin.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from . import grid as _grid
from . import holo
from .errors import CompatibilityError, IntegrabilityError, PoleError
from .lmink import embed
from .surf import Jet, build_patch, jets_from_closure, patch_from_first_derivatives

#: Magnitude above which a sampled integrand is treated as sitting on a pole.
POLE_MAX = 1e8
COMPAT_TOL = 1e-6


# ---------------------------------------------------------------------------
# data types

@dataclass(frozen=True)
class SpinorData:
    """Spinor data ``(alpha, beta)``.

    ``alpha`` is a holomorphic expression (or its text).  ``beta`` is any
    callable ``beta(Z) -> complex array``; ``beta_zbar`` optionally gives its
    exact ``d/dzbar``, otherwise central differences are used.
    """

    alpha: object
    beta: object
    beta_zbar: object = None


@dataclass(frozen=True)
class KenmotsuData:
    Hconst: float
    h2: object
    omega: object


@dataclass(frozen=True)
class RationalPair:
    """Pair of exact rationals ``(a, b)``; each is stored reduced with ``q > 0``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        for name in ("a", "b"):
            value = getattr(self, name)
            if isinstance(value, float):
                raise TypeError(f"{name} must be an exact rational, got float {value!r}")
            object.__setattr__(self, name, Fraction(value))

    @classmethod
    def from_strings(cls, a, b):
        """Parse ``"p/q"`` or integer strings; decimal notation is rejected."""
        return cls(parse_rational(a), parse_rational(b))


def parse_rational(text):
    text = str(text).strip()
    if any(ch in text for ch in ".eE"):
        raise ValueError(f"expected an exact rational p/q, got {text!r}")
    return Fraction(text)


# ---------------------------------------------------------------------------
# helpers

def _expr(e):
    return holo.as_expr(e)


def _sample(expr, Z):
    """Evaluate ``expr`` on the grid, treating huge values as poles."""
    vals = np.asarray(holo.evaluate(expr, Z), dtype=complex)
    vals = np.broadcast_to(vals, np.shape(Z))
    bad = ~np.isfinite(vals) | (np.abs(vals) > POLE_MAX)
    if bad.any():
        raise PoleError(np.asarray(Z)[bad].flat[0], f"integrand of {holo.pretty(expr)} is singular")
    return vals


def gauss_from_h(h):
    """Lightlike Gauss map ``-(1 + |h|^2, 2 Re h, -2 Im h, -1 + |h|^2) / 2``.

    Broadcasts over array ``h``.  ``gauss_from_h(0)`` is ``PT``.
    """
    h = np.asarray(h, dtype=complex)
    a = np.abs(h) ** 2
    return -0.5 * np.stack([1 + a, 2 * h.real, -2 * h.imag, a - 1], axis=-1)


def _first_derivatives(xz):
    """``(x_u, x_v)`` embedded, from ``x_z`` in ``(l, x, y)`` components."""
    return embed(2 * xz.real), embed(-2 * xz.imag)


def _integrate_positions(grid, xu, xv, basepoint, x0, rule):
    pos = np.stack([_grid.integrate_path(xu[..., k], xv[..., k], grid, basepoint, rule)
                    for k in range(3)], axis=-1)
    loop = _grid.loop_residual(xu[..., :3], xv[..., :3], grid, rule)
    if x0 is not None:
        pos = pos + np.asarray(x0, dtype=float)
    return pos, loop


def _patch_from_xz(grid, xz, basepoint, x0, rule, meta, check=True):
    xu, xv = _first_derivatives(xz)
    pos, loop = _integrate_positions(grid, xu, xv, basepoint, x0, rule)
    threshold = 1e-6 * grid.diameter
    if check and not loop <= threshold:
        raise IntegrabilityError(loop, threshold)
    meta = dict(meta, loop_residual=loop)
    return patch_from_first_derivatives(grid, embed(pos), xu, xv, "integrated", meta)


# ---------------------------------------------------------------------------
# generators

def _constant(vec):
    return lambda U, V: np.broadcast_to(np.asarray(vec, dtype=float), U.shape + (3,))


def base_plane(grid):
    """The plane ``(0, u, v)`` with exact jets; the usual seed of spin transforms."""
    zero = _constant((0, 0, 0))
    jet = jets_from_closure(lambda U, V: np.stack([np.zeros_like(U), U, V], -1), grid,
                            {"u": _constant((0, 1, 0)), "v": _constant((0, 0, 1)),
                             "uu": zero, "uv": zero, "vv": zero})
    meta = {"source": "plane", "H_expected": np.zeros(grid.shape), "h": np.zeros(grid.shape)}
    return build_patch(grid, jet, "closed-form", meta)


def compat_residual(alpha_vals, beta_zbar):
    """``|alpha beta_zbar - conj(alpha) conj(beta)_z|`` per sample.

    Uses ``conj(beta)_z = conj(beta_zbar)``, so this is
    ``2 |Im(alpha beta_zbar)|``.
    """
    w = alpha_vals * beta_zbar
    return np.abs(w - np.conj(w))


def spinor_surface(data, grid, basepoint=None, x0=None, rule="cubic", compat_tol=COMPAT_TOL):
    """Surface with ``x_z = (alpha beta, alpha^2, -i alpha^2) / 2``.

    Metric ``|alpha|^4`` and mean curvature ``beta_zbar / (conj(alpha) |alpha|^2)``
    are stored in ``patch.meta`` under ``"metric"`` and ``"H_expected"``.
    """
    alpha_e = _expr(data.alpha)
    Z = grid.z()
    alpha = _sample(alpha_e, Z)
    if np.any(np.abs(alpha) < 1e-12):
        raise PoleError(Z[np.abs(alpha) < 1e-12].flat[0], "alpha vanishes")
    beta = np.asarray(data.beta(Z), dtype=complex)
    if data.beta_zbar is not None:
        beta_zbar = np.asarray(data.beta_zbar(Z), dtype=complex)
    else:
        bu = _grid.diff(beta, grid.hu, 0, 1, 4)
        bv = _grid.diff(beta, grid.hv, 1, 1, 4)
        beta_zbar = 0.5 * (bu + 1j * bv)
    compat = compat_residual(alpha, beta_zbar)
    if np.max(compat) > compat_tol:
        raise CompatibilityError(f"compatibility residual {np.max(compat):.3e} exceeds {compat_tol:.1e}")
    a2 = alpha * alpha
    xz = 0.5 * np.stack([alpha * beta, a2, -1j * a2], axis=-1)
    meta = {
        "generator": "spinor",
        "metric": np.abs(alpha) ** 4,
        "H_expected": (beta_zbar / (np.conj(alpha) * np.abs(alpha) ** 2)).real,
        "h": beta / alpha,
        "compat_residual": float(np.max(compat)),
    }
    return _patch_from_xz(grid, xz, basepoint, x0, rule, meta)


def weierstrass_surface(h, omega, grid, basepoint=None, x0=None, rule="cubic"):
    """Minimal surface from ``(h, omega)`` with ``h^2 omega`` holomorphic.

    ``omega`` is the density ``omega / dz``.  The Hopf field
    ``omega h' / 2`` is stored as ``patch.meta["Q_expected"]``.
    """
    h_e, w_e = _expr(h), _expr(omega)
    Z = grid.z()
    hw = _sample(holo.Mul(h_e, w_e), Z)
    h2w = _sample(holo.Mul(holo.Pow(h_e, 2), w_e), Z)
    w = _sample(w_e, Z)
    hv = hw / w
    xz = 0.5 * np.stack([hw, w, -1j * w], axis=-1)
    dh = _sample(holo.differentiate(h_e), Z)
    meta = {
        "generator": "weierstrass",
        "H_expected": np.zeros(grid.shape),
        "Q_expected": 0.5 * w * dh,
        "metric": np.abs(w) ** 2,
        "h": hv,
        "h2w_max": float(np.max(np.abs(h2w))),
    }
    return _patch_from_xz(grid, xz, basepoint, x0, rule, meta)


def integrate_h1(Hconst, omega, grid, basepoint=None, h1_base=0.0, rule="cubic"):
    """``h1 = h1_base + H * int omega dz`` along grid paths from ``basepoint``."""
    w = _sample(_expr(omega), grid.z())
    # omega dz = omega du + i omega dv
    I = _grid.integrate_path(w, 1j * w, grid, basepoint, rule)
    return h1_base + Hconst * I


def kenmotsu_surface(data, grid, basepoint=None, x0=None, h1_base=0.0, rule="cubic"):
    """Constant mean curvature surface from Kenmotsu data ``(h2, omega)``.

    ``h1`` solves ``dh1 = H omega`` with ``h1(basepoint) = h1_base``; the
    surface has ``x_z = (conj(h1) + h2, 1, -i) omega / 2``.  Changing
    ``h1_base`` is not a rigid motion (it shears the surface along the
    isotropic direction), so reproducing a particular closed form requires
    the matching value; see :func:`catalogue_kenmotsu`.
    """
    if data.Hconst == 0:
        patch = weierstrass_surface(data.h2, data.omega, grid, basepoint, x0, rule)
        patch.meta["generator"] = "kenmotsu"
        return patch
    h2_e, w_e = _expr(data.h2), _expr(data.omega)
    Z = grid.z()
    h1 = integrate_h1(data.Hconst, w_e, grid, basepoint, h1_base, rule)
    w = _sample(w_e, Z)
    h2w = _sample(holo.Mul(h2_e, w_e), Z)
    _sample(holo.Mul(holo.Pow(h2_e, 2), w_e), Z)
    hw = np.conj(h1) * w + h2w
    xz = 0.5 * np.stack([hw, w, -1j * w], axis=-1)
    dh2 = _sample(holo.differentiate(h2_e), Z)
    meta = {
        "generator": "kenmotsu",
        "H_expected": np.full(grid.shape, float(data.Hconst)),
        "Q_expected": 0.5 * w * dh2,
        "metric": np.abs(w) ** 2,
        "h": hw / w,
    }
    return _patch_from_xz(grid, xz, basepoint, x0, rule, meta)


# ---------------------------------------------------------------------------
# singly periodic family: period and symmetry

def period_L(pair):
    """``lcm(q1, q2) / gcd(p1, p2)`` for ``a = p1/q1``, ``b = p2/q2``."""
    a, b = pair.a, pair.b
    if a == 0 or b == 0:
        raise ValueError("a and b must be nonzero")
    return Fraction(lcm(a.denominator, b.denominator),
                    gcd(abs(a.numerator), abs(b.numerator)))


def dihedral_label(pair):
    """Symmetry label ``D_{L|b|}``."""
    n = period_L(pair) * abs(pair.b)
    return f"D{n}"


# ---------------------------------------------------------------------------
# closed-form catalogue

CATALOGUE = ("sphere", "cylinder", "delaunay", "singly_periodic")


def _num(x):
    """Literal for a real number inside an expression string."""
    x = float(x)
    return repr(x) if x >= 0 else f"({x!r})"


def _family(name, params):
    """Closed form and Kenmotsu description of a catalogue family.

    Returns ``(pos, h1, dh1, h2, omega, meta)`` with ``pos(U, V)`` the
    closed-form position and the remaining entries expression strings.
    """
    H = float(params.get("H", 1.0))
    if name == "sphere":
        pos = lambda U, V: np.stack([0.5 * H * np.exp(2 * U), np.exp(U) * np.cos(V),
                                     np.exp(U) * np.sin(V)], axis=-1)
        return pos, f"{_num(H)}*exp(z)", "0", "exp(z)", {}
    if name == "cylinder":
        pos = lambda U, V: np.stack([H * U * U, U, V], axis=-1)
        return pos, f"{_num(H)}*z", f"{_num(H)}*z", "1", {}
    if name == "delaunay":
        a = float(params.get("a", 1.0))
        pos = lambda U, V: np.stack([0.5 * (H * np.exp(2 * U) + 2 * a * U), np.exp(U) * np.cos(V),
                                     np.exp(U) * np.sin(V)], axis=-1)
        return pos, f"{_num(H)}*exp(z)", f"{_num(a)}*exp(-z)", "exp(z)", {"a": a}
    if name == "singly_periodic":
        a_in, b_in = params.get("a"), params.get("b")
        if a_in is None or b_in is None:
            raise ValueError("singly_periodic needs rational parameters a and b")
        pair = a_in if isinstance(a_in, RationalPair) else RationalPair(a_in, b_in)
        if pair.a == 0 or pair.b == 0:
            raise ValueError("singly_periodic needs a != 0 and b != 0")
        a, b = float(pair.a), float(pair.b)

        def pos(U, V):
            return np.stack([H * np.exp(2 * a * U) / (2 * a * a) + np.exp(b * U) * np.cos(b * V) / b,
                             np.exp(a * U) * np.cos(a * V) / a,
                             np.exp(a * U) * np.sin(a * V) / a], axis=-1)
        L = period_L(pair)
        meta = {"a": str(pair.a), "b": str(pair.b), "period_L": L,
                "period": 2 * np.pi * float(L), "dihedral": dihedral_label(pair)}
        return (pos, f"{_num(H / a)}*exp({_num(a)}*z)", f"exp({_num(b - a)}*z)",
                f"exp({_num(a)}*z)", meta)
    raise ValueError(f"unknown catalogue entry {name!r}; expected one of {CATALOGUE}")


def catalogue_kenmotsu(name, params):
    """Kenmotsu data and ``h1`` expression reproducing a catalogue entry.

    Returns ``(KenmotsuData, h1_expr)``; pass ``h1_base = h1_expr(z_base)``
    to :func:`kenmotsu_surface` to reproduce the closed form up to a
    translation.
    """
    _, h1, h2, omega, _ = _family(name, params)
    H = float(params.get("H", 1.0))
    return KenmotsuData(H, holo.parse(h2), holo.parse(omega)), holo.parse(h1)


def example_catalogue(name, params, grid):
    """Closed-form catalogue patch with analytic jets.

    Second derivatives come from the holomorphic data:
    ``x_zz = (h2' omega + h omega', omega', -i omega') / 2`` and
    ``x_{z zbar} = (H |omega|^2 / 2, 0, 0)``.
    """
    params = dict(params)
    pos, h1_s, h2_s, w_s, fam_meta = _family(name, params)
    H = float(params.get("H", 1.0))
    h1_e, h2_e, w_e = holo.parse(h1_s), holo.parse(h2_s), holo.parse(w_s)
    Z = grid.z()
    U, V = grid.mesh()
    h1 = _sample(h1_e, Z)
    h2 = _sample(h2_e, Z)
    w = _sample(w_e, Z)
    dh2 = _sample(holo.differentiate(h2_e), Z)
    dw = _sample(holo.differentiate(w_e), Z)
    h = np.conj(h1) + h2
    xz = 0.5 * np.stack([h * w, w, -1j * w], axis=-1)
    xzz = 0.5 * np.stack([dh2 * w + h * dw, dw, -1j * dw], axis=-1)
    xzzb = np.zeros(grid.shape + (3,))
    xzzb[..., 0] = 0.5 * H * np.abs(w) ** 2
    xu, xv = 2 * xz.real, -2 * xz.imag
    xuu = 2 * xzz.real + 2 * xzzb
    xvv = 2 * xzzb - 2 * xzz.real
    xuv = -2 * xzz.imag
    jet = Jet(*(embed(a) for a in (pos(U, V), xu, xv, xuu, xuv, xvv)))
    meta = dict(fam_meta, family=name, H=H, h=h, H_expected=np.full(grid.shape, H),
                Q_expected=0.5 * w * dh2, metric=np.abs(w) ** 2,
                kenmotsu={"h1": h1_s, "h2": h2_s, "omega": w_s})
    meta["closed_form"] = pos
    return build_patch(grid, jet, "closed-form", meta)
