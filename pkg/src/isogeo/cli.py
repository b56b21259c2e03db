"""Command line driver: ``isogeo generate|verify|spin|catalogue --config FILE``.

The configuration file is INI-style text (``key = value`` lines under
``[section]`` headers)::

    [surface]
    source = kenmotsu        ; catalogue | kenmotsu | weierstrass | spinor | plane
    H = 1
    h2 = exp(-z)
    omega = exp(z)

    [grid]
    u0 = -1
    u1 = 1
    v0 = -1
    v1 = 1
    nu = 101
    nv = 101

Optional sections: ``[job]`` (``fields``, ``out``, ``basepoint = i, j``,
``x0 = l, x, y``), ``[tolerances]`` (names of
:data:`isogeo.export.DEFAULT_TOLERANCES`) and ``[spin]`` (``alpha``,
``beta_conj``, ``beta_mul``, ``beta_add``, ``rho``).  A ``beta`` field is
``conj(beta_conj(z)) * beta_mul(z) + beta_add(z)``.

Exit status: 0 success, 1 verification or integrability failure, 2 input
error.
"""
import argparse
import configparser
import os
import sys

import numpy as np

from . import holo, represent, spin
from .errors import (CompatibilityError, DegenerateGrid, IntegrabilityError, IsogeoError,
                     NonConformal, NonSpacelike, ParseError, PoleError)
from .export import CSV_FIELDS, DEFAULT_TOLERANCES, export_csv, export_obj, verify_patch
from .grid import GridSpec

MODES = ("generate", "verify", "spin", "catalogue")
SOURCES = ("catalogue", "kenmotsu", "weierstrass", "spinor", "plane")
# --tolerance replaces these entries
OVERRIDABLE = ("structure", "mean_curvature", "hopf")


class ConfigError(IsogeoError):
    pass


# ---------------------------------------------------------------------------
# config parsing

def read_config(path):
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return cp


def _get(cp, section, key, default=None, required=False):
    if cp.has_option(section, key):
        return cp.get(section, key).strip()
    if required:
        raise ConfigError(f"missing [{section}] {key}")
    return default


def _float(cp, section, key, default=None, required=False):
    raw = _get(cp, section, key, None, required)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected a number, got {raw!r}") from None


def _expr(cp, section, key, default=None, required=False):
    raw = _get(cp, section, key, default, required)
    if raw is None:
        return None
    try:
        return holo.parse(raw)
    except ParseError as exc:
        exc.where = f"[{section}] {key}"
        raise


def parse_grid(cp):
    if not cp.has_section("grid"):
        raise ConfigError("missing [grid] section")
    vals = {k: _float(cp, "grid", k, required=True) for k in ("u0", "u1", "v0", "v1")}
    counts = {}
    for k in ("nu", "nv"):
        raw = _get(cp, "grid", k, required=True)
        try:
            counts[k] = int(raw)
        except ValueError:
            raise ConfigError(f"[grid] {k}: expected an integer, got {raw!r}") from None
    return GridSpec(nu=counts["nu"], nv=counts["nv"], **vals)


def parse_basepoint(cp, grid):
    raw = _get(cp, "job", "basepoint")
    if raw is None:
        return None
    try:
        i, j = (int(t) for t in raw.split(","))
    except ValueError:
        raise ConfigError(f"[job] basepoint: expected 'i, j', got {raw!r}") from None
    if not (0 <= i < grid.nu and 0 <= j < grid.nv):
        raise ConfigError(f"[job] basepoint {raw!r} outside the grid")
    return i, j


def parse_x0(cp):
    raw = _get(cp, "job", "x0")
    if raw is None:
        return None
    try:
        vals = [float(t) for t in raw.split(",")]
    except ValueError:
        vals = []
    if len(vals) != 3:
        raise ConfigError(f"[job] x0: expected 'l, x, y', got {raw!r}")
    return np.array(vals)


def parse_tolerances(cp, override=None):
    tol = dict(DEFAULT_TOLERANCES)
    if cp.has_section("tolerances"):
        for key in cp.options("tolerances"):
            if key not in tol:
                raise ConfigError(f"[tolerances] unknown key {key!r}")
            tol[key] = _float(cp, "tolerances", key)
    if override is not None:
        for key in OVERRIDABLE:
            tol[key] = override
    return tol


def parse_fields(cp):
    raw = _get(cp, "job", "fields", ",".join(CSV_FIELDS))
    names = [t.strip() for t in raw.split(",") if t.strip()]
    if not names:
        raise ConfigError("[job] fields: empty field list")
    unknown = [n for n in names if n not in CSV_FIELDS]
    if unknown:
        raise ConfigError(f"[job] fields: unknown {unknown}")
    return names


def beta_field(cp, section):
    """``(beta, beta_z, beta_zbar)`` callables from the beta keys of ``section``."""
    A = _expr(cp, section, "beta_conj", "0")
    Bm = _expr(cp, section, "beta_mul", "1")
    C = _expr(cp, section, "beta_add", "0")
    dA, dB, dC = (holo.differentiate(e) for e in (A, Bm, C))

    def ev(e, Z):
        return np.broadcast_to(holo.evaluate(e, Z), np.shape(Z))

    def beta(Z):
        return np.conj(ev(A, Z)) * ev(Bm, Z) + ev(C, Z)

    def beta_z(Z):
        return np.conj(ev(A, Z)) * ev(dB, Z) + ev(dC, Z)

    def beta_zbar(Z):
        return np.conj(ev(dA, Z)) * ev(Bm, Z)

    return beta, beta_z, beta_zbar


def catalogue_params(cp):
    name = _get(cp, "surface", "name", required=True)
    params = {"H": _float(cp, "surface", "H", 1.0)}
    if name == "delaunay":
        params["a"] = _float(cp, "surface", "a", 1.0)
    elif name == "singly_periodic":
        try:
            pair = represent.RationalPair.from_strings(_get(cp, "surface", "a", required=True),
                                                       _get(cp, "surface", "b", required=True))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"[surface] a, b: {exc}") from None
        params["a"], params["b"] = pair.a, pair.b
    elif name not in represent.CATALOGUE:
        raise ConfigError(f"[surface] name: unknown catalogue entry {name!r}")
    return name, params


def build_surface(cp, grid, basepoint=None, x0=None):
    """Patch described by the ``[surface]`` section."""
    source = _get(cp, "surface", "source", "plane" if not cp.has_section("surface") else None)
    if source is None:
        raise ConfigError("missing [surface] source")
    if source not in SOURCES:
        raise ConfigError(f"[surface] source: expected one of {SOURCES}, got {source!r}")
    if source == "plane":
        return represent.base_plane(grid)
    if source == "catalogue":
        name, params = catalogue_params(cp)
        patch = represent.example_catalogue(name, params, grid)
    elif source == "kenmotsu":
        data = represent.KenmotsuData(_float(cp, "surface", "H", required=True),
                                      _expr(cp, "surface", "h2", required=True),
                                      _expr(cp, "surface", "omega", "1"))
        h1_base = complex(_get(cp, "surface", "h1_base", "0").replace(" ", "").replace("i", "j"))
        patch = represent.kenmotsu_surface(data, grid, basepoint, x0, h1_base)
    elif source == "weierstrass":
        patch = represent.weierstrass_surface(_expr(cp, "surface", "h", required=True),
                                              _expr(cp, "surface", "omega", "1"),
                                              grid, basepoint, x0)
    else:
        beta, _, beta_zbar = beta_field(cp, "surface")
        data = represent.SpinorData(_expr(cp, "surface", "alpha", required=True), beta, beta_zbar)
        patch = represent.spinor_surface(data, grid, basepoint, x0)
    patch.meta["source"] = source
    return patch


def build_spin(cp, grid, basepoint=None, x0=None):
    """Spin transform of the ``[surface]`` patch (base plane by default)."""
    if not cp.has_section("spin"):
        raise ConfigError("spin mode needs a [spin] section")
    base = build_surface(cp, grid, basepoint) if cp.has_section("surface") else represent.base_plane(grid)
    alpha_e = _expr(cp, "spin", "alpha", "1")
    dalpha = holo.differentiate(alpha_e)
    beta, beta_z, beta_zbar = beta_field(cp, "spin")
    zero = lambda Z: np.zeros_like(Z)
    field = spin.SpinField.from_functions(
        grid, lambda Z: np.broadcast_to(holo.evaluate(alpha_e, Z), Z.shape), beta,
        derivs={"alpha_z": lambda Z: np.broadcast_to(holo.evaluate(dalpha, Z), Z.shape),
                "alpha_zbar": zero, "beta_z": beta_z, "beta_zbar": beta_zbar})
    raw = _get(cp, "spin", "rho", "auto")
    if raw == "auto":
        if base.meta.get("source") != "plane":
            raise ConfigError("[spin] rho = auto is only available for the base plane")
        rho = spin.rho_base_plane(field)
    else:
        try:
            rho = float(raw)
        except ValueError:
            raise ConfigError(f"[spin] rho: expected a number or 'auto', got {raw!r}") from None
    field = spin.SpinField(grid, field.alpha, field.beta, rho, field.derivs)
    dirac = spin.dirac_residual(field, base)
    patch = spin.integrate_spin(field, base, basepoint, x0)
    patch.meta["dirac_residual"] = dirac
    patch.meta["source"] = "spin"
    return patch


# ---------------------------------------------------------------------------
# orchestration

def run(mode, config_path, out_dir=".", tolerance=None, stdout=None, stderr=None):
    """Execute one job; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cp = read_config(config_path)
        grid = parse_grid(cp)
        basepoint = parse_basepoint(cp, grid)
        x0 = parse_x0(cp)
        tol = parse_tolerances(cp, tolerance)
        fields = parse_fields(cp)
        if mode == "catalogue" and _get(cp, "surface", "source", "catalogue") != "catalogue":
            raise ConfigError("catalogue mode needs [surface] source = catalogue")
        if mode == "catalogue" and cp.has_section("surface") and not cp.has_option("surface", "source"):
            cp.set("surface", "source", "catalogue")
        if mode == "spin":
            patch = build_spin(cp, grid, basepoint, x0)
        else:
            patch = build_surface(cp, grid, basepoint, x0)
    except ParseError as exc:
        where = getattr(exc, "where", "expression")
        print(f"error: {where}: {exc}", file=stderr)
        print(exc.render(), file=stderr)
        return 2
    except (ConfigError, PoleError, CompatibilityError, DegenerateGrid, ValueError,
            configparser.Error) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (IntegrabilityError, NonSpacelike, NonConformal) as exc:
        print(f"verification failed: {exc}", file=stderr)
        return 1

    report = verify_patch(patch, tol)
    report.metadata = {"mode": mode, **report.metadata}
    os.makedirs(out_dir, exist_ok=True)
    if mode != "verify":
        export_obj(patch, os.path.join(out_dir, "mesh.obj"))
        export_csv(patch, fields, os.path.join(out_dir, "fields.csv"))
    with open(os.path.join(out_dir, "report.txt"), "w", newline="\n") as fh:
        fh.write(report.text())
    failed = [c.name for c in report.checks if not c.passed]
    if failed:
        print(f"verification failed: {', '.join(failed)}", file=stderr)
        return 1
    print(f"{mode}: {len(report.checks)} checks passed; output in {out_dir}", file=stdout)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="isogeo", description=__doc__.split("\n")[0])
    ap.add_argument("mode", choices=MODES)
    ap.add_argument("--config", required=True, help="job configuration file")
    ap.add_argument("--out", default=".", help="output directory (default: current)")
    ap.add_argument("--tolerance", type=float, default=None,
                    help="override the structure, mean-curvature and Hopf tolerances")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    return run(args.mode, args.config, args.out, args.tolerance)


if __name__ == "__main__":
    sys.exit(main())
