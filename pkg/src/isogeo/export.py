"""Serialization of patches: OBJ meshes, CSV field tables and verification reports."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGrid
from .represent import gauss_from_h
from .surf import gauss_map_residuals, structure_residuals

CSV_FIELDS = ("u", "v", "l", "x", "y", "sigma", "H", "K", "Qre", "Qim", "gauss_res", "codazzi_res")

DEFAULT_TOLERANCES = {
    "gauss_map": 1e-10,
    "gauss_map_normalization": 1e-12,
    "tangency": 1e-10,
    "structure": 1e-5,
    "mean_curvature": 1e-4,
    "hopf": 1e-4,
    "metric": 1e-8,
    "metric_law": 1e-6,
    "gauss_formula": 1e-8,
    "loop": 1e-6,
    "period": 1e-9,
    "dirac": 1e-8,
}


def _fmt9(x):
    """Nine significant digits, printed as the shortest float literal."""
    y = float(f"{x:.9g}")
    return repr(y + 0.0)


def obj_text(patch):
    """OBJ mesh text: vertices ``(x, y, l)``, two CCW triangles per grid quad.

    ``patch`` is a :class:`SurfacePatch` or a bare ``(nu, nv, 3)`` array of
    ``(l, x, y)`` positions (useful for meshes below the 3x3 grid minimum).
    """
    if isinstance(patch, np.ndarray):
        pos, provenance = patch, "positions"
    else:
        pos, provenance = patch.iso, patch.provenance
    nu, nv = pos.shape[:2]
    iso = pos.reshape(-1, 3)
    lines = [f"# isogeo patch {nu}x{nv} ({provenance})"]
    lines += [f"v {_fmt9(x)} {_fmt9(y)} {_fmt9(l)}" for l, x, y in iso]
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b = (i + 1) * nv + j + 1
            c = b + 1
            d = a + 1
            lines.append(f"f {a} {b} {c}")
            lines.append(f"f {a} {c} {d}")
    return "\n".join(lines) + "\n"


def export_obj(patch, path):
    with open(path, "w", newline="\n") as fh:
        fh.write(obj_text(patch))


def patch_fields(patch, names):
    names = list(names)
    if not names:
        raise ValueError("at least one field must be exported")
    unknown = [n for n in names if n not in CSV_FIELDS]
    if unknown:
        raise ValueError(f"unknown field(s) {unknown}; choose from {list(CSV_FIELDS)}")
    cols = patch.fields()
    if {"gauss_res", "codazzi_res"} & set(names):
        try:
            res = structure_residuals(patch, trim=False)
        except DegenerateGrid:
            res = {"gauss": np.full(patch.grid.shape, np.nan), "codazzi": np.full(patch.grid.shape, np.nan)}
        cols["gauss_res"] = res["gauss"]
        cols["codazzi_res"] = res["codazzi"]
    return {n: cols[n] for n in names}


def csv_text(patch, names):
    cols = patch_fields(patch, names)
    names = list(cols)
    flat = np.stack([np.asarray(cols[n], dtype=float).ravel() for n in names], axis=-1)
    lines = [",".join(names)]
    lines += [",".join(repr(float(v)) for v in row) for row in flat]
    return "\n".join(lines) + "\n"


def export_csv(patch, fields, path):
    text = csv_text(patch, fields)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# verification report

@dataclass
class Check:
    name: str
    max_residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.max_residual <= self.tolerance)


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, residual, tolerance):
        self.checks.append(Check(name, float(residual), float(tolerance)))

    def text(self):
        lines = [f"{k} = {v}" for k, v in self.metadata.items()]
        for c in self.checks:
            lines.append(f"check.{c.name}.max_residual = {c.max_residual:.6e}")
            lines.append(f"check.{c.name}.tolerance = {c.tolerance:.6e}")
            lines.append(f"check.{c.name}.pass = {'true' if c.passed else 'false'}")
        lines.append(f"status = {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def _range(a):
    return f"{float(np.min(a)):.6e} {float(np.max(a)):.6e}"


def verify_patch(patch, tolerances=None, structure=True):
    """Run every applicable check on a patch and return a :class:`VerifyReport`.

    Checks against expected fields are only run when the generator recorded
    them in ``patch.meta``.  Structure residuals need at least 5 samples per
    axis; on smaller grids they are skipped and the report says so.
    """
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    meta = patch.meta
    grid = patch.grid
    rep = VerifyReport()
    md = rep.metadata
    md["grid"] = f"{grid.u0!r} {grid.u1!r} {grid.v0!r} {grid.v1!r} {grid.nu} {grid.nv}"
    md["provenance"] = patch.provenance
    for key in ("generator", "family", "source"):
        if key in meta:
            md[key] = meta[key]
    md["H.range"] = _range(patch.forms.H)
    md["K.range"] = _range(patch.forms.K)
    if "dihedral" in meta:
        md["period.L"] = str(meta["period_L"])
        md["period.label"] = meta["dihedral"]

    gm = gauss_map_residuals(patch)
    rep.add("gauss_map.null", np.max(gm["gg"]), tol["gauss_map"])
    rep.add("gauss_map.normalization", np.max(gm["gp"]), tol["gauss_map_normalization"])
    rep.add("gauss_map.tangency", np.max(gm["dxg"]), tol["tangency"])

    if structure and min(grid.nu, grid.nv) >= 5:  # smallest grid with a second-order stencil
        for name, r in structure_residuals(patch).items():
            rep.add(f"structure.{name}", np.max(r), tol["structure"])
    else:
        md["structure"] = "skipped (grid too small)"

    if "H_expected" in meta:
        rep.add("mean_curvature", np.max(np.abs(patch.forms.H - meta["H_expected"])),
                tol["mean_curvature"])
    if "Q_expected" in meta:
        rep.add("hopf", np.max(np.abs(patch.forms.Q - meta["Q_expected"])), tol["hopf"])
    if "metric" in meta:
        rep.add("metric", np.max(np.abs(np.exp(2 * patch.forms.sigma) - meta["metric"])),
                tol["metric"])
    if "metric_expected" in meta:
        rep.add("metric_law", np.max(np.abs(np.exp(2 * patch.forms.sigma) - meta["metric_expected"])),
                tol["metric_law"])
    if "h" in meta:
        rep.add("gauss_formula", np.max(np.abs(patch.g - gauss_from_h(meta["h"]))),
                tol["gauss_formula"])
    if "loop_residual" in meta:
        rep.add("loop", meta["loop_residual"], tol["loop"] * grid.diameter)
    if "dirac_residual" in meta:
        rep.add("dirac", meta["dirac_residual"], tol["dirac"])
    if "period" in meta and "closed_form" in meta:
        U, V = grid.mesh()
        f = meta["closed_form"]
        rep.add("period", np.max(np.abs(f(U, V) - f(U, V + meta["period"]))), tol["period"])
    return rep


__all__ = [
    "CSV_FIELDS", "DEFAULT_TOLERANCES", "Check", "VerifyReport", "csv_text", "export_csv",
    "export_obj", "obj_text", "patch_fields", "verify_patch",
]
