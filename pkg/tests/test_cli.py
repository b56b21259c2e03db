import subprocess
import sys

import numpy as np
import pytest

from isogeo import cli, represent
from isogeo.export import csv_text, obj_text
from isogeo.grid import GridSpec

GRID3 = """
[grid]
u0 = 0
u1 = 1
v0 = 0
v1 = 1
nu = 3
nv = 3
"""

GRID_FINE = """
[grid]
u0 = -0.5
u1 = 0.5
v0 = -0.5
v1 = 0.5
nu = 41
nv = 41
"""


def write(tmp_path, text, name="job.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(tmp_path, mode, text, out="out", **kw):
    cfg = write(tmp_path, text)
    return cli.main([mode, "--config", cfg, "--out", str(tmp_path / out)] + kw.get("extra", []))


def report(tmp_path, out="out"):
    lines = (tmp_path / out / "report.txt").read_text().splitlines()
    return dict(line.split(" = ", 1) for line in lines)


def test_obj_small_sphere(tmp_path):
    code = run(tmp_path, "generate", "[surface]\nsource = catalogue\nname = sphere\nH = 1\n" + GRID3)
    assert code == 0
    lines = (tmp_path / "out" / "mesh.obj").read_text().splitlines()
    assert sum(l.startswith("v ") for l in lines) == 9
    assert sum(l.startswith("f ") for l in lines) == 8
    assert lines[1] == "v 1.0 0.0 0.5"


def test_obj_plane_2x2_and_winding():
    U, V = np.meshgrid([0.0, 1.0], [0.0, 1.0], indexing="ij")
    lines = obj_text(np.stack([0 * U, U, V], -1)).splitlines()
    assert [l for l in lines if l.startswith("f")] == ["f 1 3 4", "f 1 4 2"]
    assert sum(l.startswith("v ") for l in lines) == 4
    # faces are counterclockwise seen from +l in the (x, y) projection
    xy = np.array([[float(t) for t in l.split()[1:3]] for l in lines if l.startswith("v ")])
    for f in (l for l in lines if l.startswith("f")):
        a, b, c = (xy[int(t) - 1] for t in f.split()[1:])
        (p, q), (r, s) = b - a, c - a
        assert p * s - q * r > 0


def test_obj_nine_significant_digits():
    p = represent.example_catalogue("sphere", {"H": 1}, GridSpec(0.1, 0.2, 0.3, 0.4, 3, 3))
    v = obj_text(p).splitlines()[1].split()[1:]
    for t in v:
        assert len(t.replace("-", "").replace(".", "").lstrip("0")) <= 9


def test_outputs_deterministic(tmp_path):
    text = "[surface]\nsource = catalogue\nname = delaunay\nH = 1\na = -2\n" + GRID_FINE
    assert run(tmp_path, "generate", text, "a") == 0
    assert run(tmp_path, "generate", text, "b") == 0
    for f in ("mesh.obj", "fields.csv", "report.txt"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_csv_fields(tmp_path):
    text = ("[surface]\nsource = catalogue\nname = cylinder\nH = 1\n[job]\nfields = u, v, H\n"
            + GRID_FINE)
    assert run(tmp_path, "generate", text) == 0
    raw = (tmp_path / "out" / "fields.csv").read_bytes()
    assert b"\r" not in raw
    rows = raw.decode().splitlines()
    assert rows[0] == "u,v,H"
    assert len(rows) == 1 + 41 * 41
    H = np.array([float(r.split(",")[2]) for r in rows[1:]])
    assert np.allclose(H, 1.0, atol=1e-12)


def test_csv_all_fields_small_grid():
    p = represent.example_catalogue("sphere", {"H": 1}, GridSpec(0, 1, 0, 1, 3, 3))
    text = csv_text(p, ["u", "gauss_res"])
    assert len(text.splitlines()) == 10
    with pytest.raises(ValueError):
        csv_text(p, [])
    with pytest.raises(ValueError):
        csv_text(p, ["bogus"])


def test_empty_field_list_is_input_error(tmp_path, capsys):
    text = "[surface]\nsource = catalogue\nname = sphere\n[job]\nfields =\n" + GRID3
    assert run(tmp_path, "generate", text) == 2
    assert "field" in capsys.readouterr().err
    assert not (tmp_path / "out" / "fields.csv").exists()


def test_malformed_expression(tmp_path, capsys):
    text = "[surface]\nsource = weierstrass\nh = z^^2\n" + GRID3
    assert run(tmp_path, "generate", text) == 2
    err = capsys.readouterr().err
    assert "[surface] h" in err
    assert "offset 2" in err
    assert "z^^2\n  ^" in err


@pytest.mark.parametrize("text", [
    "[surface]\nsource = catalogue\nname = sphere\n",                      # no grid
    "[surface]\nsource = nope\n" + GRID3,
    "[surface]\nsource = catalogue\nname = torus\n" + GRID3,
    "[surface]\nsource = catalogue\nname = singly_periodic\na = 0.5\nb = 1\n" + GRID3,
    "[surface]\nsource = catalogue\nname = sphere\n[tolerances]\nfoo = 1\n" + GRID3,
    "[surface]\nsource = catalogue\nname = sphere\n[job]\nbasepoint = 7, 7\n" + GRID3,
    "[surface]\nsource = weierstrass\nh = 1/z\n[grid]\nu0=-1\nu1=1\nv0=-1\nv1=1\nnu=5\nnv=5\n",
    "[surface]\nsource = spinor\nalpha = 1\nbeta_conj = i*z\n" + GRID_FINE,
])
def test_input_errors_exit_2(tmp_path, text):
    assert run(tmp_path, "generate", text) == 2


def test_verify_cylinder(tmp_path):
    text = "[surface]\nsource = catalogue\nname = cylinder\nH = 1\n" + GRID_FINE
    assert run(tmp_path, "verify", text) == 0
    rep = report(tmp_path)
    assert not (tmp_path / "out" / "mesh.obj").exists()
    structure = [k for k in rep if k.startswith("check.structure.") and k.endswith(".pass")]
    assert len(structure) == 6
    assert all(rep[k] == "true" for k in structure)
    assert rep["status"] == "pass"


CATALOGUE_CONFIGS = [
    "name = sphere\nH = 1",
    "name = cylinder\nH = 0.5",
    "name = delaunay\nH = 1\na = 1",
    "name = delaunay\nH = 1\na = -2",
    "name = singly_periodic\nH = 1\na = 1\nb = -3",
    "name = singly_periodic\nH = 1\na = 2\nb = 8/3",
    "name = singly_periodic\nH = 1\na = 1/3\nb = 4/3",
]


@pytest.mark.parametrize("entry", CATALOGUE_CONFIGS)
def test_generate_then_verify_catalogue(tmp_path, entry):
    text = f"[surface]\nsource = catalogue\n{entry}\n" + GRID_FINE
    assert run(tmp_path, "catalogue", text, "gen") == 0
    assert run(tmp_path, "verify", text, "ver") == 0
    assert report(tmp_path, "ver")["status"] == "pass"
    assert (tmp_path / "gen" / "report.txt").read_bytes() != b""


def test_singly_periodic_report_metadata(tmp_path):
    text = "[surface]\nsource = catalogue\nname = singly_periodic\na = 1\nb = -3\n" + GRID_FINE
    assert run(tmp_path, "verify", text) == 0
    rep = report(tmp_path)
    assert rep["period.L"] == "1"
    assert rep["period.label"] == "D3"
    assert rep["check.period.pass"] == "true"


def test_kenmotsu_and_weierstrass_sources(tmp_path):
    k = "[surface]\nsource = kenmotsu\nH = 1\nh2 = exp(-z)\nomega = exp(z)\n" + GRID_FINE
    assert run(tmp_path, "generate", k, "k") == 0
    w = "[surface]\nsource = weierstrass\nh = z\nomega = 1\n[job]\nx0 = 1, 2, 3\nbasepoint = 0, 0\n" + GRID_FINE
    assert run(tmp_path, "generate", w, "w") == 0
    first = (tmp_path / "w" / "mesh.obj").read_text().splitlines()[1]
    assert first == "v 2.0 3.0 1.0"


def test_spin_mode(tmp_path):
    text = "[spin]\nalpha = 1\nbeta_conj = z\nrho = auto\n" + GRID_FINE
    assert run(tmp_path, "spin", text) == 0
    rep = report(tmp_path)
    assert rep["check.dirac.pass"] == "true"
    assert rep["check.mean_curvature.pass"] == "true"


def test_spin_mode_wrong_rho_fails(tmp_path, capsys):
    text = "[spin]\nalpha = 1\nbeta_conj = z\nrho = 0\n" + GRID_FINE
    assert run(tmp_path, "spin", text) == 1
    assert "dirac" in capsys.readouterr().err


def test_tolerance_override_can_fail(tmp_path):
    text = "[surface]\nsource = catalogue\nname = delaunay\nH = 1\na = 1\n" + GRID3.replace("3", "7")
    assert run(tmp_path, "verify", text, extra=["--tolerance", "1e-30"]) == 1
    assert report(tmp_path)["status"] == "fail"


def test_console_entry_point(tmp_path):
    cfg = write(tmp_path, "[surface]\nsource = catalogue\nname = sphere\n" + GRID3)
    out = subprocess.run([sys.executable, "-m", "isogeo.cli", "generate", "--config", cfg,
                          "--out", str(tmp_path / "o")], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert (tmp_path / "o" / "mesh.obj").exists()
