import numpy as np
import pytest

from isogeo import herm, represent, spin
from isogeo.errors import IntegrabilityError
from isogeo.grid import GridSpec
from isogeo.herm import Herm2, SpinFactor


@pytest.fixture(scope="module")
def grid():
    return GridSpec(-1, 1, -1, 1, 201, 201)


@pytest.fixture(scope="module")
def plane(grid):
    return represent.base_plane(grid)


def sphere_field(grid, rho=1.0):
    """``B = (1, conj z)``, which maps the plane to the paraboloid."""
    return spin.SpinField.from_functions(grid, np.ones_like, np.conj, rho)


def exp_field(grid):
    """``alpha = e^{z/2}``, ``beta = e^{zbar} e^{z/2}``; base-plane rho = e^u."""
    return spin.SpinField.from_functions(grid, lambda Z: np.exp(Z / 2),
                                         lambda Z: np.exp(np.conj(Z)) * np.exp(Z / 2))


def test_spin_differential_examples():
    dX = Herm2(0.3, -1.2, 0.5 - 2j)
    assert np.allclose(spin.spin_differential(SpinFactor(1, 0), dX).matrix, dX.matrix)
    k = 1.7
    assert np.allclose(spin.spin_differential(SpinFactor(k, 0), dX).matrix, k * k * dX.matrix)


def test_spin_differential_maps_plane_to_paraboloid():
    z = 0.4 - 0.3j
    B = SpinFactor(1, np.conj(z))
    for xu, expected in (((0, 1, 0, 0), (z.real, 1, 0, z.real)),
                         ((0, 0, 1, 0), (z.imag, 0, 1, z.imag))):
        out = herm.from_herm(spin.spin_differential(B, herm.to_herm(np.array(xu, float))))
        assert np.allclose(out, expected)


def test_metric_scaling_det_squared():
    rng = np.random.default_rng(0)
    a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    B = SpinFactor(a, b)
    X = herm.to_herm(np.array([0.0, 0.6, -0.8, 0.0]))
    Y = spin.spin_differential(B, X)
    assert -Y.det == pytest.approx(B.det ** 2 * -X.det)


def test_dirac_identity_field_is_closed(grid, plane):
    f = spin.SpinField.from_functions(grid, np.ones_like, np.zeros_like, 0.0)
    assert spin.dirac_residual(f, plane) <= 1e-12
    cat = represent.example_catalogue("delaunay", {"H": 1.0, "a": 1.0}, GridSpec(-1, 1, -1, 1, 21, 21))
    f = spin.SpinField.from_functions(cat.grid, np.ones_like, np.zeros_like, 0.0)
    assert spin.dirac_residual(f, cat) <= 1e-12


def test_dirac_sphere_field(grid, plane):
    assert spin.dirac_residual(sphere_field(grid, 1.0), plane) <= 1e-8
    assert spin.dirac_residual(sphere_field(grid, 0.0), plane) == pytest.approx(1.0, abs=1e-8)


def test_rho_helper(grid, plane):
    assert np.allclose(spin.rho_base_plane(sphere_field(grid)), 1.0, atol=1e-10)
    U, _ = grid.mesh()
    rho = spin.rho_base_plane(exp_field(grid))
    assert np.max(np.abs(rho - np.exp(U))) <= 1e-8
    f = exp_field(grid)
    f = spin.SpinField(grid, f.alpha, f.beta, rho)
    assert spin.dirac_residual(f, plane) <= 1e-8


def test_analytic_derivatives_accepted(grid, plane):
    Z = grid.z()
    f = spin.SpinField(grid, np.ones_like(Z), np.conj(Z), 1.0,
                       {"alpha_z": np.zeros_like(Z), "alpha_zbar": np.zeros_like(Z),
                        "beta_z": np.zeros_like(Z), "beta_zbar": np.ones_like(Z)})
    assert spin.dirac_residual(f, plane) <= 1e-15


def test_spin_field_rejects_zero_alpha(grid):
    with pytest.raises(ValueError):
        spin.SpinField.from_functions(grid, np.zeros_like, np.conj)


def test_integrate_identity_translates(grid, plane):
    f = spin.SpinField.from_functions(grid, np.ones_like, np.zeros_like, 0.0)
    x0 = np.array([1.0, -2.0, 0.5])
    p = spin.integrate_spin(f, plane, base=(10, 20), x0=x0)
    assert np.allclose(p.iso[10, 20], x0)
    assert np.allclose(p.iso - x0, plane.iso - plane.iso[10, 20], atol=1e-14)


def test_integrate_sphere(grid, plane):
    p = spin.integrate_spin(sphere_field(grid), plane)
    U, V = grid.mesh()
    oracle = np.stack([(U ** 2 + V ** 2) / 2, U, V], -1)
    d = p.iso - oracle
    assert np.max(np.abs(d - d[100, 100])) <= 1e-6
    assert p.meta["loop_residual"] <= 1e-8
    assert p.meta["path_difference"] <= 1e-8
    assert np.max(np.abs(p.forms.H - 1)) <= 1e-4
    assert np.max(np.abs(p.forms.Q)) <= 1e-8  # Hopf law: Q~ = 0
    metric = np.exp(2 * p.forms.sigma)
    assert np.max(np.abs(metric - p.meta["metric_expected"])) <= 1e-6


def test_integrate_exp_field_mean_curvature(grid, plane):
    f = exp_field(grid)
    f = spin.SpinField(grid, f.alpha, f.beta, spin.rho_base_plane(f))
    p = spin.integrate_spin(f, plane, rule="cubic")
    assert np.max(np.abs(p.forms.H - p.meta["H_expected"])) <= 1e-4
    assert np.allclose(p.meta["H_expected"], 1.0, atol=1e-8)
    U, V = grid.mesh()
    oracle = np.stack([np.exp(2 * U) / 2, np.exp(U) * np.cos(V), np.exp(U) * np.sin(V)], -1)
    d = p.iso - oracle
    assert np.max(np.abs(d - d[100, 100])) <= 1e-6


def test_integrate_rejects_incompatible(grid, plane):
    # beta = |z|^2 with alpha = 1 admits no rho: the differential is not closed
    f = spin.SpinField.from_functions(grid, np.ones_like, lambda Z: Z * np.conj(Z), 0.0)
    assert spin.dirac_residual(f, plane, rho=0.0) > 0.5
    with pytest.raises(IntegrabilityError):
        spin.integrate_spin(f, plane)


def test_transformed_mean():
    assert spin.transformed_mean(0.7, 0, 1) == 0.7
    assert spin.transformed_mean(0, 1, 1) == 1
    assert spin.transformed_mean(0, 1, 4) == 0.25
    with pytest.raises(ValueError):
        spin.transformed_mean(1, 1, 0)
