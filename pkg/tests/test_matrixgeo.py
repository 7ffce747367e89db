import pytest

from bimod.algebra.scalar import Scalar
from bimod.analysis.random_instances import random_matfunc, random_mg_gamma, random_symmetric_grid
from bimod.analysis.verifications import matrixgeo_fixed_checks
from bimod.geometry import matrixgeo as mg
from bimod.utils.errors import NotSymmetricError


@pytest.fixture
def geo():
    return mg.MatrixGeometry(1, 2)


def test_dimensions():
    assert mg.MatrixGeometry(1, 2).dim == 4
    assert mg.MatrixGeometry(2, 3).dim == 10
    assert len(mg.lambda_basis(3)) == 8
    with pytest.raises(ValueError):
        mg.MatrixGeometry(1, 0)


def test_pauli_structure_constants(geo):
    l1, l2, l3 = (geo.lam(b) for b in range(3))
    assert l1.commutator(l2) == -l3
    assert l2.commutator(l3) == -l1
    assert l3.commutator(l1) == -l2


def test_centrality(geo):
    assert geo.coordinate(0).is_central()
    assert geo.scalar(Scalar.gaussian(2, 1)).is_central()
    assert not geo.lam(0).is_central()


def test_differential(geo):
    t = geo.coordinate(0)
    assert mg.differential_mg(t) == geo.basis_form(0)
    d_lam = mg.differential_mg(geo.lam(0))
    assert d_lam.c[0].is_zero
    assert d_lam.c[1].is_zero
    assert d_lam.c[2] == geo.lam(1).commutator(geo.lam(0))


def test_leibniz(geo, rng):
    for _ in range(3):
        a, b = random_matfunc(rng, geo, 2), random_matfunc(rng, geo, 2)
        expected = mg.differential_mg(a).right_mul(b) + mg.differential_mg(b).left_mul(a)
        assert mg.differential_mg(a * b) == expected


def test_one_forms_decompose_on_central_basis(geo, rng):
    omega = mg.MGOneForm([random_matfunc(rng, geo, 1) for _ in range(geo.dim)], geo)
    assert mg.decompose_central(omega) == (True, [])


def test_flip_is_an_involution(geo, rng):
    T = [[random_matfunc(rng, geo, 1) for _ in range(geo.dim)] for _ in range(geo.dim)]
    assert mg.flip(mg.flip(T)) == T
    assert mg.flip(T)[0][1] == T[1][0]


def test_metric_round_trip(geo, rng):
    G = random_symmetric_grid(rng, geo, 1)
    metric = mg.metric_bijection(G, geo)
    assert mg.extract_grid(metric) == G
    assert mg.is_tau_symmetric_mg(metric)


def test_asymmetric_grid_is_rejected(geo):
    G = [[geo.identity() if i == j else geo.zero() for j in range(geo.dim)] for i in range(geo.dim)]
    G[0][1] = geo.coordinate(0)
    with pytest.raises(NotSymmetricError):
        mg.metric_bijection(G, geo)


def test_middle_linear_iff_central_entries(geo, rng):
    central = mg.metric_bijection(random_symmetric_grid(rng, geo, 1, central=True), geo)
    assert mg.is_middle_linear_mg(central)
    G = [[geo.identity() if i == j else geo.zero() for j in range(geo.dim)] for i in range(geo.dim)]
    G[1][1] = geo.lam(2)
    assert not mg.is_middle_linear_mg(mg.metric_bijection(G, geo))


def test_fixed_checks(geo):
    checks = matrixgeo_fixed_checks(geo)
    assert all(checks.values()), checks


def test_index_swap_is_sigma_compatibility(geo, rng):
    gamma = random_mg_gamma(rng, geo, 1, density=0.2)
    swapped = mg.swap_lower(gamma)
    assert mg.sigma_compat_mg(gamma, swapped)
    assert all(mg.tensor_is_zero(T) for T in mg.sigma_compat_residuals_mg(gamma, swapped, geo))


def test_central_symbols_satisfy_whole_bimodule(geo, rng):
    gamma = random_mg_gamma(rng, geo, 1, density=0.2, central=True)
    assert mg.whole_bimodule_mg(gamma, mg.swap_lower(gamma))
    assert all(mg.tensor_is_zero(T) for T in mg.whole_bimodule_residuals_mg(gamma, geo))


def test_compat_display_matches_first_principles(geo, rng):
    G = random_symmetric_grid(rng, geo, 1)
    gamma = random_mg_gamma(rng, geo, 1, density=0.1)
    gamma_tilde = mg.swap_lower(gamma)
    display = mg.metric_compat_mg(gamma, gamma_tilde, G, geo)
    assert display == mg.compat_residuals_first_principles(gamma, gamma_tilde, mg.metric_bijection(G, geo))
