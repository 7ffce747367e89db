import pytest

from bimod.algebra.qalgebra import is_central
from bimod.algebra.scalar import FieldMode
from bimod.analysis.random_instances import (
    VIOLATABLE_CLAUSES,
    instance_rng,
    random_admissible_gamma,
    random_alg,
    random_central,
    random_compat_triple,
    random_matfunc,
    random_mg_gamma,
    random_scalar,
    random_symmetric_grid,
    random_violating_gamma,
)
from bimod.geometry.connection import Side, check_admissible
from bimod.geometry.matrixgeo import MatrixGeometry, check_symmetric

ZETA3 = FieldMode.ZETA3


def test_instances_are_reproducible():
    a = random_alg(instance_rng(42, 3), ZETA3, 4)
    b = random_alg(instance_rng(42, 3), ZETA3, 4)
    assert a == b


def test_random_scalars_are_nonzero(rng, qmode):
    assert all(random_scalar(rng, qmode) for _ in range(20))


def test_random_alg_respects_degree(rng, qmode):
    a = random_alg(rng, qmode, 2)
    assert all(0 <= p <= 2 and 0 <= r <= 2 for p, r in a.coeffs)
    assert random_alg(rng, qmode, -1).is_zero


def test_random_central(rng, qmode):
    assert all(is_central(random_central(rng, qmode, 6)) for _ in range(5))


def test_admissible_generator(rng):
    for _ in range(5):
        assert check_admissible(random_admissible_gamma(rng, 3))[0]


def test_violating_generator_rejects_clause_three(rng):
    with pytest.raises(ValueError):
        random_violating_gamma(rng, 3)
    assert 3 not in VIOLATABLE_CLAUSES


def test_compat_triples(rng):
    for kind in (0, 1, 2):
        gamma, gamma_tilde, g = random_compat_triple(rng, kind, 2)
        assert gamma.side is Side.LEFT
        assert gamma_tilde.side is Side.RIGHT
        if kind:
            assert all(e.is_constant() for e in g.G)


def test_matrix_instances(rng):
    geo = MatrixGeometry(1, 2)
    assert random_matfunc(rng, geo, 1, central=True).is_central()
    assert check_symmetric(random_symmetric_grid(rng, geo, 1))[0]
    gamma = random_mg_gamma(rng, geo, 1, density=1.0, central=True)
    assert all(e.is_central() for plane in gamma for row in plane for e in row)
