import pytest

from bimod.algebra.oneforms import OneForm, central_generators, standard_sigma
from bimod.algebra.qalgebra import AlgElem
from bimod.algebra.scalar import FieldMode, Scalar
from bimod.analysis.random_instances import random_admissible_gamma, random_christoffel, random_compat_triple
from bimod.geometry.compat import (
    compat_over_center,
    interp_pair,
    metric_compat_residuals,
    solve_right_for_metric,
)
from bimod.geometry.connection import Christoffel, Side, nabla_left, nabla_right, solve_right_from_left
from bimod.geometry.metric import Metric
from bimod.utils.errors import InverseInvalidError, ModeMismatchError

GENERIC = FieldMode.GENERIC_Q
ZETA3 = FieldMode.ZETA3


def _flat(mode):
    return Christoffel.zero(mode, Side.LEFT), Christoffel.zero(mode, Side.RIGHT)


def test_flat_pair_with_constant_metric(qmode):
    gamma, gamma_tilde = _flat(qmode)
    report = metric_compat_residuals(gamma, gamma_tilde, Metric.constant([1, 0, 0, 1], qmode))
    assert report.satisfied
    assert set(report.to_dict()) == {'P11', 'P12', 'P21', 'P22'}


def test_non_constant_metric_breaks_flat_compatibility(qmode):
    gamma, gamma_tilde = _flat(qmode)
    zero = AlgElem.zero(qmode)
    report = metric_compat_residuals(gamma, gamma_tilde, Metric([AlgElem.x(qmode), zero, zero, zero]))
    assert not report.satisfied
    assert report.residuals[0][0] == OneForm.xi(qmode)
    assert report.residuals[1][1].is_zero


def test_solved_right_connection_is_compatible(qmode, rng):
    g = Metric.constant([2, 1, 0, 1], qmode)
    gamma = random_christoffel(rng, qmode, 2)
    gamma_tilde = solve_right_for_metric(gamma, g)
    assert metric_compat_residuals(gamma, gamma_tilde, g).satisfied


def test_solve_right_needs_invertible_constant_metric(qmode):
    gamma = Christoffel.zero(qmode)
    with pytest.raises(InverseInvalidError):
        solve_right_for_metric(gamma, Metric.constant([1, 1, 1, 1], qmode))
    zero = AlgElem.zero(qmode)
    with pytest.raises(InverseInvalidError):
        solve_right_for_metric(gamma, Metric([AlgElem.x(qmode), zero, zero, AlgElem.one(qmode)]))


def test_mode_mismatch():
    gamma, gamma_tilde = _flat(ZETA3)
    with pytest.raises(ModeMismatchError):
        metric_compat_residuals(gamma, gamma_tilde, Metric.constant([1, 0, 0, 1], GENERIC))
    gamma, gamma_tilde = _flat(GENERIC)
    with pytest.raises(ModeMismatchError):
        compat_over_center(gamma, gamma_tilde, Metric.constant([1, 0, 0, 1], GENERIC))


@pytest.mark.parametrize('kind', [0, 1, 2])
def test_center_check_agrees_with_full_check(kind, rng):
    for _ in range(2):
        gamma, gamma_tilde, g = random_compat_triple(rng, kind, 2)
        assert compat_over_center(gamma, gamma_tilde, g) == metric_compat_residuals(gamma, gamma_tilde, g).satisfied


def test_compatible_triples_pass_on_center(rng):
    gamma, gamma_tilde, g = random_compat_triple(rng, 1, 2)
    assert compat_over_center(gamma, gamma_tilde, g)


def test_interpolation_endpoints(rng):
    gamma = random_admissible_gamma(rng, 2)
    gamma_tilde = solve_right_from_left(gamma)
    zero, one = Scalar.zero(ZETA3), Scalar.one(ZETA3)
    sigma = standard_sigma(ZETA3)
    half = Scalar.from_rational(1, 2, ZETA3)
    for zeta in central_generators(ZETA3):
        f_left, f_right = interp_pair(zero, one, gamma, gamma_tilde)
        assert f_left(zeta) == nabla_left(gamma, zeta)
        assert f_right(zeta) == sigma.inverse().apply(nabla_left(gamma, zeta))
        # a sigma-compatible pair is a fixed point of the whole family
        f_left, f_right = interp_pair(half, half, gamma, gamma_tilde)
        assert f_left(zeta) == nabla_left(gamma, zeta)
        assert f_right(zeta) == nabla_right(gamma_tilde, zeta)
