import pytest

from bimod.algebra.oneforms import ETA, XI, TensorOverC
from bimod.algebra.qalgebra import AlgElem, ExponentWindow
from bimod.algebra.scalar import FieldMode, Scalar, q_power
from bimod.analysis.random_instances import random_metric
from bimod.geometry.metric import (
    ENTRY_LABELS,
    Metric,
    eval_metric,
    is_middle_linear,
    is_tau_symmetric,
    metric_span_rank,
    middle_linearity_residuals,
    ml_family_laurent,
    ml_family_zeta3,
    ml_laurent_antisymmetric,
    solve_middle_linear,
)
from bimod.utils.errors import NotCentralError

GENERIC = FieldMode.GENERIC_Q
ZETA3 = FieldMode.ZETA3


def test_evaluation_on_basis_tensors(qmode, rng):
    g = random_metric(rng, qmode, 2)
    one = AlgElem.one(qmode)
    for i in (XI, ETA):
        for j in (XI, ETA):
            assert eval_metric(g, TensorOverC.simple(one, i, j, one)) == g.entry(i, j)


def test_evaluation_is_outer_bilinear(qmode, mono):
    g = Metric.constant([1, 0, 0, 1], qmode)
    x, y = AlgElem.x(qmode), AlgElem.y(qmode)
    assert eval_metric(g, TensorOverC.simple(x, XI, XI, y)) == mono(1, 1, qmode)


def test_no_polynomial_middle_linear_metric_at_generic_q():
    window = ExponentWindow.square(4)
    assert solve_middle_linear(window, GENERIC) == []
    assert solve_middle_linear(window, GENERIC, tau_symmetric=True) == []


def test_constant_metric_is_not_middle_linear(qmode):
    assert not is_middle_linear(Metric.constant([1, 0, 0, 1], qmode))
    assert any(not r.is_zero for r in middle_linearity_residuals(Metric.constant([1, 0, 0, 1], qmode)))


def test_laurent_family_at_generic_q():
    one, zero = Scalar.one(GENERIC), Scalar.zero(GENERIC)
    family = [ml_family_laurent(one, zero, zero), ml_family_laurent(zero, one, zero),
              ml_family_laurent(zero, zero, one)]
    assert all(is_middle_linear(g) and is_tau_symmetric(g) for g in family)
    window = ExponentWindow(-4, 0, 0, 6)
    solved_tau = solve_middle_linear(window, GENERIC, tau_symmetric=True)
    assert len(solved_tau) == 3
    assert metric_span_rank(solved_tau + family) == 3


def test_laurent_window_has_one_solution_outside_the_family():
    one, zero = Scalar.one(GENERIC), Scalar.zero(GENERIC)
    skew = ml_laurent_antisymmetric(one)
    assert is_middle_linear(skew)
    assert not is_tau_symmetric(skew)
    assert skew.entry(0, 1) == skew.entry(1, 0).scale(-q_power(-1, GENERIC))
    family = [ml_family_laurent(one, zero, zero), ml_family_laurent(zero, one, zero),
              ml_family_laurent(zero, zero, one)]
    solved = solve_middle_linear(ExponentWindow(-4, 0, 0, 6), GENERIC)
    assert len(solved) == 4
    assert all(is_middle_linear(g) for g in solved)
    assert metric_span_rank(solved + family + [skew]) == 4


def test_laurent_family_off_diagonal_relation():
    g = ml_family_laurent(Scalar.one(GENERIC), Scalar.from_rational(2, 1, GENERIC), Scalar.zero(GENERIC))
    assert g.entry(0, 1) == g.entry(1, 0).scale(q_power(1, GENERIC))


@pytest.mark.parametrize('Y,W', [((0, 3), (0, 0)), ((0, 0), (3, 0)), ((3, 3), (0, 3))])
def test_zeta3_family_is_middle_linear(Y, W):
    c = lambda p, r: AlgElem.monomial(p, r, ZETA3)  # noqa: E731
    g = ml_family_zeta3(c(0, 0), c(*Y), c(*W), c(3, 0))
    assert is_middle_linear(g)


def test_zeta3_family_tau_symmetry_iff_y_is_q_w():
    one = AlgElem.one(ZETA3)
    zero = AlgElem.zero(ZETA3)
    q = q_power(1, ZETA3)
    symmetric = ml_family_zeta3(one, one.scale(q), one, zero)
    assert is_middle_linear(symmetric)
    assert is_tau_symmetric(symmetric)
    assert not is_tau_symmetric(ml_family_zeta3(one, one, one, zero))


def test_zeta3_family_rejects_non_central_parameters():
    one = AlgElem.one(ZETA3)
    with pytest.raises(NotCentralError):
        ml_family_zeta3(AlgElem.x(ZETA3), one, one, one)


def test_zeta3_solutions_are_middle_linear():
    solved = solve_middle_linear(ExponentWindow.square(5), ZETA3)
    assert solved
    assert all(is_middle_linear(g) for g in solved)
    tau = solve_middle_linear(ExponentWindow.square(5), ZETA3, tau_symmetric=True)
    assert 0 < len(tau) < len(solved)
    assert all(is_tau_symmetric(g) for g in tau)


def test_metric_to_dict_labels(qmode):
    g = Metric.constant([1, 0, 0, 2], qmode)
    assert list(g.to_dict()) == list(ENTRY_LABELS)
    assert g.to_dict()['G22'] == '2'
