import pytest

from bimod.algebra.oneforms import ETA, XI, OneForm, TensorOverA, TensorOverC, left_mul_form
from bimod.algebra.parsing import parse_alg, parse_oneform, parse_tensorA, parse_tensorC
from bimod.algebra.qalgebra import AlgElem, PowerMode
from bimod.algebra.scalar import FieldMode, Scalar, q_power
from bimod.utils.errors import ParseError

GENERIC = FieldMode.GENERIC_Q
ZETA3 = FieldMode.ZETA3


def test_parse_polynomial(qmode, mono):
    a = parse_alg('x^2*y - 3*y + 1/2', qmode)
    expected = mono(2, 1, qmode) - mono(0, 1, qmode, 3) + AlgElem.constant(Scalar.from_rational(1, 2, qmode), qmode)
    assert a == expected
    assert a.power_mode is PowerMode.POLYNOMIAL


def test_parse_reorders_products(qmode, mono, q):
    assert parse_alg('y*x', qmode) == mono(1, 1, qmode, q(-1, qmode))


def test_parse_q_coefficients(mono, q):
    assert parse_alg('q^2*x', GENERIC) == mono(1, 0, GENERIC, q(2, GENERIC))
    assert parse_alg('q^3', ZETA3) == AlgElem.one(ZETA3)


def test_negative_exponent_selects_laurent(qmode):
    a = parse_alg('x^-1', qmode)
    assert a.power_mode is PowerMode.LAURENT
    assert a.coeff(-1, 0) == Scalar.one(qmode)


def test_parse_oneform_sides(qmode):
    x = AlgElem.x(qmode)
    assert parse_oneform('x*eta', qmode) == left_mul_form(x, OneForm.eta(qmode))
    assert parse_oneform('eta*x', qmode) == OneForm.eta(qmode) * x
    assert parse_oneform('ξ', qmode) == OneForm.xi(qmode)
    assert parse_oneform('0', qmode).is_zero


def test_parse_tensors(qmode):
    T = parse_tensorA('xi oxA eta', qmode)
    assert T == TensorOverA.basis(XI, ETA, qmode)
    one = AlgElem.one(qmode)
    C = parse_tensorC('xi ox xi', qmode)
    assert C == TensorOverC.simple(one, XI, XI, one)


@pytest.mark.parametrize('text', ['', 'x +', 'x**y', 'xi*eta', 'x^(1/2)'])
def test_bad_algebra_elements(text):
    with pytest.raises(ParseError):
        parse_alg(text, ZETA3)


def test_form_terms_need_one_basis_letter():
    with pytest.raises(ParseError):
        parse_oneform('x*y', ZETA3)
    with pytest.raises(ParseError):
        parse_oneform('xi*eta', ZETA3)


def test_error_carries_line():
    with pytest.raises(ParseError) as exc:
        parse_alg('x +', ZETA3, line=7)
    assert exc.value.line == 7
    assert 'line 7' in str(exc.value)


def test_q_power_in_coefficients(qmode):
    assert parse_alg('(q - q^-1)*x', qmode).coeff(1, 0) == q_power(1, qmode) - q_power(-1, qmode)
