import pytest

from bimod.algebra.scalar import FieldMode, Scalar, parse_scalar, q_power, qn_sum
from bimod.utils.errors import DivisionByZeroError, IndexOutOfRangeError, ModeMismatchError, ParseError

GENERIC = FieldMode.GENERIC_Q
ZETA3 = FieldMode.ZETA3


def test_cube_root_relations():
    q = q_power(1, ZETA3)
    assert q ** 3 == 1
    assert 1 + q + q * q == 0
    assert q_power(-1, ZETA3) == q * q
    assert q_power(5, ZETA3) == q_power(2, ZETA3)


def test_generic_q_is_transcendental():
    q = q_power(1, GENERIC)
    assert q ** 3 != 1
    assert q * q.inverse() == 1
    assert (q_power(2, GENERIC) - 1) / (q - 1) == q + 1
    assert q_power(-2, GENERIC) * q_power(2, GENERIC) == 1


def test_qn_sum():
    assert qn_sum(0, ZETA3).is_zero
    assert qn_sum(-1, GENERIC).is_zero
    assert qn_sum(1, GENERIC) == 1
    assert qn_sum(3, ZETA3).is_zero
    assert not qn_sum(3, GENERIC).is_zero
    assert qn_sum(2, GENERIC) == 1 + q_power(2, GENERIC)
    with pytest.raises(IndexOutOfRangeError):
        qn_sum(-2, GENERIC)


def test_division_by_zero():
    with pytest.raises(DivisionByZeroError):
        Scalar.zero(ZETA3).inverse()
    with pytest.raises(ZeroDivisionError):
        Scalar.one(GENERIC) / 0
    with pytest.raises(DivisionByZeroError):
        Scalar.from_rational(1, 0)


def test_mode_mismatch():
    with pytest.raises(ModeMismatchError):
        Scalar.one(FieldMode.RATIONAL) + Scalar.one(GENERIC)
    assert Scalar.one(ZETA3) != Scalar.one(GENERIC)


def test_zeta3_inverse():
    a = Scalar.from_rational(2, 1, ZETA3) + q_power(1, ZETA3) * 3
    assert a * a.inverse() == 1


def test_gaussian_unit():
    i = Scalar.imaginary_unit()
    assert i * i == -1
    assert Scalar.gaussian((1, 2), 3) * 2 == Scalar.gaussian(1, 6)


def test_integer_coercion():
    q = q_power(1, GENERIC)
    assert 2 * q == q + q
    assert 1 - q == -(q - 1)
    assert not Scalar.zero(GENERIC)
    assert Scalar.one(GENERIC)


def test_parse_scalar():
    assert parse_scalar('2/3', FieldMode.RATIONAL) == Scalar.from_rational(2, 3)
    assert parse_scalar('q^2 - 1', GENERIC) == q_power(2, GENERIC) - 1
    assert parse_scalar('q^3', ZETA3) == 1
    assert parse_scalar('1/(q+1)', GENERIC) * (q_power(1, GENERIC) + 1) == 1
    assert parse_scalar('2*I', FieldMode.GAUSSIAN) == Scalar.gaussian(0, 2)


def test_parse_scalar_errors():
    with pytest.raises(ParseError):
        parse_scalar('q +', GENERIC)
    with pytest.raises(ParseError):
        parse_scalar('q', FieldMode.RATIONAL)
    with pytest.raises(ParseError):
        parse_scalar('1/(1 + q + q^2)', ZETA3)


def test_hash_matches_equality():
    assert hash(parse_scalar('q', ZETA3)) == hash(q_power(1, ZETA3))
    assert len({q_power(4, ZETA3), q_power(1, ZETA3)}) == 1


def test_str_round_trip(qmode):
    s = Scalar.from_rational(3, 2, qmode) * q_power(2, qmode) - 1
    assert parse_scalar(str(s), qmode) == s
