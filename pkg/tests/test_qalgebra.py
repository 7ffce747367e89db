import pytest

from bimod.algebra.qalgebra import (
    AlgElem,
    ExponentWindow,
    PowerMode,
    alg_mul,
    center_basis,
    commutator,
    format_alg,
    in_left_ideal_x,
    is_central,
    monomial_inverse,
)
from bimod.algebra.scalar import FieldMode
from bimod.analysis.random_instances import random_alg
from bimod.utils.errors import (
    IndexOutOfRangeError,
    ModeMismatchError,
    NegativeExponentError,
    WindowEmptyError,
)

GENERIC = FieldMode.GENERIC_Q
ZETA3 = FieldMode.ZETA3
LAURENT = PowerMode.LAURENT


def test_defining_relation(qmode, mono, q):
    x, y = AlgElem.x(qmode), AlgElem.y(qmode)
    assert alg_mul(x, y) == mono(1, 1, qmode)
    assert alg_mul(y, x) == mono(1, 1, qmode, q(-1, qmode))
    assert alg_mul(x, y) == alg_mul(y, x).scale(q(1, qmode))


def test_monomial_product(mono, q):
    # (x y^2)(x^3 y) = q^-6 x^4 y^3
    product = alg_mul(mono(1, 2, GENERIC), mono(3, 1, GENERIC))
    assert product == mono(4, 3, GENERIC, q(-6, GENERIC))


def test_associativity(qmode, rng):
    for _ in range(10):
        a, b, c = (random_alg(rng, qmode, 3) for _ in range(3))
        assert alg_mul(alg_mul(a, b), c) == alg_mul(a, alg_mul(b, c))


def test_distributivity(qmode, rng):
    a, b, c = (random_alg(rng, qmode, 3) for _ in range(3))
    assert alg_mul(a, b + c) == alg_mul(a, b) + alg_mul(a, c)


def test_commutator(qmode, mono, q):
    x, y = AlgElem.x(qmode), AlgElem.y(qmode)
    assert commutator(x, y) == mono(1, 1, qmode, 1 - q(-1, qmode))


def test_center_at_cube_root():
    basis = center_basis(3, ZETA3)
    support = {m for b in basis for m in b.coeffs}
    assert support == {(0, 0), (3, 0), (0, 3), (3, 3)}
    assert all(is_central(b) for b in basis)


def test_center_at_generic_q():
    basis = center_basis(5, GENERIC)
    assert len(basis) == 1
    assert basis[0] == AlgElem.one(GENERIC)


def test_is_central(mono):
    assert is_central(mono(3, 0, ZETA3))
    assert is_central(mono(3, 6, ZETA3))
    assert not is_central(mono(3, 0, GENERIC))
    assert not is_central(mono(1, 2, ZETA3))


def test_center_basis_rejects_negative_bound():
    with pytest.raises(IndexOutOfRangeError):
        center_basis(-1, ZETA3)


def test_left_ideal_membership(mono):
    assert in_left_ideal_x(mono(1, 1, ZETA3), 1)
    assert not in_left_ideal_x(mono(0, 1, ZETA3), 1)
    assert not in_left_ideal_x(mono(1, 1, ZETA3), 2)
    assert in_left_ideal_x(mono(2, 0, ZETA3) + mono(3, 4, ZETA3), 2)
    assert in_left_ideal_x(AlgElem.zero(ZETA3), 2)


def test_laurent_inverse(qmode):
    a = AlgElem.monomial(2, 1, qmode, LAURENT)
    assert alg_mul(monomial_inverse(2, 1, qmode), a) == AlgElem.one(qmode, LAURENT)
    assert alg_mul(a, monomial_inverse(2, 1, qmode)) == AlgElem.one(qmode, LAURENT)


def test_polynomial_mode_rejects_negative_exponents():
    with pytest.raises(NegativeExponentError):
        AlgElem.monomial(-1, 0, GENERIC)
    with pytest.raises(NegativeExponentError):
        monomial_inverse(1, 0, GENERIC).to_polynomial()


def test_power_modes_do_not_mix():
    with pytest.raises(ModeMismatchError):
        alg_mul(AlgElem.x(GENERIC), AlgElem.x(GENERIC, LAURENT))
    with pytest.raises(ModeMismatchError):
        AlgElem.x(GENERIC) + AlgElem.x(ZETA3)


def test_power(mono, q):
    y = AlgElem.y(GENERIC)
    x = AlgElem.x(GENERIC)
    assert (alg_mul(y, x)) ** 2 == mono(2, 2, GENERIC, q(-3, GENERIC))
    with pytest.raises(IndexOutOfRangeError):
        x ** -1


def test_window():
    window = ExponentWindow.from_list([-1, 1, 0, 2])
    assert window.power_mode is LAURENT
    assert len(list(window.monomials())) == 9
    assert (-1, 2) in window
    assert (2, 0) not in window
    assert ExponentWindow.square(3).power_mode is PowerMode.POLYNOMIAL
    with pytest.raises(WindowEmptyError):
        list(ExponentWindow(2, 1, 0, 0).monomials())


def test_format(mono):
    assert format_alg(AlgElem.zero(GENERIC)) == '0'
    assert format_alg(mono(1, 1, GENERIC)) == 'x*y'
    assert format_alg(mono(2, 0, GENERIC) - mono(0, 3, GENERIC)) == '-y^3 + x^2'
