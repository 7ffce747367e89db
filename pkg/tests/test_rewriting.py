import pytest

from bimod.algebra.oneforms import ETA, XI, OneForm, TensorOverA, left_mul_form, left_mul_tensorA
from bimod.algebra.qalgebra import AlgElem
from bimod.algebra.rewriting import (
    monomial_word,
    oracle_alg_word,
    oracle_left_mul_form,
    oracle_left_mul_tensor,
    rewrite,
)
from bimod.algebra.scalar import Scalar, q_power


@pytest.mark.parametrize('p,r', [(0, 0), (1, 0), (0, 1), (2, 1), (3, 2), (1, 4)])
def test_oracle_matches_form_engine(p, r, qmode):
    a = AlgElem.monomial(p, r, qmode)
    for j in (XI, ETA):
        assert oracle_left_mul_form(p, r, j, qmode) == left_mul_form(a, OneForm.basis(j, qmode))


@pytest.mark.parametrize('p,r', [(1, 0), (0, 1), (2, 2), (3, 1)])
def test_oracle_matches_tensor_engine(p, r, qmode):
    a = AlgElem.monomial(p, r, qmode)
    for j in (XI, ETA):
        for k in (XI, ETA):
            engine = left_mul_tensorA(a, TensorOverA.basis(j, k, qmode))
            assert oracle_left_mul_tensor(p, r, j, k, qmode) == engine


def test_yx_reorders(qmode):
    assert oracle_alg_word(('y', 'x'), qmode) == AlgElem.monomial(1, 1, qmode, coeff=q_power(-1, qmode))


def test_alg_word_matches_product(qmode):
    # y^2 x^3 = q^-6 x^3 y^2
    word = ('y', 'y', 'x', 'x', 'x')
    assert oracle_alg_word(word, qmode) == AlgElem.monomial(3, 2, qmode, coeff=q_power(-6, qmode))


def test_normal_words_are_untouched(qmode):
    word = ('xi',) + monomial_word(2, 1)
    assert rewrite({word: Scalar.one(qmode)}, qmode) == {word: Scalar.one(qmode)}


def test_cancelling_terms_drop_out(qmode):
    one = Scalar.one(qmode)
    word = ('y', 'x')
    assert rewrite({word: one, ('x', 'y'): -q_power(-1, qmode)}, qmode) == {}
