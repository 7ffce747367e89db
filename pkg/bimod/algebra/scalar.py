"""
Exact Scalars

Exact field elements for the four ground fields the engine works over:
1. RATIONAL  - rationals (sympy ``QQ``)
2. GENERIC_Q - rational functions in an indeterminate q (sympy ``field("q", QQ)``)
3. ZETA3     - the cubic cyclotomic field, stored as a + b*q with q^2 = -1 - q
4. GAUSSIAN  - Gaussian rationals a + b*i (sympy ``QQ_I``), used by matrix geometry

All representations are canonical, so equality is representation equality.
"""

import logging
from enum import Enum
from functools import lru_cache
from typing import Any, Tuple, Union

import sympy
from sympy import I, QQ, QQ_I
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.fields import field
from sympy.polys.polyerrors import CoercionFailed

from ..utils.errors import DivisionByZeroError, IndexOutOfRangeError, ModeMismatchError, ParseError

logger = logging.getLogger(__name__)


class FieldMode(Enum):
    RATIONAL = 'rational'
    GENERIC_Q = 'generic'
    ZETA3 = 'zeta3'
    GAUSSIAN = 'gaussian'


# Rational function field Q(q); FracElement cancels to a canonical quotient
QF, Q_GEN = field("q", QQ)
Q_SYMBOL = sympy.Symbol('q')

PARSE_TRANSFORMATIONS = standard_transformations + (convert_xor,)

_ZETA3_ONE = (QQ(1), QQ(0))
_ZETA3_Q = (QQ(0), QQ(1))
_ZETA3_Q2 = (QQ(-1), QQ(-1))


def _z3_mul(a: Tuple, b: Tuple) -> Tuple:
    # (a0 + a1 q)(b0 + b1 q) with q^2 = -1 - q
    p = a[1] * b[1]
    return (a[0] * b[0] - p, a[0] * b[1] + a[1] * b[0] - p)


def _z3_inv(a: Tuple) -> Tuple:
    # conjugate is a0 + a1 q^2 = (a0 - a1) - a1 q; norm a0^2 - a0 a1 + a1^2
    norm = a[0] * a[0] - a[0] * a[1] + a[1] * a[1]
    return ((a[0] - a[1]) / norm, -a[1] / norm)


def _reduce_zeta3_poly(poly) -> Tuple:
    """Evaluate a PolyElement in q at a primitive cube root of unity"""
    slots = [QQ(0), QQ(0), QQ(0)]
    for (k,), c in poly.terms():
        slots[k % 3] += c
    return (slots[0] - slots[2], slots[1] - slots[2])


class Scalar:
    """
    Immutable exact scalar tagged with its field mode.

    Key Features:
    - Arithmetic operators with exact canonical results
    - Integers coerce into any mode; mixing two modes raises ModeMismatchError
    - Hashable, so scalars can key dictionaries
    """

    __slots__ = ('mode', 'value')

    def __init__(self, mode: FieldMode, value: Any):
        self.mode = mode
        self.value = value

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_rational(cls, numerator: int, denominator: int = 1,
                      mode: FieldMode = FieldMode.RATIONAL) -> 'Scalar':
        if denominator == 0:
            raise DivisionByZeroError(f"{numerator}/0")
        c = QQ(numerator, denominator)
        if mode is FieldMode.RATIONAL:
            return cls(mode, c)
        if mode is FieldMode.GENERIC_Q:
            return cls(mode, QF(c))
        if mode is FieldMode.ZETA3:
            return cls(mode, (c, QQ(0)))
        return cls(mode, QQ_I(c, QQ(0)))

    @classmethod
    def zero(cls, mode: FieldMode) -> 'Scalar':
        return _zero(mode)

    @classmethod
    def one(cls, mode: FieldMode) -> 'Scalar':
        return _one(mode)

    @classmethod
    def q(cls, mode: FieldMode) -> 'Scalar':
        """The deformation parameter (GENERIC_Q and ZETA3 only)"""
        return q_power(1, mode)

    @classmethod
    def imaginary_unit(cls) -> 'Scalar':
        return cls(FieldMode.GAUSSIAN, QQ_I(QQ(0), QQ(1)))

    @classmethod
    def gaussian(cls, re: Union[int, Tuple[int, int]], im: Union[int, Tuple[int, int]] = 0) -> 'Scalar':
        re_q = QQ(*re) if isinstance(re, tuple) else QQ(re)
        im_q = QQ(*im) if isinstance(im, tuple) else QQ(im)
        return cls(FieldMode.GAUSSIAN, QQ_I(re_q, im_q))

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other: Any) -> 'Scalar':
        if isinstance(other, Scalar):
            if other.mode is not self.mode:
                raise ModeMismatchError(f"Cannot combine {self.mode.value} and {other.mode.value} scalars")
            return other
        if isinstance(other, int):
            return Scalar.from_rational(other, 1, self.mode)
        raise TypeError(f"Cannot coerce {type(other).__name__} to Scalar")

    def __add__(self, other: Any) -> 'Scalar':
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.mode is FieldMode.ZETA3:
            return Scalar(self.mode, (self.value[0] + other.value[0], self.value[1] + other.value[1]))
        return Scalar(self.mode, self.value + other.value)

    __radd__ = __add__

    def __neg__(self) -> 'Scalar':
        if self.mode is FieldMode.ZETA3:
            return Scalar(self.mode, (-self.value[0], -self.value[1]))
        return Scalar(self.mode, -self.value)

    def __sub__(self, other: Any) -> 'Scalar':
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> 'Scalar':
        return (-self) + other

    def __mul__(self, other: Any) -> 'Scalar':
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.mode is FieldMode.ZETA3:
            return Scalar(self.mode, _z3_mul(self.value, other.value))
        return Scalar(self.mode, self.value * other.value)

    __rmul__ = __mul__

    def inverse(self) -> 'Scalar':
        if self.is_zero:
            raise DivisionByZeroError(f"Inverse of zero in {self.mode.value} mode")
        if self.mode is FieldMode.ZETA3:
            return Scalar(self.mode, _z3_inv(self.value))
        if self.mode is FieldMode.GENERIC_Q:
            return Scalar(self.mode, QF.one / self.value)
        return Scalar(self.mode, _one(self.mode).value / self.value)

    def __truediv__(self, other: Any) -> 'Scalar':
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> 'Scalar':
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> 'Scalar':
        if n < 0:
            return self.inverse() ** (-n)
        result = _one(self.mode)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ------------------------------------------------------------------
    # Comparison
    # ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        if self.mode is FieldMode.ZETA3:
            return not self.value[0] and not self.value[1]
        return not self.value

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, int):
            other = Scalar.from_rational(other, 1, self.mode)
        if not isinstance(other, Scalar) or other.mode is not self.mode:
            return False
        return self.value == other.value

    def __ne__(self, other: Any) -> bool:
        return not self == other

    def __hash__(self) -> int:
        return hash((self.mode, self.value))

    # ------------------------------------------------------------------
    # Display
    # ------------------------------------------------------------------

    def to_sympy(self) -> sympy.Expr:
        if self.mode is FieldMode.RATIONAL:
            return QQ.to_sympy(self.value)
        if self.mode is FieldMode.GENERIC_Q:
            return self.value.as_expr()
        if self.mode is FieldMode.ZETA3:
            return QQ.to_sympy(self.value[0]) + QQ.to_sympy(self.value[1]) * Q_SYMBOL
        return QQ_I.to_sympy(self.value)

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({self.mode.value}, {format_scalar(self)})"


@lru_cache(maxsize=None)
def _zero(mode: FieldMode) -> Scalar:
    return Scalar.from_rational(0, 1, mode)


@lru_cache(maxsize=None)
def _one(mode: FieldMode) -> Scalar:
    return Scalar.from_rational(1, 1, mode)


@lru_cache(maxsize=4096)
def q_power(n: int, mode: FieldMode) -> Scalar:
    """
    q^n in the given mode; negative n allowed.

    In ZETA3 mode the exponent is reduced mod 3.
    """
    if mode is FieldMode.ZETA3:
        return Scalar(mode, (_ZETA3_ONE, _ZETA3_Q, _ZETA3_Q2)[n % 3])
    if mode is FieldMode.GENERIC_Q:
        if n >= 0:
            return Scalar(mode, Q_GEN ** n)
        return Scalar(mode, QF.one / Q_GEN ** (-n))
    raise ModeMismatchError(f"q is not defined in {mode.value} mode")


@lru_cache(maxsize=4096)
def qn_sum(n: int, mode: FieldMode) -> Scalar:
    """Q_n = 1 + q^2 + ... + q^(2(n-1)), with Q_{-1} = Q_0 = 0"""
    if n < -1:
        raise IndexOutOfRangeError(f"Q_n is defined for n >= -1, got {n}")
    total = _zero(mode)
    for k in range(1, n + 1):
        total = total + q_power(2 * (k - 1), mode)
    return total


# ============================================================================
# PARSING AND FORMATTING
# ============================================================================

def scalar_from_sympy(expr: sympy.Expr, mode: FieldMode) -> Scalar:
    """Convert a commutative sympy expression (in q, or I for GAUSSIAN)"""
    expr = sympy.sympify(expr)
    if mode is FieldMode.RATIONAL:
        if not expr.is_Rational:
            raise ValueError(f"{expr} is not a rational number")
        return Scalar(mode, QQ.from_sympy(expr))
    if mode is FieldMode.GAUSSIAN:
        try:
            return Scalar(mode, QQ_I.from_sympy(sympy.expand(expr)))
        except CoercionFailed:
            raise ValueError(f"{expr} is not a Gaussian rational")

    frac = QF.from_expr(expr)
    if mode is FieldMode.GENERIC_Q:
        return Scalar(mode, frac)
    numer = _reduce_zeta3_poly(frac.numer)
    denom = _reduce_zeta3_poly(frac.denom)
    if not denom[0] and not denom[1]:
        raise DivisionByZeroError(f"{expr} has a denominator vanishing at q^3 = 1")
    return Scalar(mode, _z3_mul(numer, _z3_inv(denom)))


def parse_scalar(text: str, mode: FieldMode) -> Scalar:
    """Parse textual input such as ``2/3``, ``q^2 - 1`` or ``1 + 2*q``"""
    local_dict = {'q': Q_SYMBOL, 'i': I, 'I': I}
    try:
        expr = parse_expr(text, local_dict=local_dict, transformations=PARSE_TRANSFORMATIONS)
    except Exception as e:
        raise ParseError(f"cannot parse scalar {text!r}: {e}")
    try:
        return scalar_from_sympy(expr, mode)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise ParseError(f"{text!r} is not a {mode.value} scalar: {e}")


def format_scalar(s: Scalar) -> str:
    return str(s.to_sympy()).replace('**', '^')
