"""
Quantum Plane Coordinate Algebra

Elements of the algebra generated by x, y with xy = q yx, kept in the
normal-ordered basis x^p y^r. Provides:
1. AlgElem with exact normal-ordered products
2. Exponent windows for bounded solvers (polynomial or Laurent)
3. Center computation by exact nullspace, centrality and x-ideal predicates
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .linalg import column_nullspace
from .scalar import FieldMode, Scalar, q_power
from ..utils.errors import (
    IndexOutOfRangeError,
    ModeMismatchError,
    NegativeExponentError,
    WindowEmptyError,
)

logger = logging.getLogger(__name__)

Monomial = Tuple[int, int]


class PowerMode(Enum):
    POLYNOMIAL = 'polynomial'
    LAURENT = 'laurent'


class AlgElem:
    """
    Normal-ordered quantum-plane element sum c_pr x^p y^r.

    Key Features:
    - Zero coefficients are never stored, so equality is dict equality
    - Product uses (x^p y^r)(x^s y^t) = q^(-rs) x^(p+s) y^(r+t)
    - POLYNOMIAL mode rejects negative exponents; LAURENT admits them
    """

    __slots__ = ('coeffs', 'mode', 'power_mode')

    def __init__(self, coeffs: Optional[Dict[Monomial, Scalar]] = None,
                 mode: FieldMode = FieldMode.GENERIC_Q,
                 power_mode: PowerMode = PowerMode.POLYNOMIAL):
        self.mode = mode
        self.power_mode = power_mode
        self.coeffs: Dict[Monomial, Scalar] = {}
        for (p, r), c in (coeffs or {}).items():
            if power_mode is PowerMode.POLYNOMIAL and (p < 0 or r < 0):
                raise NegativeExponentError(f"x^{p} y^{r} in POLYNOMIAL mode")
            if c.mode is not mode:
                raise ModeMismatchError(f"coefficient in {c.mode.value} mode, element is {mode.value}")
            if c:
                self.coeffs[(p, r)] = c

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'AlgElem':
        return cls({}, mode, power_mode)

    @classmethod
    def monomial(cls, p: int, r: int, mode: FieldMode,
                 power_mode: PowerMode = PowerMode.POLYNOMIAL,
                 coeff: Union[Scalar, int] = 1) -> 'AlgElem':
        if isinstance(coeff, int):
            coeff = Scalar.from_rational(coeff, 1, mode)
        return cls({(p, r): coeff}, mode, power_mode)

    @classmethod
    def constant(cls, c: Union[Scalar, int], mode: FieldMode,
                 power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'AlgElem':
        return cls.monomial(0, 0, mode, power_mode, c)

    @classmethod
    def one(cls, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'AlgElem':
        return cls.monomial(0, 0, mode, power_mode)

    @classmethod
    def x(cls, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'AlgElem':
        return cls.monomial(1, 0, mode, power_mode)

    @classmethod
    def y(cls, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'AlgElem':
        return cls.monomial(0, 1, mode, power_mode)

    def like(self, coeffs: Dict[Monomial, Scalar]) -> 'AlgElem':
        """New element in the same modes"""
        return AlgElem(coeffs, self.mode, self.power_mode)

    def to_laurent(self) -> 'AlgElem':
        if self.power_mode is PowerMode.LAURENT:
            return self
        return AlgElem(self.coeffs, self.mode, PowerMode.LAURENT)

    def to_polynomial(self) -> 'AlgElem':
        """Raises NegativeExponentError if any exponent is negative"""
        if self.power_mode is PowerMode.POLYNOMIAL:
            return self
        return AlgElem(self.coeffs, self.mode, PowerMode.POLYNOMIAL)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _check(self, other: 'AlgElem') -> None:
        if other.mode is not self.mode or other.power_mode is not self.power_mode:
            raise ModeMismatchError(
                f"Cannot combine {self.mode.value}/{self.power_mode.value} with "
                f"{other.mode.value}/{other.power_mode.value}"
            )

    def _lift(self, other) -> Optional['AlgElem']:
        if isinstance(other, AlgElem):
            self._check(other)
            return other
        if isinstance(other, (int, Scalar)):
            return AlgElem.constant(other, self.mode, self.power_mode)
        return None

    def __add__(self, other) -> 'AlgElem':
        other = self._lift(other)
        if other is None:
            return NotImplemented
        coeffs = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            total = coeffs[mono] + c if mono in coeffs else c
            if total:
                coeffs[mono] = total
            else:
                coeffs.pop(mono, None)
        return self.like(coeffs)

    __radd__ = __add__

    def __neg__(self) -> 'AlgElem':
        return self.like({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other) -> 'AlgElem':
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'AlgElem':
        return (-self) + other

    def scale(self, s: Union[Scalar, int]) -> 'AlgElem':
        if isinstance(s, int):
            s = Scalar.from_rational(s, 1, self.mode)
        if not s:
            return self.like({})
        return self.like({m: c * s for m, c in self.coeffs.items()})

    def __mul__(self, other) -> 'AlgElem':
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if not isinstance(other, AlgElem):
            return NotImplemented
        return alg_mul(self, other)

    def __rmul__(self, other) -> 'AlgElem':
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> 'AlgElem':
        if n < 0:
            raise IndexOutOfRangeError("use monomial_inverse for negative powers")
        result = AlgElem.one(self.mode, self.power_mode)
        for _ in range(n):
            result = alg_mul(result, self)
        return result

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Scalar)):
            other = AlgElem.constant(other, self.mode, self.power_mode)
        if not isinstance(other, AlgElem):
            return False
        return self.mode is other.mode and self.coeffs == other.coeffs

    def __ne__(self, other) -> bool:
        return not self == other

    def __hash__(self) -> int:
        return hash((self.mode, frozenset(self.coeffs.items())))

    def terms(self) -> List[Tuple[Monomial, Scalar]]:
        """Terms sorted lexicographically by (p, r)"""
        return sorted(self.coeffs.items())

    def coeff(self, p: int, r: int) -> Scalar:
        return self.coeffs.get((p, r), Scalar.zero(self.mode))

    def degree_box(self) -> Optional[Tuple[int, int, int, int]]:
        """(pmin, pmax, rmin, rmax) over the support, None for zero"""
        if not self.coeffs:
            return None
        ps = [m[0] for m in self.coeffs]
        rs = [m[1] for m in self.coeffs]
        return min(ps), max(ps), min(rs), max(rs)

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self.coeffs)

    def __str__(self) -> str:
        return format_alg(self)

    def __repr__(self) -> str:
        return f"AlgElem({format_alg(self)!r}, {self.mode.value}, {self.power_mode.value})"


# ============================================================================
# PRODUCTS
# ============================================================================

def alg_mul(a: AlgElem, b: AlgElem) -> AlgElem:
    """Normal-ordered product a*b"""
    a._check(b)
    coeffs: Dict[Monomial, Scalar] = {}
    for (p, r), c in a.coeffs.items():
        for (s, t), d in b.coeffs.items():
            mono = (p + s, r + t)
            term = c * d
            if r and s:
                term = term * q_power(-r * s, a.mode)
            total = coeffs[mono] + term if mono in coeffs else term
            if total:
                coeffs[mono] = total
            else:
                coeffs.pop(mono, None)
    return AlgElem(coeffs, a.mode, a.power_mode)


def monomial_inverse(p: int, r: int, mode: FieldMode) -> AlgElem:
    """(x^p y^r)^(-1) = q^(-pr) x^(-p) y^(-r), a LAURENT element"""
    return AlgElem.monomial(-p, -r, mode, PowerMode.LAURENT, q_power(-p * r, mode))


def commutator(a: AlgElem, b: AlgElem) -> AlgElem:
    return alg_mul(a, b) - alg_mul(b, a)


# ============================================================================
# WINDOWS
# ============================================================================

@dataclass(frozen=True)
class ExponentWindow:
    """Per-variable exponent bounds [pmin, pmax] x [rmin, rmax]"""
    pmin: int
    pmax: int
    rmin: int
    rmax: int

    @classmethod
    def square(cls, bound: int) -> 'ExponentWindow':
        return cls(0, bound, 0, bound)

    @classmethod
    def from_list(cls, values: Iterable[int]) -> 'ExponentWindow':
        pmin, pmax, rmin, rmax = values
        return cls(int(pmin), int(pmax), int(rmin), int(rmax))

    @property
    def is_empty(self) -> bool:
        return self.pmin > self.pmax or self.rmin > self.rmax

    @property
    def power_mode(self) -> PowerMode:
        if self.pmin < 0 or self.rmin < 0:
            return PowerMode.LAURENT
        return PowerMode.POLYNOMIAL

    def monomials(self) -> Iterator[Monomial]:
        if self.is_empty:
            raise WindowEmptyError(f"empty exponent window {self}")
        for p in range(self.pmin, self.pmax + 1):
            for r in range(self.rmin, self.rmax + 1):
                yield (p, r)

    def __contains__(self, mono: Monomial) -> bool:
        return self.pmin <= mono[0] <= self.pmax and self.rmin <= mono[1] <= self.rmax


# ============================================================================
# CENTER AND PREDICATES
# ============================================================================

def is_central(a: AlgElem) -> bool:
    """True iff a commutes with both generators x and y"""
    x = AlgElem.x(a.mode, a.power_mode)
    y = AlgElem.y(a.mode, a.power_mode)
    return commutator(a, x).is_zero and commutator(a, y).is_zero


def center_basis(degree_bound: int, mode: FieldMode,
                 window: Optional[ExponentWindow] = None) -> List[AlgElem]:
    """
    Linear basis of the center among elements supported in the window.

    Each unknown monomial x^p y^r contributes its commutators with x and y
    as a column: [x^p y^r, x] = (q^(-r) - 1) x^(p+1) y^r and
    [x^p y^r, y] = (1 - q^(-p)) x^p y^(r+1).
    """
    if degree_bound < 0 and window is None:
        raise IndexOutOfRangeError(f"degree bound must be >= 0, got {degree_bound}")
    window = window or ExponentWindow.square(degree_bound)
    monos = list(window.monomials())
    one = Scalar.one(mode)

    columns = []
    for p, r in monos:
        columns.append({
            ('x', p + 1, r): q_power(-r, mode) - one,
            ('y', p, r + 1): one - q_power(-p, mode),
        })

    basis = []
    for vector in column_nullspace(columns, mode):
        coeffs = {m: c for m, c in zip(monos, vector) if c}
        basis.append(AlgElem(coeffs, mode, window.power_mode))
    logger.debug("center basis in %s (%s): dimension %d", window, mode.value, len(basis))
    return basis


def in_left_ideal_x(a: AlgElem, power: int) -> bool:
    """True iff every monomial of a has x-exponent >= power, i.e. a lies in x^power A"""
    if power < 1:
        raise IndexOutOfRangeError(f"power must be >= 1, got {power}")
    return all(p >= power for p, _ in a.coeffs)


# ============================================================================
# FORMATTING
# ============================================================================

def _format_monomial(p: int, r: int) -> str:
    parts = []
    if p:
        parts.append('x' if p == 1 else f'x^{p}')
    if r:
        parts.append('y' if r == 1 else f'y^{r}')
    return '*'.join(parts)


def format_alg(a: AlgElem) -> str:
    """Normal-ordered text, monomials sorted lexicographically"""
    if a.is_zero:
        return '0'
    pieces = []
    for (p, r), c in a.terms():
        mono = _format_monomial(p, r)
        cs = str(c)
        if not mono:
            pieces.append(cs if not ('+' in cs or ' - ' in cs) else f'({cs})')
        elif c == 1:
            pieces.append(mono)
        elif c == -1:
            pieces.append(f'-{mono}')
        elif '+' in cs or ' - ' in cs or '/' in cs:
            pieces.append(f'({cs})*{mono}')
        else:
            pieces.append(f'{cs}*{mono}')
    text = ' + '.join(pieces)
    return text.replace('+ -', '- ')


def as_power_mode(a: AlgElem, power_mode: PowerMode) -> AlgElem:
    """Reinterpret a in the given power mode (LAURENT -> POLYNOMIAL may raise)"""
    if a.power_mode is power_mode:
        return a
    return a.to_laurent() if power_mode is PowerMode.LAURENT else a.to_polynomial()
