"""
Differential Forms on the Quantum Plane

The bimodule of 1-forms over the quantum plane with basis xi = dx, eta = dy
and the normal-ordering engine behind everything else:
1. OneForm / TwoForm in right-coefficient normal form
2. TensorOverA (tensor square over the algebra) and TensorOverC (over the field)
3. The differential d on functions and 1-forms
4. The braidings sigma and tau, plus general bimodule braidings
5. The central 1-forms and the closed-form commutation rules

Commutation rules used throughout:
    x xi = q^2 xi x,  x eta = q eta x + (q^2 - 1) xi y,
    y xi = q xi y,    y eta = q^2 eta y,
    eta xi = -q xi eta,  xi^2 = eta^2 = 0
"""

import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .linalg import ExactMatrix, column_nullspace
from .qalgebra import AlgElem, ExponentWindow, PowerMode, alg_mul
from .scalar import FieldMode, Scalar, q_power, qn_sum
from ..utils.errors import (
    InverseInvalidError,
    LaurentUnsupportedError,
    ModeMismatchError,
    NotBimoduleMapError,
)

logger = logging.getLogger(__name__)

XI, ETA = 0, 1
BASIS_NAMES = ('xi', 'eta')


def q_integer(n: int, mode: FieldMode) -> Scalar:
    """(q^(2n) - 1)/(q^2 - 1) for any integer n; equals qn_sum(n) for n >= 0"""
    if n >= 0:
        return qn_sum(n, mode)
    return -(q_power(2 * n, mode) * qn_sum(-n, mode))


# ============================================================================
# ONE-FORMS AND TWO-FORMS
# ============================================================================

class OneForm:
    """
    A 1-form xi*b1 + eta*b2 in right-coefficient normal form.

    Key Features:
    - The right module is free on {xi, eta}, so equality is componentwise
    - ``a * omega`` normal-orders a left coefficient, ``omega * a`` multiplies on the right
    - ``to_left`` gives the unique (a1, a2) with a1 xi + a2 eta = omega
    """

    __slots__ = ('b', 'mode', 'power_mode')

    def __init__(self, b1: AlgElem, b2: AlgElem):
        b1._check(b2)
        self.b = (b1, b2)
        self.mode = b1.mode
        self.power_mode = b1.power_mode

    @classmethod
    def zero(cls, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'OneForm':
        z = AlgElem.zero(mode, power_mode)
        return cls(z, z)

    @classmethod
    def basis(cls, j: int, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'OneForm':
        one = AlgElem.one(mode, power_mode)
        z = AlgElem.zero(mode, power_mode)
        return cls(one, z) if j == XI else cls(z, one)

    @classmethod
    def xi(cls, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'OneForm':
        return cls.basis(XI, mode, power_mode)

    @classmethod
    def eta(cls, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'OneForm':
        return cls.basis(ETA, mode, power_mode)

    @classmethod
    def from_left(cls, a1: AlgElem, a2: AlgElem) -> 'OneForm':
        """The form a1 xi + a2 eta"""
        return to_right_form(a1, a2)

    def to_left(self) -> Tuple[AlgElem, AlgElem]:
        return to_left_form(self)

    def __getitem__(self, j: int) -> AlgElem:
        return self.b[j]

    def _check(self, other: 'OneForm') -> None:
        if other.mode is not self.mode or other.power_mode is not self.power_mode:
            raise ModeMismatchError("1-forms in different modes")

    def __add__(self, other: 'OneForm') -> 'OneForm':
        self._check(other)
        return OneForm(self.b[0] + other.b[0], self.b[1] + other.b[1])

    def __neg__(self) -> 'OneForm':
        return OneForm(-self.b[0], -self.b[1])

    def __sub__(self, other: 'OneForm') -> 'OneForm':
        return self + (-other)

    def scale(self, s: Union[Scalar, int]) -> 'OneForm':
        return OneForm(self.b[0].scale(s), self.b[1].scale(s))

    def __mul__(self, other) -> 'OneForm':
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if isinstance(other, AlgElem):
            return OneForm(alg_mul(self.b[0], other), alg_mul(self.b[1], other))
        return NotImplemented

    def __rmul__(self, other) -> 'OneForm':
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if isinstance(other, AlgElem):
            return left_mul_form(other, self)
        return NotImplemented

    @property
    def is_zero(self) -> bool:
        return self.b[0].is_zero and self.b[1].is_zero

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, OneForm):
            return False
        return self.b[0] == other.b[0] and self.b[1] == other.b[1]

    def __hash__(self) -> int:
        return hash(self.b)

    def to_laurent(self) -> 'OneForm':
        return OneForm(self.b[0].to_laurent(), self.b[1].to_laurent())

    def to_polynomial(self) -> 'OneForm':
        return OneForm(self.b[0].to_polynomial(), self.b[1].to_polynomial())

    def __str__(self) -> str:
        return format_right_form(self.b, BASIS_NAMES)

    def __repr__(self) -> str:
        return f"OneForm({self})"


class TwoForm:
    """xi eta * c; the 2-forms are free of rank one on xi eta"""

    __slots__ = ('c',)

    def __init__(self, c: AlgElem):
        self.c = c

    def __add__(self, other: 'TwoForm') -> 'TwoForm':
        return TwoForm(self.c + other.c)

    def __neg__(self) -> 'TwoForm':
        return TwoForm(-self.c)

    def __sub__(self, other: 'TwoForm') -> 'TwoForm':
        return TwoForm(self.c - other.c)

    @property
    def is_zero(self) -> bool:
        return self.c.is_zero

    def __eq__(self, other) -> bool:
        return isinstance(other, TwoForm) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __str__(self) -> str:
        return format_right_form((self.c,), ('xi*eta',))


# ============================================================================
# LEFT ACTION (NORMAL ORDERING)
# ============================================================================

@lru_cache(maxsize=65536)
def _monomial_times_basis(p: int, r: int, j: int, mode: FieldMode,
                          power_mode: PowerMode) -> Tuple[AlgElem, AlgElem]:
    """
    Right-form components of x^p y^r . theta^j.

        x^p y^r xi  = xi q^(2p+r) x^p y^r
        x^p y^r eta = eta q^(2r+p) x^p y^r + xi q^(2r) (q^2 - 1) Q_p x^(p-1) y^(r+1)
    """
    zero = AlgElem.zero(mode, power_mode)
    if j == XI:
        return AlgElem.monomial(p, r, mode, power_mode, q_power(2 * p + r, mode)), zero

    b2 = AlgElem.monomial(p, r, mode, power_mode, q_power(2 * r + p, mode))
    c = q_integer(p, mode)
    if not c:
        return zero, b2
    c = c * q_power(2 * r, mode) * (q_power(2, mode) - 1)
    return AlgElem.monomial(p - 1, r + 1, mode, power_mode, c), b2


def left_mul_form(a: AlgElem, omega: OneForm) -> OneForm:
    """a . omega in right normal form"""
    a._check(omega.b[0])
    result = [AlgElem.zero(a.mode, a.power_mode), AlgElem.zero(a.mode, a.power_mode)]
    for (p, r), c in a.coeffs.items():
        for j in (XI, ETA):
            bj = omega.b[j]
            if bj.is_zero:
                continue
            d = _monomial_times_basis(p, r, j, a.mode, a.power_mode)
            for l in (XI, ETA):
                if not d[l].is_zero:
                    result[l] = result[l] + alg_mul(d[l], bj).scale(c)
    return OneForm(result[0], result[1])


def to_right_form(a1: AlgElem, a2: AlgElem) -> OneForm:
    """The right normal form of a1 xi + a2 eta"""
    return (left_mul_form(a1, OneForm.xi(a1.mode, a1.power_mode))
            + left_mul_form(a2, OneForm.eta(a2.mode, a2.power_mode)))


def to_left_form(omega: OneForm) -> Tuple[AlgElem, AlgElem]:
    """
    The unique (a1, a2) with a1 xi + a2 eta = omega.

    The eta part fixes a2 monomial by monomial; a2 eta then leaves a known
    xi part, and the remainder fixes a1.
    """
    mode, pm = omega.mode, omega.power_mode
    b1, b2 = omega.b
    a2 = AlgElem({(s, t): c * q_power(-(2 * t + s), mode) for (s, t), c in b2.coeffs.items()},
                 mode, pm)
    spill = left_mul_form(a2, OneForm.eta(mode, pm)).b[0]
    rest = b1 - spill
    a1 = AlgElem({(p, r): c * q_power(-(2 * p + r), mode) for (p, r), c in rest.coeffs.items()},
                 mode, pm)
    return a1, a2


def left_mul_twoform(a: AlgElem, w: TwoForm) -> TwoForm:
    """x^p y^r xi eta = q^(3(p+r)) xi eta x^p y^r"""
    mode = a.mode
    scaled = AlgElem({(p, r): c * q_power(3 * (p + r), mode) for (p, r), c in a.coeffs.items()},
                     mode, a.power_mode)
    return TwoForm(alg_mul(scaled, w.c))


# ============================================================================
# TENSOR SQUARE OVER THE ALGEBRA
# ============================================================================

class TensorOverA:
    """
    sum theta^j (x)_A theta^k c_jk, stored as a flat 4-tuple indexed 2j + k.

    Key Features:
    - Free right module of rank four, so equality is entrywise
    - ``a * T`` pushes a through both legs by the commutation rules
    - ``T * a`` multiplies every coefficient on the right
    """

    __slots__ = ('c', 'mode', 'power_mode')

    def __init__(self, entries: Sequence[AlgElem]):
        if len(entries) != 4:
            raise ValueError("TensorOverA needs four coefficients")
        for e in entries[1:]:
            entries[0]._check(e)
        self.c = tuple(entries)
        self.mode = entries[0].mode
        self.power_mode = entries[0].power_mode

    @classmethod
    def zero(cls, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'TensorOverA':
        z = AlgElem.zero(mode, power_mode)
        return cls((z, z, z, z))

    @classmethod
    def basis(cls, j: int, k: int, mode: FieldMode,
              power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'TensorOverA':
        z = AlgElem.zero(mode, power_mode)
        entries = [z, z, z, z]
        entries[2 * j + k] = AlgElem.one(mode, power_mode)
        return cls(entries)

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence[AlgElem]]) -> 'TensorOverA':
        return cls((grid[0][0], grid[0][1], grid[1][0], grid[1][1]))

    @classmethod
    def from_forms(cls, omega: OneForm, rho: OneForm) -> 'TensorOverA':
        """omega (x)_A rho: the right coefficients of omega pass into rho"""
        omega._check(rho)
        entries = []
        for j in (XI, ETA):
            moved = left_mul_form(omega.b[j], rho)
            entries.extend(moved.b)
        return cls(entries)

    def entry(self, j: int, k: int) -> AlgElem:
        return self.c[2 * j + k]

    def __add__(self, other: 'TensorOverA') -> 'TensorOverA':
        return TensorOverA([a + b for a, b in zip(self.c, other.c)])

    def __neg__(self) -> 'TensorOverA':
        return TensorOverA([-a for a in self.c])

    def __sub__(self, other: 'TensorOverA') -> 'TensorOverA':
        return TensorOverA([a - b for a, b in zip(self.c, other.c)])

    def scale(self, s: Union[Scalar, int]) -> 'TensorOverA':
        return TensorOverA([a.scale(s) for a in self.c])

    def __mul__(self, other) -> 'TensorOverA':
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if isinstance(other, AlgElem):
            return TensorOverA([alg_mul(a, other) for a in self.c])
        return NotImplemented

    def __rmul__(self, other) -> 'TensorOverA':
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if isinstance(other, AlgElem):
            return left_mul_tensorA(other, self)
        return NotImplemented

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for a in self.c)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorOverA) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def to_laurent(self) -> 'TensorOverA':
        return TensorOverA([a.to_laurent() for a in self.c])

    def to_polynomial(self) -> 'TensorOverA':
        return TensorOverA([a.to_polynomial() for a in self.c])

    def __str__(self) -> str:
        names = tuple(f'{BASIS_NAMES[j]} oxA {BASIS_NAMES[k]}' for j in (0, 1) for k in (0, 1))
        return format_right_form(self.c, names)

    def __repr__(self) -> str:
        return f"TensorOverA({self})"


@lru_cache(maxsize=65536)
def _monomial_times_basis_tensor(p: int, r: int, j: int, k: int, mode: FieldMode,
                                 power_mode: PowerMode) -> TensorOverA:
    """x^p y^r . theta^j (x)_A theta^k in right normal form"""
    first = _monomial_times_basis(p, r, j, mode, power_mode)
    rho = OneForm.basis(k, mode, power_mode)
    return TensorOverA.from_forms(OneForm(first[0], first[1]), rho)


def left_mul_tensorA(a: AlgElem, T: TensorOverA) -> TensorOverA:
    """a . T in right normal form"""
    a._check(T.c[0])
    result = TensorOverA.zero(a.mode, a.power_mode)
    for (p, r), coeff in a.coeffs.items():
        for j in (XI, ETA):
            for k in (XI, ETA):
                c = T.entry(j, k)
                if c.is_zero:
                    continue
                image = _monomial_times_basis_tensor(p, r, j, k, a.mode, a.power_mode)
                result = result + (image * c).scale(coeff)
    return result


# ============================================================================
# TENSOR SQUARE OVER THE FIELD
# ============================================================================

SlotKey = Tuple[int, int, int, int, int, int]


class TensorOverC:
    """
    sum (x^p y^r) theta^i (x) theta^j (x^s y^t) over the ground field.

    Stored flat as {(i, j, p, r, s, t): scalar}; since the 1-forms are free
    on both sides this is a faithful normal form.
    """

    __slots__ = ('terms', 'mode', 'power_mode')

    def __init__(self, terms: Dict[SlotKey, Scalar], mode: FieldMode,
                 power_mode: PowerMode = PowerMode.POLYNOMIAL):
        self.mode = mode
        self.power_mode = power_mode
        self.terms = {k: v for k, v in terms.items() if v}

    @classmethod
    def zero(cls, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'TensorOverC':
        return cls({}, mode, power_mode)

    @classmethod
    def simple(cls, a: AlgElem, i: int, j: int, b: AlgElem) -> 'TensorOverC':
        """a theta^i (x) theta^j b"""
        a._check(b)
        terms: Dict[SlotKey, Scalar] = {}
        for (p, r), c in a.coeffs.items():
            for (s, t), d in b.coeffs.items():
                key = (i, j, p, r, s, t)
                total = terms[key] + c * d if key in terms else c * d
                terms[key] = total
        return cls(terms, a.mode, a.power_mode)

    @classmethod
    def from_forms(cls, omega: OneForm, rho: OneForm) -> 'TensorOverC':
        """omega (x) rho: omega is read in left form, rho in right form"""
        omega._check(rho)
        left = to_left_form(omega)
        result = cls.zero(omega.mode, omega.power_mode)
        for i in (XI, ETA):
            for j in (XI, ETA):
                if left[i].is_zero or rho.b[j].is_zero:
                    continue
                result = result + cls.simple(left[i], i, j, rho.b[j])
        return result

    def slot(self, i: int, j: int) -> Dict[Tuple[Tuple[int, int], Tuple[int, int]], Scalar]:
        return {((k[2], k[3]), (k[4], k[5])): v for k, v in self.terms.items() if k[:2] == (i, j)}

    def __add__(self, other: 'TensorOverC') -> 'TensorOverC':
        if other.mode is not self.mode:
            raise ModeMismatchError("tensors in different modes")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return TensorOverC(terms, self.mode, self.power_mode)

    def __neg__(self) -> 'TensorOverC':
        return TensorOverC({k: -v for k, v in self.terms.items()}, self.mode, self.power_mode)

    def __sub__(self, other: 'TensorOverC') -> 'TensorOverC':
        return self + (-other)

    def scale(self, s: Union[Scalar, int]) -> 'TensorOverC':
        if isinstance(s, int):
            s = Scalar.from_rational(s, 1, self.mode)
        return TensorOverC({k: v * s for k, v in self.terms.items()}, self.mode, self.power_mode)

    def outer_left(self, a: AlgElem) -> 'TensorOverC':
        """a . T, multiplying the outer left coefficients"""
        result = TensorOverC.zero(self.mode, self.power_mode)
        for (i, j, p, r, s, t), v in self.terms.items():
            left = alg_mul(a, AlgElem.monomial(p, r, self.mode, self.power_mode))
            right = AlgElem.monomial(s, t, self.mode, self.power_mode, v)
            result = result + TensorOverC.simple(left, i, j, right)
        return result

    def outer_right(self, b: AlgElem) -> 'TensorOverC':
        """T . b, multiplying the outer right coefficients"""
        result = TensorOverC.zero(self.mode, self.power_mode)
        for (i, j, p, r, s, t), v in self.terms.items():
            left = AlgElem.monomial(p, r, self.mode, self.power_mode, v)
            right = alg_mul(AlgElem.monomial(s, t, self.mode, self.power_mode), b)
            result = result + TensorOverC.simple(left, i, j, right)
        return result

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorOverC) and self.mode is other.mode and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        pieces = []
        for (i, j, p, r, s, t), v in sorted(self.terms.items()):
            left = AlgElem.monomial(p, r, self.mode, self.power_mode, v)
            right = AlgElem.monomial(s, t, self.mode, self.power_mode)
            pieces.append(f"({left})*{BASIS_NAMES[i]} ox {BASIS_NAMES[j]}*({right})")
        return ' + '.join(pieces)


def project_to_A(T: TensorOverC) -> TensorOverA:
    """Image of T under the quotient map onto the tensor square over the algebra"""
    result = TensorOverA.zero(T.mode, T.power_mode)
    for (i, j, p, r, s, t), v in T.terms.items():
        image = _monomial_times_basis_tensor(p, r, i, j, T.mode, T.power_mode)
        right = AlgElem.monomial(s, t, T.mode, T.power_mode, v)
        result = result + image * right
    return result


# ============================================================================
# BRAIDINGS
# ============================================================================

def _scalar_image(mode: FieldMode, power_mode: PowerMode,
                  entries: Sequence[Scalar]) -> TensorOverA:
    return TensorOverA([AlgElem.constant(e, mode, power_mode) for e in entries])


def _tau_images(mode: FieldMode) -> Dict[Tuple[int, int], Dict[Tuple[int, int], Scalar]]:
    q = q_power(1, mode)
    one = Scalar.one(mode)
    return {
        (XI, XI): {(XI, XI): one},
        (XI, ETA): {(ETA, XI): q},
        (ETA, XI): {(XI, ETA): q, (ETA, XI): -(q_power(2, mode) - one)},
        (ETA, ETA): {(ETA, ETA): one},
    }


def tau(T: TensorOverC) -> TensorOverC:
    """Apply tau slot-wise, keeping the outer coefficients"""
    images = _tau_images(T.mode)
    terms: Dict[SlotKey, Scalar] = {}
    for (i, j, p, r, s, t), v in T.terms.items():
        for (k, l), c in images[(i, j)].items():
            key = (k, l, p, r, s, t)
            terms[key] = terms[key] + v * c if key in terms else v * c
    return TensorOverC(terms, T.mode, T.power_mode)


class Braiding:
    """
    A right-linear map of the tensor square over the algebra, given by the
    images of the four basis tensors.

    Images may carry algebra coefficients. ``apply`` is right-linear by
    construction; ``check_bimodule`` tests left linearity on the generators.
    """

    def __init__(self, images: Dict[Tuple[int, int], TensorOverA], name: str = 'braiding'):
        self.images = dict(images)
        self.name = name
        first = self.images[(XI, XI)]
        self.mode = first.mode
        self.power_mode = first.power_mode

    def image(self, j: int, k: int) -> TensorOverA:
        return self.images[(j, k)]

    def apply(self, T: TensorOverA) -> TensorOverA:
        result = TensorOverA.zero(T.mode, T.power_mode)
        for j in (XI, ETA):
            for k in (XI, ETA):
                c = T.entry(j, k)
                if not c.is_zero:
                    result = result + _match_tensor(self.images[(j, k)], T.power_mode) * c
        return result

    __call__ = apply

    def scaled(self, c: Union[Scalar, int]) -> 'Braiding':
        return Braiding({key: img.scale(c) for key, img in self.images.items()},
                        name=f'{c}*{self.name}')

    def is_scalar(self) -> bool:
        return all(e.is_constant() for img in self.images.values() for e in img.c)

    def matrix(self) -> ExactMatrix:
        """4x4 matrix of a scalar braiding; column 2j+k is the image of theta^j theta^k"""
        if not self.is_scalar():
            raise InverseInvalidError(f"{self.name} has non-scalar images")
        rows = [dict() for _ in range(4)]
        for (j, k), img in self.images.items():
            for row, e in enumerate(img.c):
                c = e.coeff(0, 0)
                if c:
                    rows[row][2 * j + k] = c
        return ExactMatrix(rows, 4, self.mode)

    def inverse(self) -> 'Braiding':
        """Inverse of a braiding with scalar images"""
        M = self.matrix()
        columns = {}
        for col in range(4):
            target = [Scalar.one(self.mode) if row == col else Scalar.zero(self.mode) for row in range(4)]
            v = M.solve(target)
            if v is None:
                raise InverseInvalidError(f"{self.name} is not invertible")
            columns[divmod(col, 2)] = _scalar_image(self.mode, self.power_mode, v)
        return Braiding(columns, name=f'{self.name}^-1')

    def compose(self, other: 'Braiding') -> 'Braiding':
        """self o other"""
        return Braiding({key: self.apply(img) for key, img in other.images.items()},
                        name=f'{self.name}.{other.name}')

    def check_bimodule(self) -> Tuple[bool, List[str]]:
        """Left linearity on the generators: B(a e_jk) = a B(e_jk) for a in {x, y}"""
        issues = []
        gens = {'x': AlgElem.x(self.mode, self.power_mode), 'y': AlgElem.y(self.mode, self.power_mode)}
        for (j, k), img in sorted(self.images.items()):
            basis = TensorOverA.basis(j, k, self.mode, self.power_mode)
            for name, a in gens.items():
                if self.apply(left_mul_tensorA(a, basis)) != left_mul_tensorA(a, img):
                    issues.append(f"{self.name} is not left linear for {name} on "
                                  f"{BASIS_NAMES[j]} oxA {BASIS_NAMES[k]}")
        return len(issues) == 0, issues

    def require_bimodule(self) -> 'Braiding':
        ok, issues = self.check_bimodule()
        if not ok:
            raise NotBimoduleMapError('; '.join(issues))
        return self

    def __eq__(self, other) -> bool:
        return isinstance(other, Braiding) and self.images == other.images

    def __str__(self) -> str:
        return '\n'.join(f"{BASIS_NAMES[j]} oxA {BASIS_NAMES[k]} -> {img}"
                         for (j, k), img in sorted(self.images.items()))


def _match_tensor(T: TensorOverA, power_mode: PowerMode) -> TensorOverA:
    if T.power_mode is power_mode:
        return T
    return T.to_laurent() if power_mode is PowerMode.LAURENT else T.to_polynomial()


def standard_sigma(mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> Braiding:
    """
    xi xi   -> q^-2 xi xi
    xi eta  -> q^-1 eta xi
    eta xi  -> q^-1 xi eta - (1 - q^-2) eta xi
    eta eta -> q^-2 eta eta
    """
    zero = Scalar.zero(mode)
    one = Scalar.one(mode)
    qm1, qm2 = q_power(-1, mode), q_power(-2, mode)
    images = {
        (XI, XI): _scalar_image(mode, power_mode, [qm2, zero, zero, zero]),
        (XI, ETA): _scalar_image(mode, power_mode, [zero, zero, qm1, zero]),
        (ETA, XI): _scalar_image(mode, power_mode, [zero, qm1, -(one - qm2), zero]),
        (ETA, ETA): _scalar_image(mode, power_mode, [zero, zero, zero, qm2]),
    }
    return Braiding(images, name='sigma')


def sigma(T: TensorOverA) -> TensorOverA:
    """The standard braiding applied as a right-module map"""
    return standard_sigma(T.mode, T.power_mode).apply(T)


# ============================================================================
# DIFFERENTIAL
# ============================================================================

@lru_cache(maxsize=65536)
def _d_monomial(p: int, r: int, mode: FieldMode) -> OneForm:
    """d(x^p y^r) = xi Q_p x^(p-1) y^r + Q_r (x^p . eta) y^(r-1)"""
    pm = PowerMode.POLYNOMIAL
    result = OneForm.zero(mode, pm)
    qp = qn_sum(p, mode)
    if qp:
        result = result + OneForm(AlgElem.monomial(p - 1, r, mode, pm, qp), AlgElem.zero(mode, pm))
    qr = qn_sum(r, mode)
    if qr:
        moved = _monomial_times_basis(p, 0, ETA, mode, pm)
        tail = AlgElem.monomial(0, r - 1, mode, pm, qr)
        result = result + OneForm(alg_mul(moved[0], tail), alg_mul(moved[1], tail))
    return result


def differential(a: AlgElem) -> OneForm:
    """d(a); linear and satisfies d(ab) = d(a) b + a d(b)"""
    if a.power_mode is PowerMode.LAURENT:
        raise LaurentUnsupportedError("d is only defined on polynomial elements")
    result = OneForm.zero(a.mode)
    for (p, r), c in a.coeffs.items():
        result = result + _d_monomial(p, r, a.mode).scale(c)
    return result


def differential_form(omega: OneForm) -> TwoForm:
    """
    d(xi b1 + eta b2) = -xi d(b1) - eta d(b2) = xi eta (-c2(b1) + q c1(b2))
    where d(b) = xi c1(b) + eta c2(b).
    """
    if omega.power_mode is PowerMode.LAURENT:
        raise LaurentUnsupportedError("d is only defined on polynomial forms")
    d1 = differential(omega.b[0])
    d2 = differential(omega.b[1])
    return TwoForm(-d1.b[1] + d2.b[0].scale(q_power(1, omega.mode)))


# ============================================================================
# CENTRAL ONE-FORMS
# ============================================================================

def center_oneforms(degree_bound: int, mode: FieldMode,
                    window: Optional[ExponentWindow] = None) -> List[OneForm]:
    """
    Basis of {zeta : x zeta = zeta x, y zeta = zeta y} with left coefficients
    supported in the window.
    """
    window = window or ExponentWindow.square(degree_bound)
    pm = window.power_mode
    unknowns = [(i, p, r) for i in (XI, ETA) for (p, r) in window.monomials()]
    gens = {'x': AlgElem.x(mode, pm), 'y': AlgElem.y(mode, pm)}

    columns = []
    images = []
    for i, p, r in unknowns:
        zeta = OneForm(*_monomial_times_basis(p, r, i, mode, pm))
        images.append(zeta)
        column = {}
        for name, g in gens.items():
            diff = left_mul_form(g, zeta) - zeta * g
            for comp in (XI, ETA):
                for mono, c in diff.b[comp].coeffs.items():
                    column[(name, comp, mono)] = c
        columns.append(column)

    basis = []
    for vector in column_nullspace(columns, mode):
        form = OneForm.zero(mode, pm)
        for c, image in zip(vector, images):
            if c:
                form = form + image.scale(c)
        basis.append(form)
    logger.debug("central 1-forms in %s (%s): dimension %d", window, mode.value, len(basis))
    return basis


def central_generators(mode: FieldMode) -> Tuple[OneForm, OneForm]:
    """
    Generators of the central 1-forms over the center (cube-root mode):
    zeta1 = xy xi and zeta2 = -x y^3 xi + x^2 y^2 eta, given in left form.
    """
    pm = PowerMode.POLYNOMIAL
    zero = AlgElem.zero(mode, pm)
    zeta1 = to_right_form(AlgElem.monomial(1, 1, mode, pm), zero)
    zeta2 = to_right_form(AlgElem.monomial(1, 3, mode, pm, -1), AlgElem.monomial(2, 2, mode, pm))
    return zeta1, zeta2


# ============================================================================
# CLOSED-FORM COMMUTATION RULES
# ============================================================================

APPENDIX_FORMULAS = (
    ('x', 'xi'), ('x', 'eta'), ('y', 'xi'), ('y', 'eta'),
    ('x', 'xi', 'xi'), ('x', 'xi', 'eta'), ('x', 'eta', 'xi'), ('x', 'eta', 'eta'),
    ('y', 'xi', 'xi'), ('y', 'xi', 'eta'), ('y', 'eta', 'xi'), ('y', 'eta', 'eta'),
)


def appendix_formula(name: Tuple[str, ...], n: int, mode: FieldMode) -> Union[OneForm, TensorOverA]:
    """
    Closed-form right normal form of x^n or y^n acting on a basis form or a
    basis tensor, written out term by term rather than through the engine.
    """
    pm = PowerMode.POLYNOMIAL
    q = lambda k: q_power(k, mode)  # noqa: E731
    one = Scalar.one(mode)
    qq = q(2) - one
    Qn = qn_sum(n, mode)
    Qn1 = qn_sum(n - 1, mode) if n >= 1 else Scalar.zero(mode)

    def mono(p: int, r: int, c: Scalar) -> AlgElem:
        if not c:
            return AlgElem.zero(mode, pm)
        return AlgElem.monomial(p, r, mode, pm, c)

    z = AlgElem.zero(mode, pm)
    gen, *legs = name
    if gen == 'x':
        if legs == ['xi']:
            return OneForm(mono(n, 0, q(2 * n)), z)
        if legs == ['eta']:
            return OneForm(mono(n - 1, 1, qq * Qn), mono(n, 0, q(n)))
        if legs == ['xi', 'xi']:
            return TensorOverA([mono(n, 0, q(4 * n)), z, z, z])
        if legs == ['xi', 'eta']:
            return TensorOverA([mono(n - 1, 1, q(2 * n) * qq * Qn), mono(n, 0, q(3 * n)), z, z])
        if legs == ['eta', 'xi']:
            return TensorOverA([mono(n - 1, 1, q(2 * n - 1) * qq * Qn), z, mono(n, 0, q(3 * n)), z])
        if legs == ['eta', 'eta']:
            return TensorOverA([
                mono(n - 2, 2, q(2) * qq * qq * Qn * Qn1),
                mono(n - 1, 1, q(n + 1) * qq * Qn),
                mono(n - 1, 1, q(n) * qq * Qn),
                mono(n, 0, q(2 * n)),
            ])
    if gen == 'y':
        if legs == ['xi']:
            return OneForm(mono(0, n, q(n)), z)
        if legs == ['eta']:
            return OneForm(z, mono(0, n, q(2 * n)))
        weights = {('xi', 'xi'): 2, ('xi', 'eta'): 3, ('eta', 'xi'): 3, ('eta', 'eta'): 4}
        key = tuple(legs)
        if key in weights:
            entries = [z, z, z, z]
            entries[2 * BASIS_NAMES.index(key[0]) + BASIS_NAMES.index(key[1])] = \
                mono(0, n, q(weights[key] * n))
            return TensorOverA(entries)
    raise KeyError(f"unknown commutation formula {name}")


# ============================================================================
# FORMATTING
# ============================================================================

def format_right_form(coeffs: Sequence[AlgElem], names: Sequence[str]) -> str:
    pieces = []
    for c, name in zip(coeffs, names):
        if c.is_zero:
            continue
        pieces.append(f"{name}*({c})")
    return ' + '.join(pieces) if pieces else '0'
