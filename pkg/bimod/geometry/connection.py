"""
Left and Right Connections on the Quantum Plane 1-Forms

Connections are given by Christoffel symbols, nabla theta^i = theta^j (x)_A theta^k Gamma^i_jk,
and extended to all 1-forms by the Leibniz rules. This module covers:
1. nabla_left / nabla_right on arbitrary 1-forms
2. Sigma-compatibility over the center and the admissibility clauses
3. The right connection reconstructed from an admissible left one
4. The whole-bimodule condition, its closed-form families and a constraint solver
5. Frame and bimodule-automorphism gauge transformations
"""

import logging
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from ..algebra.linalg import affine_solve, column_nullspace
from ..algebra.oneforms import (
    ETA,
    XI,
    Braiding,
    OneForm,
    TensorOverA,
    central_generators,
    differential,
    left_mul_form,
    left_mul_tensorA,
    standard_sigma,
    to_left_form,
)
from ..algebra.qalgebra import (
    AlgElem,
    ExponentWindow,
    PowerMode,
    alg_mul,
    format_alg,
    in_left_ideal_x,
    is_central,
    monomial_inverse,
)
from ..algebra.scalar import FieldMode, Scalar, q_power
from ..utils.errors import (
    InverseInvalidError,
    ModeMismatchError,
    NegativeExponentError,
    NotAdmissibleError,
    NotBimoduleMapError,
    NotCentralError,
)

logger = logging.getLogger(__name__)

Index = Tuple[int, int, int]
INDICES: Tuple[Index, ...] = tuple((i, j, k) for i in (XI, ETA) for j in (XI, ETA) for k in (XI, ETA))


class Side(Enum):
    LEFT = 'left'
    RIGHT = 'right'


def christoffel_label(index: Index) -> str:
    """(0, 0, 1) -> 'G^1_12'"""
    i, j, k = index
    return f"G^{i + 1}_{j + 1}{k + 1}"


def parse_christoffel_label(label: str) -> Index:
    label = label.strip()
    if len(label) != 6 or not label.startswith('G^') or label[3] != '_':
        raise ValueError(f"bad Christoffel label {label!r}")
    digits = (label[2], label[4], label[5])
    if any(d not in '12' for d in digits):
        raise ValueError(f"bad Christoffel label {label!r}")
    return tuple(int(d) - 1 for d in digits)


# ============================================================================
# CHRISTOFFEL SYMBOLS
# ============================================================================

class Christoffel:
    """
    The eight symbols Gamma^i_jk of a left or right connection.

    Key Features:
    - Missing entries are zero; all entries share one mode
    - ``image(i)`` is nabla theta^i as a TensorOverA
    - Vector-space operations are used by the linear solvers
    """

    __slots__ = ('gamma', 'side', 'mode', 'power_mode')

    def __init__(self, gamma: Dict[Index, AlgElem], side: Side = Side.LEFT,
                 mode: Optional[FieldMode] = None,
                 power_mode: PowerMode = PowerMode.POLYNOMIAL):
        if mode is None:
            if not gamma:
                raise ValueError("mode is required for an empty Christoffel")
            mode = next(iter(gamma.values())).mode
        self.mode = mode
        self.power_mode = power_mode
        self.side = side
        self.gamma: Dict[Index, AlgElem] = {}
        for index, value in gamma.items():
            if index not in INDICES:
                raise IndexError(f"Christoffel index {index} out of range")
            if value.mode is not mode or value.power_mode is not power_mode:
                raise ModeMismatchError(f"{christoffel_label(index)} has a different mode")
            if not value.is_zero:
                self.gamma[index] = value

    @classmethod
    def zero(cls, mode: FieldMode, side: Side = Side.LEFT) -> 'Christoffel':
        return cls({}, side, mode)

    def __getitem__(self, index: Index) -> AlgElem:
        return self.gamma.get(index, AlgElem.zero(self.mode, self.power_mode))

    def image(self, i: int) -> TensorOverA:
        """nabla theta^i = sum theta^j (x)_A theta^k Gamma^i_jk"""
        return TensorOverA([self[(i, j, k)] for j in (XI, ETA) for k in (XI, ETA)])

    def with_side(self, side: Side) -> 'Christoffel':
        return Christoffel(self.gamma, side, self.mode, self.power_mode)

    def __add__(self, other: 'Christoffel') -> 'Christoffel':
        return Christoffel({idx: self[idx] + other[idx] for idx in INDICES}, self.side, self.mode)

    def __sub__(self, other: 'Christoffel') -> 'Christoffel':
        return Christoffel({idx: self[idx] - other[idx] for idx in INDICES}, self.side, self.mode)

    def scale(self, s: Union[Scalar, int]) -> 'Christoffel':
        return Christoffel({idx: v.scale(s) for idx, v in self.gamma.items()}, self.side, self.mode)

    @property
    def is_zero(self) -> bool:
        return not self.gamma

    def __eq__(self, other) -> bool:
        return (isinstance(other, Christoffel) and self.mode is other.mode
                and self.gamma == other.gamma)

    def __hash__(self) -> int:
        return hash(frozenset(self.gamma.items()))

    def to_dict(self) -> Dict[str, str]:
        return {christoffel_label(idx): format_alg(self[idx]) for idx in INDICES}

    def __str__(self) -> str:
        return ', '.join(f"{k}={v}" for k, v in self.to_dict().items() if v != '0') or '0'

    def __repr__(self) -> str:
        return f"Christoffel({self.side.value}: {self})"


def christoffel_from_images(images: Sequence[TensorOverA], side: Side) -> Christoffel:
    """Inverse of ``image``: read Gamma^i_jk off nabla theta^i"""
    gamma = {(i, j, k): images[i].entry(j, k) for (i, j, k) in INDICES}
    return Christoffel(gamma, side, images[0].mode)


# ============================================================================
# CONNECTIONS
# ============================================================================

def _require_side(gamma: Christoffel, side: Side) -> None:
    if gamma.side is not side:
        raise ValueError(f"expected a {side.value} connection, got {gamma.side.value}")


def nabla_left(gamma: Christoffel, zeta: OneForm) -> TensorOverA:
    """nabla^L(a_i theta^i) = d(a_i) (x)_A theta^i + a_i nabla^L theta^i"""
    _require_side(gamma, Side.LEFT)
    result = TensorOverA.zero(zeta.mode)
    for i, a in enumerate(to_left_form(zeta)):
        if a.is_zero:
            continue
        result = result + TensorOverA.from_forms(differential(a), OneForm.basis(i, zeta.mode))
        result = result + left_mul_tensorA(a, gamma.image(i))
    return result


def nabla_right(gamma_tilde: Christoffel, zeta: OneForm) -> TensorOverA:
    """nabla^R(theta^i b_i) = (nabla^R theta^i) b_i + theta^i (x)_A d(b_i)"""
    _require_side(gamma_tilde, Side.RIGHT)
    result = TensorOverA.zero(zeta.mode)
    for i, b in enumerate(zeta.b):
        if b.is_zero:
            continue
        result = result + gamma_tilde.image(i) * b
        result = result + TensorOverA.from_forms(OneForm.basis(i, zeta.mode), differential(b))
    return result


def sigma_compat_residuals(gamma: Christoffel, gamma_tilde: Christoffel,
                           braiding: Optional[Braiding] = None) -> List[TensorOverA]:
    """
    nabla^L zeta - sigma(nabla^R zeta) on the two generators of the central
    1-forms. Empty at generic q, where there are no central 1-forms.
    """
    if gamma.mode is not FieldMode.ZETA3:
        return []
    braiding = braiding or standard_sigma(gamma.mode)
    return [nabla_left(gamma, zeta) - braiding.apply(nabla_right(gamma_tilde, zeta))
            for zeta in central_generators(gamma.mode)]


def is_sigma_compatible(gamma: Christoffel, gamma_tilde: Christoffel,
                        braiding: Optional[Braiding] = None) -> bool:
    return all(r.is_zero for r in sigma_compat_residuals(gamma, gamma_tilde, braiding))


# ============================================================================
# ADMISSIBILITY AND THE RIGHT CONNECTION FROM A LEFT ONE
# ============================================================================

def _combined_clause(gamma: Christoffel) -> AlgElem:
    """(q-1) G^2_12 + (1-q^2) G^2_21 + 3 q^2 y x^-1 G^2_22, in Laurent form"""
    mode = gamma.mode
    q = q_power(1, mode)
    y_over_x = alg_mul(AlgElem.y(mode, PowerMode.LAURENT), monomial_inverse(1, 0, mode))
    total = gamma[(ETA, XI, ETA)].to_laurent().scale(q - 1)
    total = total + gamma[(ETA, ETA, XI)].to_laurent().scale(1 - q_power(2, mode))
    total = total + alg_mul(y_over_x, gamma[(ETA, ETA, ETA)].to_laurent()).scale(q_power(2, mode) * 3)
    return total


def admissibility_clauses(gamma: Christoffel) -> List[Tuple[str, bool]]:
    """Each divisibility clause with its verdict, clauses 0 to 4 in order"""
    return [
        ('G^1_12 in xA', in_left_ideal_x(gamma[(XI, XI, ETA)], 1)),
        ('G^1_21 in xA', in_left_ideal_x(gamma[(XI, ETA, XI)], 1)),
        ('G^1_22 in x^2A', in_left_ideal_x(gamma[(XI, ETA, ETA)], 2)),
        ('G^2_22 in xA', in_left_ideal_x(gamma[(ETA, ETA, ETA)], 1)),
        ('(q-1)G^2_12 + (1-q^2)G^2_21 + 3q^2 y x^-1 G^2_22 in xA',
         in_left_ideal_x(_combined_clause(gamma), 1)),
    ]


def check_admissible(gamma: Christoffel) -> Tuple[bool, List[str]]:
    issues = [f"fails {name}" for name, ok in admissibility_clauses(gamma) if not ok]
    return len(issues) == 0, issues


def is_admissible(gamma: Christoffel) -> bool:
    return check_admissible(gamma)[0]


def _invert_monomial(a: AlgElem) -> AlgElem:
    if len(a.coeffs) != 1:
        raise InverseInvalidError(f"{a} is not a monomial")
    (p, r), c = next(iter(a.coeffs.items()))
    return monomial_inverse(p, r, a.mode).scale(c.inverse())


def solve_right_from_left(gamma: Christoffel) -> Christoffel:
    """
    The unique right connection sigma-compatible with an admissible left one.

    Writing zeta = theta^i c_i for the central generators, compatibility reads
    sigma^-1(nabla^L zeta) - theta^i (x)_A d(c_i) = theta^j (x)_A theta^k sum_i Gamma~^i_jk c_i.
    With c = (xy, 0) and (-q x y^3, x^2 y^2) this is triangular and is
    divided out on the right in Laurent space.

    Raises:
        NotAdmissibleError: if any divisibility clause fails
    """
    _require_side(gamma, Side.LEFT)
    if gamma.mode is not FieldMode.ZETA3:
        raise ModeMismatchError("the right-from-left solution needs q^3 = 1")
    ok, issues = check_admissible(gamma)
    if not ok:
        raise NotAdmissibleError('; '.join(issues), failed_clauses=issues)

    mode = gamma.mode
    sigma_inv = standard_sigma(mode).inverse()
    zeta1, zeta2 = central_generators(mode)
    rhs = []
    for zeta in (zeta1, zeta2):
        T = sigma_inv.apply(nabla_left(gamma, zeta))
        for i in (XI, ETA):
            if not zeta.b[i].is_zero:
                T = T - TensorOverA.from_forms(OneForm.basis(i, mode), differential(zeta.b[i]))
        rhs.append(T.to_laurent())

    first = rhs[0] * _invert_monomial(zeta1.b[XI].to_laurent())
    second = (rhs[1] - first * zeta2.b[XI].to_laurent()) * _invert_monomial(zeta2.b[ETA].to_laurent())
    try:
        images = [first.to_polynomial(), second.to_polynomial()]
    except NegativeExponentError as e:
        raise NotAdmissibleError(f"right connection is not polynomial: {e}")
    result = christoffel_from_images(images, Side.RIGHT)
    logger.debug("right connection from left: %s", result)
    return result


# ============================================================================
# WHOLE-BIMODULE CONDITION
# ============================================================================

WHOLE_BIMODULE_ORDER = ((XI, 'x'), (XI, 'y'), (ETA, 'x'), (ETA, 'y'))


def whole_bimodule_residuals(gamma: Christoffel, braiding: Optional[Braiding] = None) -> List[TensorOverA]:
    """
    nabla^L(zeta a) - (nabla^L zeta) a - sigma(zeta (x)_A da) for
    (zeta, a) in (xi, x), (xi, y), (eta, x), (eta, y).
    """
    _require_side(gamma, Side.LEFT)
    mode = gamma.mode
    braiding = braiding or standard_sigma(mode)
    gens = {'x': AlgElem.x(mode), 'y': AlgElem.y(mode)}
    residuals = []
    for j, name in WHOLE_BIMODULE_ORDER:
        zeta = OneForm.basis(j, mode)
        a = gens[name]
        lhs = nabla_left(gamma, zeta * a)
        rhs = nabla_left(gamma, zeta) * a + braiding.apply(TensorOverA.from_forms(zeta, differential(a)))
        residuals.append(lhs - rhs)
    return residuals


def satisfies_whole_bimodule(gamma: Christoffel, braiding: Optional[Braiding] = None) -> bool:
    return all(r.is_zero for r in whole_bimodule_residuals(gamma, braiding))


def whole_bimodule_family_generic(nu: Scalar) -> Christoffel:
    """The one-parameter family of left connections satisfying the whole-bimodule condition at generic q"""
    mode = nu.mode
    q = lambda k: q_power(k, mode)  # noqa: E731

    def m(p: int, r: int, c: Scalar) -> AlgElem:
        return AlgElem.monomial(p, r, mode, PowerMode.POLYNOMIAL, nu * c)

    gamma = {
        (XI, XI, XI): m(1, 2, q(1)),
        (XI, XI, ETA): m(2, 1, -q(3)),
        (XI, ETA, XI): m(2, 1, -q(2)),
        (XI, ETA, ETA): m(3, 0, q(5)),
        (ETA, XI, XI): m(0, 3, q(3)),
        (ETA, XI, ETA): m(1, 2, -q(4)),
        (ETA, ETA, XI): m(1, 2, -q(3)),
        (ETA, ETA, ETA): m(2, 1, q(5)),
    }
    return Christoffel(gamma, Side.LEFT, mode)


def whole_bimodule_family_zeta3(f: Dict[Index, AlgElem], mode: FieldMode = FieldMode.ZETA3) -> Christoffel:
    """
    Left connections satisfying the whole-bimodule condition at q^3 = 1,
    parametrized by eight central elements f^i_jk (missing keys are zero).
    """
    pm = PowerMode.POLYNOMIAL
    zero = AlgElem.zero(mode, pm)
    for index, value in f.items():
        if not is_central(value):
            raise NotCentralError(f"f{christoffel_label(index)[1:]} = {value} is not central")

    def fv(i: int, j: int, k: int) -> AlgElem:
        return f.get((i - 1, j - 1, k - 1), zero)

    q = lambda k: q_power(k, mode)  # noqa: E731

    def m(p: int, r: int) -> AlgElem:
        return AlgElem.monomial(p, r, mode, pm)

    x, x2, x3 = m(1, 0), m(2, 0), m(3, 0)
    y, y2, y3, y4 = m(0, 1), m(0, 2), m(0, 3), m(0, 4)

    gamma = {
        (XI, XI, XI): x * (-(y3 * (fv(1, 2, 1) + fv(1, 1, 2).scale(q(1)))) + y * fv(1, 1, 1)
                           - (y2 * fv(1, 2, 2)).scale(q(1))),
        (XI, XI, ETA): x2 * (y * fv(1, 2, 2) + y2 * fv(1, 1, 2)),
        (XI, ETA, XI): x2 * ((y * fv(1, 2, 2)).scale(q(2)) + y2 * fv(1, 2, 1)),
        (XI, ETA, ETA): (x3 * fv(1, 2, 2)).scale(-q(2)),
        (ETA, XI, XI): (fv(2, 1, 1)
                        + (y4 * (fv(2, 2, 2) - fv(1, 1, 2) - fv(1, 2, 1).scale(q(2)))).scale(q(1))
                        + (y2 * (fv(1, 1, 1) - fv(2, 2, 1) - fv(2, 1, 2).scale(q(1)))).scale(q(1))),
        (ETA, XI, ETA): x * ((y3 * (fv(1, 1, 2) - fv(2, 2, 2))).scale(q(2)) + y * fv(2, 1, 2)
                            + (y2 * fv(1, 2, 2)).scale(q(1))),
        (ETA, ETA, XI): x * ((y3 * (fv(1, 2, 1).scale(q(1)) - fv(2, 2, 2))).scale(q(1))
                            + y * fv(2, 2, 1) + y2 * fv(1, 2, 2)),
        (ETA, ETA, ETA): x2 * ((y * fv(1, 2, 2)).scale(-q(2)) + y2 * fv(2, 2, 2)),
    }
    return Christoffel(gamma, Side.LEFT, mode)


def _unit_christoffel(index: Index, p: int, r: int, mode: FieldMode, side: Side) -> Christoffel:
    return Christoffel({index: AlgElem.monomial(p, r, mode)}, side, mode)


def _flatten(tensors: Sequence[TensorOverA]) -> Dict:
    out = {}
    for n, T in enumerate(tensors):
        for e, c in enumerate(T.c):
            for mono, v in c.coeffs.items():
                out[(n, e, mono)] = v
    return out


def _difference(a: Sequence[TensorOverA], b: Sequence[TensorOverA]) -> List[TensorOverA]:
    return [s - t for s, t in zip(a, b)]


def whole_bimodule_solve(window: ExponentWindow, mode: FieldMode,
                         braiding: Optional[Braiding] = None) -> Tuple[Optional[Christoffel], List[Christoffel]]:
    """
    All left connections with symbols in the window that satisfy the
    whole-bimodule condition, as (particular solution or None, homogeneous basis).
    """
    monos = list(window.monomials())
    unknowns = [(index, p, r) for index in INDICES for (p, r) in monos]
    base = whole_bimodule_residuals(Christoffel.zero(mode), braiding)
    columns = []
    for index, p, r in unknowns:
        image = whole_bimodule_residuals(_unit_christoffel(index, p, r, mode, Side.LEFT), braiding)
        columns.append(_flatten(_difference(image, base)))
    particular, homogeneous = affine_solve(columns, _flatten(base), mode)

    def build(vector: Sequence[Scalar]) -> Christoffel:
        gamma: Dict[Index, AlgElem] = {}
        for (index, p, r), c in zip(unknowns, vector):
            if c:
                term = AlgElem.monomial(p, r, mode, coeff=c)
                gamma[index] = gamma[index] + term if index in gamma else term
        return Christoffel(gamma, Side.LEFT, mode)

    logger.info("whole-bimodule solve in %s: %s, kernel dimension %d", window,
                'solvable' if particular is not None else 'no solution', len(homogeneous))
    return (build(particular) if particular is not None else None), [build(v) for v in homogeneous]


def sigma_compat_solve(window: ExponentWindow, mode: FieldMode,
                       braiding: Optional[Braiding] = None) -> Tuple[Optional[Tuple[Christoffel, Christoffel]], int]:
    """
    Pairs (Gamma, Gamma~) with symbols in the window solving sigma-compatibility
    over the center for the given braiding.

    Returns:
        Tuple of (particular pair or None, kernel dimension)
    """
    monos = list(window.monomials())
    unknowns = [(side, index, p, r) for side in (Side.LEFT, Side.RIGHT)
                for index in INDICES for (p, r) in monos]
    zero_left, zero_right = Christoffel.zero(mode, Side.LEFT), Christoffel.zero(mode, Side.RIGHT)
    base = sigma_compat_residuals(zero_left, zero_right, braiding)
    columns = []
    for side, index, p, r in unknowns:
        unit = _unit_christoffel(index, p, r, mode, side)
        if side is Side.LEFT:
            image = sigma_compat_residuals(unit, zero_right, braiding)
        else:
            image = sigma_compat_residuals(zero_left, unit, braiding)
        columns.append(_flatten(_difference(image, base)))
    particular, homogeneous = affine_solve(columns, _flatten(base), mode)
    logger.info("sigma-compatibility solve in %s: %s", window,
                'solvable' if particular is not None else 'no solution')
    if particular is None:
        return None, len(homogeneous)

    parts: Dict[Side, Dict[Index, AlgElem]] = {Side.LEFT: {}, Side.RIGHT: {}}
    for (side, index, p, r), c in zip(unknowns, particular):
        if c:
            term = AlgElem.monomial(p, r, mode, coeff=c)
            parts[side][index] = parts[side][index] + term if index in parts[side] else term
    pair = (Christoffel(parts[Side.LEFT], Side.LEFT, mode), Christoffel(parts[Side.RIGHT], Side.RIGHT, mode))
    return pair, len(homogeneous)


# ============================================================================
# FRAME GAUGE TRANSFORMATIONS
# ============================================================================

Grid = Sequence[Sequence[AlgElem]]


def _grid_mul(A: Grid, B: Grid) -> List[List[AlgElem]]:
    return [[alg_mul(A[i][0], B[0][k]) + alg_mul(A[i][1], B[1][k]) for k in (0, 1)] for i in (0, 1)]


class GaugeMatrix:
    """
    A frame change theta^i -> U^i_j theta^j with a declared exact inverse.

    The inverse is checked on construction in both orders (products over
    the algebra, respecting noncommutativity).
    """

    def __init__(self, U: Grid, U_inv: Grid):
        self.U = [list(row) for row in U]
        self.U_inv = [list(row) for row in U_inv]
        self.mode = self.U[0][0].mode
        ok, issues = self.check()
        if not ok:
            raise InverseInvalidError('; '.join(issues))

    @classmethod
    def identity(cls, mode: FieldMode) -> 'GaugeMatrix':
        one, zero = AlgElem.one(mode), AlgElem.zero(mode)
        grid = [[one, zero], [zero, one]]
        return cls(grid, grid)

    @classmethod
    def unitriangular(cls, a: AlgElem) -> 'GaugeMatrix':
        """U = (1 a; 0 1), U^-1 = (1 -a; 0 1)"""
        one, zero = AlgElem.one(a.mode), AlgElem.zero(a.mode)
        return cls([[one, a], [zero, one]], [[one, -a], [zero, one]])

    def inverse(self) -> 'GaugeMatrix':
        return GaugeMatrix(self.U_inv, self.U)

    def check(self) -> Tuple[bool, List[str]]:
        issues = []
        one, zero = AlgElem.one(self.mode), AlgElem.zero(self.mode)
        identity = [[one, zero], [zero, one]]
        if _grid_mul(self.U, self.U_inv) != identity:
            issues.append("U * U_inv is not the identity")
        if _grid_mul(self.U_inv, self.U) != identity:
            issues.append("U_inv * U is not the identity")
        return len(issues) == 0, issues

    def to_dict(self) -> Dict[str, str]:
        out = {f"U{i + 1}{j + 1}": format_alg(self.U[i][j]) for i in (0, 1) for j in (0, 1)}
        out.update({f"Uinv{i + 1}{j + 1}": format_alg(self.U_inv[i][j]) for i in (0, 1) for j in (0, 1)})
        return out


def connection_matrix(gamma: Christoffel) -> List[List[OneForm]]:
    """N with nabla^L theta^i = N^i_l (x)_A theta^l"""
    mode = gamma.mode
    N = [[OneForm.zero(mode) for _ in (0, 1)] for _ in (0, 1)]
    for (i, j, k), value in gamma.gamma.items():
        moved = to_left_form(OneForm.basis(k, mode) * value)
        for l in (XI, ETA):
            if not moved[l].is_zero:
                N[i][l] = N[i][l] + OneForm.basis(j, mode) * moved[l]
    return N


def christoffel_from_matrix(N: Sequence[Sequence[OneForm]], side: Side = Side.LEFT) -> Christoffel:
    """Inverse of ``connection_matrix``"""
    mode = N[0][0].mode
    gamma: Dict[Index, AlgElem] = {}
    for i in (XI, ETA):
        for l in (XI, ETA):
            for j in (XI, ETA):
                c = N[i][l].b[j]
                if c.is_zero:
                    continue
                moved = left_mul_form(c, OneForm.basis(l, mode))
                for k in (XI, ETA):
                    if not moved.b[k].is_zero:
                        key = (i, j, k)
                        gamma[key] = gamma[key] + moved.b[k] if key in gamma else moved.b[k]
    return Christoffel(gamma, side, mode)


def gauge_transform_frame(U: GaugeMatrix, gamma: Christoffel) -> Christoffel:
    """N -> dU U^-1 + U N U^-1, read back as Christoffel symbols"""
    _require_side(gamma, Side.LEFT)
    mode = gamma.mode
    N = connection_matrix(gamma)
    new = [[OneForm.zero(mode) for _ in (0, 1)] for _ in (0, 1)]
    for i in (0, 1):
        for l in (0, 1):
            total = OneForm.zero(mode)
            for j in (0, 1):
                if not U.U[i][j].is_zero and not U.U_inv[j][l].is_zero:
                    total = total + differential(U.U[i][j]) * U.U_inv[j][l]
                for k in (0, 1):
                    if U.U[i][j].is_zero or U.U_inv[k][l].is_zero or N[j][k].is_zero:
                        continue
                    total = total + left_mul_form(U.U[i][j], N[j][k]) * U.U_inv[k][l]
            new[i][l] = total
    return christoffel_from_matrix(new, Side.LEFT)


# ============================================================================
# BIMODULE AUTOMORPHISMS
# ============================================================================

class BimoduleMap:
    """
    A right-linear map of the 1-forms fixed by f(xi) and f(eta).

    ``check_bimodule`` tests left linearity on the generators x and y;
    right linearity holds by construction.
    """

    def __init__(self, images: Sequence[OneForm], name: str = 'f'):
        if len(images) != 2:
            raise ValueError("a bimodule map needs the images of xi and eta")
        self.images = tuple(images)
        self.mode = images[0].mode
        self.name = name

    @classmethod
    def identity(cls, mode: FieldMode) -> 'BimoduleMap':
        return cls((OneForm.xi(mode), OneForm.eta(mode)), name='id')

    @classmethod
    def scalar(cls, c: Scalar) -> 'BimoduleMap':
        return cls((OneForm.xi(c.mode).scale(c), OneForm.eta(c.mode).scale(c)), name=f'{c}*id')

    def apply(self, omega: OneForm) -> OneForm:
        result = OneForm.zero(self.mode)
        for k in (XI, ETA):
            if not omega.b[k].is_zero:
                result = result + self.images[k] * omega.b[k]
        return result

    __call__ = apply

    def compose(self, other: 'BimoduleMap') -> 'BimoduleMap':
        """self o other"""
        return BimoduleMap([self.apply(img) for img in other.images], name=f'{self.name}.{other.name}')

    def check_bimodule(self) -> Tuple[bool, List[str]]:
        issues = []
        gens = {'x': AlgElem.x(self.mode), 'y': AlgElem.y(self.mode)}
        for i in (XI, ETA):
            basis = OneForm.basis(i, self.mode)
            for name, a in gens.items():
                if self.apply(left_mul_form(a, basis)) != left_mul_form(a, self.images[i]):
                    issues.append(f"{self.name}({name}*theta^{i + 1}) != {name}*{self.name}(theta^{i + 1})")
        return len(issues) == 0, issues

    def require_bimodule(self) -> 'BimoduleMap':
        ok, issues = self.check_bimodule()
        if not ok:
            raise NotBimoduleMapError('; '.join(issues))
        return self

    def is_identity(self) -> bool:
        return self.images == BimoduleMap.identity(self.mode).images

    def __eq__(self, other) -> bool:
        return isinstance(other, BimoduleMap) and self.images == other.images

    def __str__(self) -> str:
        return f"{self.name}(xi) = {self.images[0]}; {self.name}(eta) = {self.images[1]}"


def check_inverse_pair(f: BimoduleMap, f_inv: BimoduleMap) -> Tuple[bool, List[str]]:
    issues = []
    if not f_inv.compose(f).is_identity():
        issues.append(f"{f_inv.name} o {f.name} is not the identity")
    if not f.compose(f_inv).is_identity():
        issues.append(f"{f.name} o {f_inv.name} is not the identity")
    return len(issues) == 0, issues


def shear_automorphism(z: AlgElem, lam: Scalar) -> Tuple[BimoduleMap, BimoduleMap]:
    """
    The automorphism xi -> xi, eta -> eta + lam xi x^2 y^2 z at q^3 = 1
    (z central), together with its inverse.
    """
    if not is_central(z):
        raise NotCentralError(f"{z} is not central")
    mode = z.mode
    shift = OneForm.xi(mode) * alg_mul(AlgElem.monomial(2, 2, mode), z).scale(lam)
    f = BimoduleMap((OneForm.xi(mode), OneForm.eta(mode) + shift), name='f')
    f_inv = BimoduleMap((OneForm.xi(mode), OneForm.eta(mode) - shift), name='f^-1')
    return f, f_inv


def bimodule_automorphism_basis(degree_bound: int, mode: FieldMode) -> List[BimoduleMap]:
    """
    Basis of the bimodule endomorphisms f(theta^i) = theta^j m^i_j with
    m^i_j supported in [0, bound]^2. Which combinations are invertible is
    left to the caller.
    """
    monos = list(ExponentWindow.square(degree_bound).monomials())
    unknowns = [(i, j, p, r) for i in (XI, ETA) for j in (XI, ETA) for (p, r) in monos]
    gens = {'x': AlgElem.x(mode), 'y': AlgElem.y(mode)}

    def unit_map(i: int, j: int, p: int, r: int) -> BimoduleMap:
        images = [OneForm.zero(mode), OneForm.zero(mode)]
        images[i] = OneForm.basis(j, mode) * AlgElem.monomial(p, r, mode)
        return BimoduleMap(images)

    columns = []
    for i, j, p, r in unknowns:
        f = unit_map(i, j, p, r)
        column = {}
        for src in (XI, ETA):
            basis = OneForm.basis(src, mode)
            for name, a in gens.items():
                diff = f.apply(left_mul_form(a, basis)) - left_mul_form(a, f.images[src])
                for comp in (XI, ETA):
                    for mono, c in diff.b[comp].coeffs.items():
                        column[(src, name, comp, mono)] = c
        columns.append(column)

    basis = []
    for n, vector in enumerate(column_nullspace(columns, mode)):
        images = [OneForm.zero(mode), OneForm.zero(mode)]
        for (i, j, p, r), c in zip(unknowns, vector):
            if c:
                images[i] = images[i] + OneForm.basis(j, mode) * AlgElem.monomial(p, r, mode, coeff=c)
        basis.append(BimoduleMap(images, name=f'f{n + 1}'))
    logger.info("bimodule endomorphisms up to degree %d (%s): dimension %d",
                degree_bound, mode.value, len(basis))
    return basis


def transform_braiding(f: BimoduleMap, f_inv: BimoduleMap, braiding: Braiding) -> Braiding:
    """sigma' = (id (x) f^-1) o sigma o (f (x) id)"""
    mode = f.mode
    images = {}
    for j in (XI, ETA):
        for k in (XI, ETA):
            T = braiding.apply(TensorOverA.from_forms(f.images[j], OneForm.basis(k, mode)))
            images[(j, k)] = _apply_second_leg(f_inv, T)
    return Braiding(images, name=f"{braiding.name}'")


def _apply_second_leg(g: BimoduleMap, T: TensorOverA) -> TensorOverA:
    """(id (x) g)(sum theta^j (x)_A theta^k c_jk)"""
    mode = T.mode
    result = TensorOverA.zero(mode)
    for j in (XI, ETA):
        for k in (XI, ETA):
            c = T.entry(j, k)
            if not c.is_zero:
                result = result + TensorOverA.from_forms(OneForm.basis(j, mode), g.images[k] * c)
    return result


def _apply_first_leg(g: BimoduleMap, T: TensorOverA) -> TensorOverA:
    """(g (x) id)(sum theta^j (x)_A theta^k c_jk)"""
    mode = T.mode
    result = TensorOverA.zero(mode)
    for j in (XI, ETA):
        for k in (XI, ETA):
            c = T.entry(j, k)
            if not c.is_zero:
                result = result + TensorOverA.from_forms(g.images[j], OneForm.basis(k, mode) * c)
    return result


def gauge_transform_bimodule(f: BimoduleMap, f_inv: BimoduleMap,
                             triple: Tuple[Christoffel, Christoffel, Braiding]
                             ) -> Tuple[Christoffel, Christoffel, Braiding]:
    """
    nabla^L' = (id (x) f^-1) nabla^L f, nabla^R' = (f^-1 (x) id) nabla^R f,
    sigma' = (id (x) f^-1) sigma (f (x) id).

    Raises:
        NotBimoduleMapError: if f or f_inv is not left linear
        InverseInvalidError: if f_inv is not the inverse of f
    """
    gamma, gamma_tilde, braiding = triple
    f.require_bimodule()
    f_inv.require_bimodule()
    ok, issues = check_inverse_pair(f, f_inv)
    if not ok:
        raise InverseInvalidError('; '.join(issues))

    left_images = [_apply_second_leg(f_inv, nabla_left(gamma, f.images[i])) for i in (XI, ETA)]
    right_images = [_apply_first_leg(f_inv, nabla_right(gamma_tilde, f.images[i])) for i in (XI, ETA)]
    return (christoffel_from_images(left_images, Side.LEFT),
            christoffel_from_images(right_images, Side.RIGHT),
            transform_braiding(f, f_inv, braiding))


def evaluator(gamma: Christoffel) -> Callable[[OneForm], TensorOverA]:
    """nabla_left or nabla_right bound to a set of symbols"""
    if gamma.side is Side.LEFT:
        return lambda zeta: nabla_left(gamma, zeta)
    return lambda zeta: nabla_right(gamma, zeta)
