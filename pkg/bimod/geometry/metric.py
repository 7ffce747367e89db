"""
Metrics on the Quantum Plane 1-Forms

A metric is a map g from the tensor square over the field to the algebra
that is bilinear over the algebra on the outside: g(a zeta, rho b) = a g(zeta, rho) b.
It is fixed by the 2x2 grid G_ij = g(theta^i, theta^j). This module provides:
1. Evaluation on arbitrary tensors and the tau-symmetry predicate
2. The eight middle-linearity residuals and an exact solver for their kernel
3. The closed-form middle-linear families (Laurent generic-q and cube-root)
"""

import logging
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple, Union

from ..algebra.linalg import ExactMatrix, column_nullspace
from ..algebra.oneforms import ETA, XI, OneForm, TensorOverC, left_mul_form, tau
from ..algebra.qalgebra import (
    AlgElem,
    ExponentWindow,
    PowerMode,
    alg_mul,
    as_power_mode,
    format_alg,
    is_central,
)
from ..algebra.scalar import FieldMode, Scalar, q_power
from ..utils.errors import ModeMismatchError, NotCentralError

logger = logging.getLogger(__name__)

# Order of the middle-linearity equations: (generator, i, j)
RESIDUAL_ORDER: Tuple[Tuple[str, int, int], ...] = (
    ('x', XI, XI), ('y', XI, XI),
    ('x', XI, ETA), ('y', XI, ETA),
    ('x', ETA, XI), ('y', ETA, XI),
    ('x', ETA, ETA), ('y', ETA, ETA),
)

ENTRY_LABELS = ('G11', 'G12', 'G21', 'G22')


class Metric:
    """
    The grid G_ij = g(theta^i, theta^j), stored flat at index 2i + j.

    Tau-symmetry and middle-linearity are predicates on a Metric, not
    invariants of the type.
    """

    __slots__ = ('G', 'mode', 'power_mode')

    def __init__(self, entries: Sequence[AlgElem]):
        if len(entries) != 4:
            raise ValueError("a metric needs four entries")
        for e in entries[1:]:
            entries[0]._check(e)
        self.G = tuple(entries)
        self.mode = entries[0].mode
        self.power_mode = entries[0].power_mode

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence[AlgElem]]) -> 'Metric':
        return cls((grid[0][0], grid[0][1], grid[1][0], grid[1][1]))

    @classmethod
    def zero(cls, mode: FieldMode, power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'Metric':
        z = AlgElem.zero(mode, power_mode)
        return cls((z, z, z, z))

    @classmethod
    def constant(cls, values: Sequence[Union[Scalar, int]], mode: FieldMode,
                 power_mode: PowerMode = PowerMode.POLYNOMIAL) -> 'Metric':
        return cls([AlgElem.constant(v, mode, power_mode) for v in values])

    def entry(self, i: int, j: int) -> AlgElem:
        return self.G[2 * i + j]

    def __add__(self, other: 'Metric') -> 'Metric':
        return Metric([a + b for a, b in zip(self.G, other.G)])

    def __sub__(self, other: 'Metric') -> 'Metric':
        return Metric([a - b for a, b in zip(self.G, other.G)])

    def scale(self, s: Union[Scalar, int]) -> 'Metric':
        return Metric([a.scale(s) for a in self.G])

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for a in self.G)

    def __eq__(self, other) -> bool:
        return isinstance(other, Metric) and self.G == other.G

    def __hash__(self) -> int:
        return hash(self.G)

    def to_dict(self) -> Dict[str, str]:
        return {label: format_alg(e) for label, e in zip(ENTRY_LABELS, self.G)}

    def __str__(self) -> str:
        return ', '.join(f"{k}={v}" for k, v in self.to_dict().items())

    def __repr__(self) -> str:
        return f"Metric({self})"


# ============================================================================
# EVALUATION
# ============================================================================

def eval_metric(g: Metric, T: TensorOverC) -> AlgElem:
    """sum over slots of a G_ij b"""
    if T.mode is not g.mode:
        raise ModeMismatchError("metric and tensor in different modes")
    pm = g.power_mode
    result = AlgElem.zero(g.mode, pm)
    for (i, j, p, r, s, t), v in T.terms.items():
        left = AlgElem.monomial(p, r, g.mode, pm, v)
        right = AlgElem.monomial(s, t, g.mode, pm)
        result = result + alg_mul(alg_mul(left, g.entry(i, j)), right)
    return result


def is_tau_symmetric(g: Metric) -> bool:
    """g o tau = g on the four basis tensors (equivalently G12 = q G21)"""
    one = AlgElem.one(g.mode, g.power_mode)
    for i in (XI, ETA):
        for j in (XI, ETA):
            e = TensorOverC.simple(one, i, j, one)
            if eval_metric(g, tau(e)) != eval_metric(g, e):
                return False
    return True


# ============================================================================
# MIDDLE LINEARITY
# ============================================================================

@lru_cache(maxsize=None)
def _transport_table(mode: FieldMode, power_mode: PowerMode) -> Dict[Tuple[str, int, int], List]:
    """
    For each equation (a, i, j): write a theta^i = theta^k b_k and
    b_k theta^j = theta^l d_kl; store the pairs (k, l, d_kl).
    """
    gens = {'x': AlgElem.x(mode, power_mode), 'y': AlgElem.y(mode, power_mode)}
    table = {}
    for name, i, j in RESIDUAL_ORDER:
        moved = left_mul_form(gens[name], OneForm.basis(i, mode, power_mode))
        pairs = []
        for k in (XI, ETA):
            if moved.b[k].is_zero:
                continue
            transported = left_mul_form(moved.b[k], OneForm.basis(j, mode, power_mode))
            for l in (XI, ETA):
                if not transported.b[l].is_zero:
                    pairs.append((k, l, transported.b[l]))
        table[(name, i, j)] = pairs
    return table


def middle_linearity_residuals(g: Metric) -> List[AlgElem]:
    """
    The eight residuals a G_ij - sum_k,l G_kl d_kl in the order
    (x,xi xi), (y,xi xi), (x,xi eta), (y,xi eta), (x,eta xi), (y,eta xi),
    (x,eta eta), (y,eta eta). All vanish iff g descends to the tensor
    square over the algebra.
    """
    pm = g.power_mode
    gens = {'x': AlgElem.x(g.mode, pm), 'y': AlgElem.y(g.mode, pm)}
    table = _transport_table(g.mode, pm)
    residuals = []
    for name, i, j in RESIDUAL_ORDER:
        r = alg_mul(gens[name], g.entry(i, j))
        for k, l, d in table[(name, i, j)]:
            G_kl = g.entry(k, l)
            if not G_kl.is_zero:
                r = r - alg_mul(G_kl, d)
        residuals.append(r)
    return residuals


def is_middle_linear(g: Metric) -> bool:
    return all(r.is_zero for r in middle_linearity_residuals(g))


def _unit_metric(index: int, p: int, r: int, mode: FieldMode, pm: PowerMode) -> Metric:
    z = AlgElem.zero(mode, pm)
    entries = [z, z, z, z]
    entries[index] = AlgElem.monomial(p, r, mode, pm)
    return Metric(entries)


def solve_middle_linear(window: ExponentWindow, mode: FieldMode,
                        tau_symmetric: bool = False) -> List[Metric]:
    """
    Basis of the middle-linear metrics with entries supported in the window.

    Args:
        window: exponent window for all four entries
        mode: GENERIC_Q or ZETA3
        tau_symmetric: also impose G12 = q G21

    Returns:
        List of Metric, one per free column of the reduced system
    """
    pm = window.power_mode
    monos = list(window.monomials())
    unknowns = [(index, p, r) for index in range(4) for (p, r) in monos]
    q = q_power(1, mode)

    columns = []
    for index, p, r in unknowns:
        column = {}
        residuals = middle_linearity_residuals(_unit_metric(index, p, r, mode, pm))
        for n, res in enumerate(residuals):
            for mono, c in res.coeffs.items():
                column[(n, mono)] = c
        if tau_symmetric:
            if index == 1:
                column[('tau', p, r)] = Scalar.one(mode)
            elif index == 2:
                column[('tau', p, r)] = -q
        columns.append(column)

    basis = []
    for vector in column_nullspace(columns, mode):
        entries = [dict(), dict(), dict(), dict()]
        for (index, p, r), c in zip(unknowns, vector):
            if c:
                entries[index][(p, r)] = c
        basis.append(Metric([AlgElem(e, mode, pm) for e in entries]))
    logger.info("middle-linear metrics in %s (%s%s): dimension %d", window, mode.value,
                ', tau-symmetric' if tau_symmetric else '', len(basis))
    return basis


# ============================================================================
# CLOSED-FORM FAMILIES
# ============================================================================

def ml_family_zeta3(Z: AlgElem, Y: AlgElem, W: AlgElem, U: AlgElem) -> Metric:
    """
    Middle-linear metrics at q^3 = 1, for central Z, Y, W, U:

        G11 = x^3 Z x y
        G12 = q x^3 Z y^2 + x^3 Y
        G21 = x^3 Z y^2 + x^3 W
        G22 = U x^2 y^2 + (q Y + W) x^2 y + q^2 Z x^2 y^3

    Tau-symmetric iff Y = q W.
    """
    for name, param in (('Z', Z), ('Y', Y), ('W', W), ('U', U)):
        if not is_central(param):
            raise NotCentralError(f"{name} = {param} is not central")
    mode, pm = Z.mode, Z.power_mode
    q = q_power(1, mode)

    def m(p: int, r: int) -> AlgElem:
        return AlgElem.monomial(p, r, mode, pm)

    x3 = m(3, 0)
    G11 = x3 * Z * m(1, 1)
    G12 = (x3 * Z * m(0, 2)).scale(q) + x3 * Y
    G21 = x3 * Z * m(0, 2) + x3 * W
    G22 = U * m(2, 2) + (Y.scale(q) + W) * m(2, 1) + (Z * m(2, 3)).scale(q_power(2, mode))
    return Metric((G11, G12, G21, G22))


def ml_family_laurent(a: Scalar, b: Scalar, c: Scalar) -> Metric:
    """
    Middle-linear Laurent metrics at generic q:

        G11 = a x^-2 y^4
        G12 = q x^-3 (b y^3 + q^3 a y^5)
        G21 = x^-3 (b y^3 + q^3 a y^5)
        G22 = x^-4 (c y^2 + q^3 (q^2 + 1) b y^4 + q^8 a y^6)
    """
    mode = a.mode
    pm = PowerMode.LAURENT
    q = lambda k: q_power(k, mode)  # noqa: E731

    def m(p: int, r: int, coeff: Scalar) -> AlgElem:
        return AlgElem.monomial(p, r, mode, pm, coeff)

    G11 = m(-2, 4, a)
    G21 = m(-3, 3, b) + m(-3, 5, q(3) * a)
    G12 = G21.scale(q(1))
    G22 = m(-4, 2, c) + m(-4, 4, q(3) * (q(2) + 1) * b) + m(-4, 6, q(8) * a)
    return Metric((G11, G12, G21, G22))


def ml_laurent_antisymmetric(d: Scalar) -> Metric:
    """
    The middle-linear Laurent metric outside the tau-symmetric family:

        G12 = -q^-1 d x^-3 y^3,  G21 = d x^-3 y^3,  G11 = G22 = 0
    """
    mode = d.mode
    pm = PowerMode.LAURENT
    G21 = AlgElem.monomial(-3, 3, mode, pm, d)
    zero = AlgElem.zero(mode, pm)
    return Metric((zero, G21.scale(-q_power(-1, mode)), G21, zero))


def metric_span_rank(metrics: Sequence[Metric]) -> int:
    """Rank of a list of metrics as vectors of coefficients"""
    if not metrics:
        return 0
    mode = metrics[0].mode

    keys = sorted({(index, mono) for g in metrics for index, e in enumerate(g.G) for mono in e.coeffs})
    position = {k: n for n, k in enumerate(keys)}
    rows = []
    for g in metrics:
        row = {}
        for index, e in enumerate(g.G):
            for mono, c in e.coeffs.items():
                row[position[(index, mono)]] = c
        rows.append(row)
    return ExactMatrix(rows, len(keys), mode).rank()


def as_metric_power_mode(g: Metric, power_mode: PowerMode) -> Metric:
    return Metric([as_power_mode(e, power_mode) for e in g.G])
