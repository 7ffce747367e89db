"""
Metric Compatibility of Connection Pairs

Condition: d g(zeta, rho) = g_check(nabla^L zeta, rho) + g_hat(zeta, nabla^R rho), where
g_check(alpha (x)_A zeta, rho) = alpha g(zeta, rho) and g_hat(zeta, rho (x)_A alpha) = g(zeta, rho) alpha.

Provides:
1. g_check / g_hat on 1-forms and on tensors over the algebra
2. The four basis residuals P^ij and the check over the central 1-forms
3. The (t, s) interpolation between nabla^L and sigma o nabla^R
4. The right connection determined by a constant invertible metric
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .connection import Christoffel, Side, nabla_left, nabla_right
from .metric import Metric, eval_metric
from ..algebra.linalg import ExactMatrix
from ..algebra.oneforms import (
    ETA,
    XI,
    Braiding,
    OneForm,
    TensorOverA,
    TensorOverC,
    central_generators,
    differential,
    left_mul_form,
    standard_sigma,
)
from ..algebra.qalgebra import AlgElem
from ..algebra.scalar import FieldMode, Scalar
from ..utils.errors import InverseInvalidError, ModeMismatchError

logger = logging.getLogger(__name__)


# ============================================================================
# EXTENSIONS OF THE METRIC
# ============================================================================

def metric_value(g: Metric, zeta: OneForm, rho: OneForm) -> AlgElem:
    """g(zeta, rho), reading zeta in left form and rho in right form"""
    return eval_metric(g, TensorOverC.from_forms(zeta, rho))


def g_check(alpha: OneForm, zeta: OneForm, rho: OneForm, g: Metric) -> OneForm:
    """alpha g(zeta, rho)"""
    return alpha * metric_value(g, zeta, rho)


def g_hat(zeta: OneForm, rho: OneForm, alpha: OneForm, g: Metric) -> OneForm:
    """g(zeta, rho) alpha"""
    return left_mul_form(metric_value(g, zeta, rho), alpha)


def g_check_tensor(T: TensorOverA, rho: OneForm, g: Metric) -> OneForm:
    """g_check on theta^j (x)_A theta^k c_jk: sum theta^j g(theta^k c_jk, rho)"""
    mode = T.mode
    result = OneForm.zero(mode)
    for j in (XI, ETA):
        for k in (XI, ETA):
            c = T.entry(j, k)
            if not c.is_zero:
                result = result + g_check(OneForm.basis(j, mode), OneForm.basis(k, mode) * c, rho, g)
    return result


def g_hat_tensor(zeta: OneForm, T: TensorOverA, g: Metric) -> OneForm:
    """g_hat on theta^j (x)_A theta^k c_jk: sum g(zeta, theta^j) theta^k c_jk"""
    mode = T.mode
    result = OneForm.zero(mode)
    for j in (XI, ETA):
        for k in (XI, ETA):
            c = T.entry(j, k)
            if not c.is_zero:
                result = result + g_hat(zeta, OneForm.basis(j, mode), OneForm.basis(k, mode), g) * c
    return result


# ============================================================================
# RESIDUALS
# ============================================================================

@dataclass
class CompatReport:
    """The four basis residuals P^ij; satisfied iff all vanish"""
    residuals: List[List[OneForm]]
    mode: FieldMode
    satisfied: bool = field(init=False)

    def __post_init__(self):
        self.satisfied = all(r.is_zero for row in self.residuals for r in row)

    def to_dict(self) -> Dict[str, str]:
        return {f"P{i + 1}{j + 1}": str(self.residuals[i][j]) for i in (0, 1) for j in (0, 1)}


def compat_residual(gamma: Christoffel, gamma_tilde: Christoffel, g: Metric,
                    zeta: OneForm, rho: OneForm) -> OneForm:
    """d g(zeta, rho) - g_check(nabla^L zeta, rho) - g_hat(zeta, nabla^R rho)"""
    value = metric_value(g, zeta, rho)
    return (differential(value)
            - g_check_tensor(nabla_left(gamma, zeta), rho, g)
            - g_hat_tensor(zeta, nabla_right(gamma_tilde, rho), g))


def metric_compat_residuals(gamma: Christoffel, gamma_tilde: Christoffel, g: Metric) -> CompatReport:
    """
    P^ij = dG_ij - g_check(nabla^L theta^i, theta^j) - g_hat(theta^i, nabla^R theta^j).

    Outer bilinearity reduces the condition on all pairs of 1-forms to these
    four basis pairs.
    """
    if gamma.mode is not g.mode or gamma_tilde.mode is not g.mode:
        raise ModeMismatchError("connections and metric in different modes")
    mode = g.mode
    residuals = [[compat_residual(gamma, gamma_tilde, g, OneForm.basis(i, mode), OneForm.basis(j, mode))
                  for j in (XI, ETA)] for i in (XI, ETA)]
    return CompatReport(residuals, mode)


def compat_over_center(gamma: Christoffel, gamma_tilde: Christoffel, g: Metric) -> bool:
    """The compatibility condition with both arguments among the central generators"""
    if g.mode is not FieldMode.ZETA3:
        raise ModeMismatchError("central 1-forms exist only at q^3 = 1")
    generators = central_generators(g.mode)
    for zeta in generators:
        for rho in generators:
            if not compat_residual(gamma, gamma_tilde, g, zeta, rho).is_zero:
                return False
    return True


# ============================================================================
# INTERPOLATION FAMILY
# ============================================================================

Evaluator = Callable[[OneForm], TensorOverA]


def interp_pair(t: Scalar, s: Scalar, gamma: Christoffel, gamma_tilde: Christoffel,
                braiding: Optional[Braiding] = None) -> Tuple[Evaluator, Evaluator]:
    """
    f_L(t) = (1 - t) nabla^L + t sigma o nabla^R and
    f_R(s) = (1 - s) nabla^R + s sigma^-1 o nabla^L.
    """
    braiding = braiding or standard_sigma(gamma.mode)
    inverse = braiding.inverse()

    def f_left(zeta: OneForm) -> TensorOverA:
        return (nabla_left(gamma, zeta).scale(1 - t)
                + braiding.apply(nabla_right(gamma_tilde, zeta)).scale(t))

    def f_right(zeta: OneForm) -> TensorOverA:
        return (nabla_right(gamma_tilde, zeta).scale(1 - s)
                + inverse.apply(nabla_left(gamma, zeta)).scale(s))

    return f_left, f_right


# ============================================================================
# RIGHT CONNECTION FROM A CONSTANT METRIC
# ============================================================================

def solve_right_for_metric(gamma: Christoffel, g: Metric) -> Christoffel:
    """
    The unique Gamma~ making (Gamma, Gamma~) compatible with a constant
    invertible metric: Gamma~^j_kl = -sum_i (G^-1)_ki C^ij_l where
    C^ij = g_check(nabla^L theta^i, theta^j) = theta^l C^ij_l.

    Raises:
        InverseInvalidError: if G is not a constant invertible grid
    """
    mode = g.mode
    if not all(e.is_constant() for e in g.G):
        raise InverseInvalidError("metric grid is not constant")
    G = ExactMatrix.from_dense([[g.entry(i, j).coeff(0, 0) for j in (0, 1)] for i in (0, 1)], mode)
    if G.rank() < 2:
        raise InverseInvalidError("metric grid is singular")
    one, zero = Scalar.one(mode), Scalar.zero(mode)
    columns = [G.solve([one, zero]), G.solve([zero, one])]
    G_inv = [[columns[c][r] for c in (0, 1)] for r in (0, 1)]

    C = [[g_check_tensor(gamma.image(i), OneForm.basis(j, mode), g) for j in (XI, ETA)] for i in (XI, ETA)]
    gamma_tilde: Dict = {}
    for j in (XI, ETA):
        for k in (XI, ETA):
            for l in (XI, ETA):
                total = AlgElem.zero(mode)
                for i in (XI, ETA):
                    total = total - C[i][j].b[l].scale(G_inv[k][i])
                gamma_tilde[(j, k, l)] = total
    return Christoffel(gamma_tilde, Side.RIGHT, mode)
