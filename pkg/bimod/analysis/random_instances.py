"""
Seeded Random Instances

Generators for the randomized verification suites. Every generator takes a
numpy Generator; suites derive one per instance with
``instance_rng(seed, index)`` so that instance n is the same whatever order
or worker evaluates it.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..algebra.qalgebra import AlgElem, PowerMode, alg_mul
from ..algebra.scalar import FieldMode, Scalar, q_power
from ..geometry.compat import solve_right_for_metric
from ..geometry.connection import INDICES, Christoffel, Index, Side
from ..geometry.matrixgeo import (
    Gamma,
    MatFunc,
    MatrixGeometry,
    identity_matrix,
    zero_gamma,
)
from ..geometry.metric import Metric

logger = logging.getLogger(__name__)

# Admissibility clauses that can fail on their own. A polynomial G^2_22
# outside xA always breaks the combined clause as well.
VIOLATABLE_CLAUSES = (0, 1, 2, 4)


def instance_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(seed + index)


# ============================================================================
# QUANTUM PLANE
# ============================================================================

def random_scalar(rng: np.random.Generator, mode: FieldMode, nonzero: bool = True) -> Scalar:
    """A small integer times a power of q (a plain integer in RATIONAL/GAUSSIAN modes)"""
    values = [v for v in range(-3, 4) if v or not nonzero]
    c = Scalar.from_rational(int(rng.choice(values)), 1, mode)
    if mode in (FieldMode.GENERIC_Q, FieldMode.ZETA3):
        c = c * q_power(int(rng.integers(0, 3)), mode)
    return c


def random_alg(rng: np.random.Generator, mode: FieldMode, max_degree: int,
               n_terms: int = 3) -> AlgElem:
    """Up to n_terms monomials x^p y^r with p, r <= max_degree"""
    if max_degree < 0:
        return AlgElem.zero(mode)
    coeffs: Dict[Tuple[int, int], Scalar] = {}
    for _ in range(int(rng.integers(1, n_terms + 1))):
        mono = (int(rng.integers(0, max_degree + 1)), int(rng.integers(0, max_degree + 1)))
        coeffs[mono] = random_scalar(rng, mode)
    return AlgElem(coeffs, mode, PowerMode.POLYNOMIAL)


def random_central(rng: np.random.Generator, mode: FieldMode, max_degree: int) -> AlgElem:
    """Random element of the span of x^3i y^3j (constants only away from q^3 = 1)"""
    if mode is not FieldMode.ZETA3:
        return AlgElem.constant(random_scalar(rng, mode), mode)
    steps = max_degree // 3
    coeffs = {}
    for _ in range(int(rng.integers(1, 3))):
        mono = (3 * int(rng.integers(0, steps + 1)), 3 * int(rng.integers(0, steps + 1)))
        coeffs[mono] = random_scalar(rng, mode)
    return AlgElem(coeffs, mode, PowerMode.POLYNOMIAL)


def _x_times(power: int, a: AlgElem) -> AlgElem:
    return alg_mul(AlgElem.monomial(power, 0, a.mode), a)


def random_christoffel(rng: np.random.Generator, mode: FieldMode, max_degree: int,
                       side: Side = Side.LEFT) -> Christoffel:
    gamma = {index: random_alg(rng, mode, max_degree) for index in INDICES}
    return Christoffel(gamma, side, mode)


def random_admissible_gamma(rng: np.random.Generator, max_degree: int = 4,
                            mode: FieldMode = FieldMode.ZETA3) -> Christoffel:
    """
    A left connection passing every divisibility clause.

    The x-free part of (1 - q^2) G^2_21 + 3 q^2 y h, where G^2_22 = x h, is
    cancelled through G^2_12.
    """
    q = q_power(1, mode)
    d = max(max_degree, 2)
    gamma: Dict[Index, AlgElem] = {
        (0, 0, 0): random_alg(rng, mode, d),
        (0, 0, 1): _x_times(1, random_alg(rng, mode, d - 1)),
        (0, 1, 0): _x_times(1, random_alg(rng, mode, d - 1)),
        (0, 1, 1): _x_times(2, random_alg(rng, mode, d - 2)),
        (1, 0, 0): random_alg(rng, mode, d),
        (1, 1, 0): random_alg(rng, mode, d - 1),
    }
    h = random_alg(rng, mode, d - 1)
    gamma[(1, 1, 1)] = _x_times(1, h)

    combined = gamma[(1, 1, 0)].scale(1 - q * q) + alg_mul(AlgElem.y(mode), h).scale(q * q * 3)
    x_free = AlgElem({mono: c for mono, c in combined.coeffs.items() if mono[0] == 0}, mode)
    gamma[(1, 0, 1)] = _x_times(1, random_alg(rng, mode, d - 1)) - x_free.scale((q - 1).inverse())
    return Christoffel(gamma, Side.LEFT, mode)


def random_violating_gamma(rng: np.random.Generator, clause: int, max_degree: int = 4,
                           mode: FieldMode = FieldMode.ZETA3) -> Christoffel:
    """An admissible connection perturbed so that exactly the given clause fails"""
    if clause not in VIOLATABLE_CLAUSES:
        raise ValueError(f"clause {clause} cannot fail on its own")
    base = random_admissible_gamma(rng, max_degree, mode)
    r = int(rng.integers(0, max(max_degree, 1) + 1))
    c = random_scalar(rng, mode)
    offending = {
        0: ((0, 0, 1), AlgElem.monomial(0, r, mode, coeff=c)),
        1: ((0, 1, 0), AlgElem.monomial(0, r, mode, coeff=c)),
        2: ((0, 1, 1), AlgElem.monomial(1, r, mode, coeff=c)),
        4: ((1, 1, 0), AlgElem.monomial(0, r, mode, coeff=c)),
    }
    index, term = offending[clause]
    gamma = dict(base.gamma)
    gamma[index] = base[index] + term
    return Christoffel(gamma, Side.LEFT, mode)


def random_metric(rng: np.random.Generator, mode: FieldMode, max_degree: int) -> Metric:
    return Metric([random_alg(rng, mode, max_degree) for _ in range(4)])


def random_invertible_constant_metric(rng: np.random.Generator, mode: FieldMode) -> Metric:
    while True:
        values = [random_scalar(rng, mode, nonzero=False) for _ in range(4)]
        if values[0] * values[3] - values[1] * values[2]:
            return Metric.constant(values, mode)


def random_compat_triple(rng: np.random.Generator, kind: int, max_degree: int = 3,
                         mode: FieldMode = FieldMode.ZETA3) -> Tuple[Christoffel, Christoffel, Metric]:
    """
    kind 0: independent random data (compatibility fails generically);
    kind 1: compatible, with the right connection fixed by a constant metric;
    kind 2: kind 1 with one right symbol perturbed.
    """
    gamma = random_christoffel(rng, mode, max_degree, Side.LEFT)
    if kind == 0:
        return gamma, random_christoffel(rng, mode, max_degree, Side.RIGHT), random_metric(rng, mode, max_degree)
    g = random_invertible_constant_metric(rng, mode)
    gamma_tilde = solve_right_for_metric(gamma, g)
    if kind == 2:
        index = INDICES[int(rng.integers(0, len(INDICES)))]
        entries = dict(gamma_tilde.gamma)
        entries[index] = gamma_tilde[index] + random_alg(rng, mode, max_degree, n_terms=1)
        gamma_tilde = Christoffel(entries, Side.RIGHT, mode)
    return gamma, gamma_tilde, g


# ============================================================================
# MATRIX GEOMETRY
# ============================================================================

def _random_gaussian(rng: np.random.Generator) -> Scalar:
    re, im = (int(v) for v in rng.integers(-2, 3, size=2))
    return Scalar.gaussian(re, im)


def random_matfunc(rng: np.random.Generator, geometry: MatrixGeometry, max_degree: int,
                   n_terms: int = 2, central: bool = False) -> MatFunc:
    """Up to n_terms terms t^alpha M with alpha_mu <= max_degree"""
    n = geometry.n
    terms = {}
    for _ in range(int(rng.integers(1, n_terms + 1))):
        alpha = tuple(int(v) for v in rng.integers(0, max_degree + 1, size=geometry.m))
        if central:
            M = identity_matrix(n) * _random_gaussian(rng)
        else:
            M = np.empty((n, n), dtype=object)
            for idx in np.ndindex(n, n):
                M[idx] = _random_gaussian(rng)
        terms[alpha] = M
    return MatFunc(terms, geometry)


def random_symmetric_grid(rng: np.random.Generator, geometry: MatrixGeometry, max_degree: int,
                          density: float = 0.3, central: bool = False) -> List[List[MatFunc]]:
    d = geometry.dim
    G = [[geometry.zero() for _ in range(d)] for _ in range(d)]
    for i in range(d):
        G[i][i] = random_matfunc(rng, geometry, max_degree, central=central)
        for j in range(i + 1, d):
            if rng.random() < density:
                G[i][j] = random_matfunc(rng, geometry, max_degree, central=central)
                G[j][i] = G[i][j]
    return G


def random_mg_gamma(rng: np.random.Generator, geometry: MatrixGeometry, max_degree: int,
                    density: float = 0.05, central: Optional[bool] = None) -> Gamma:
    """Sparse Christoffel grid; central=None mixes central and matrix entries"""
    gamma = zero_gamma(geometry)
    d = geometry.dim
    for i in range(d):
        for j in range(d):
            for k in range(d):
                if rng.random() < density:
                    is_central = bool(rng.integers(0, 2)) if central is None else central
                    gamma[i][j][k] = random_matfunc(rng, geometry, max_degree, n_terms=1, central=is_central)
    return gamma


def perturb_gamma(rng: np.random.Generator, gamma: Gamma, geometry: MatrixGeometry) -> Gamma:
    """Copy of gamma with one random entry shifted by a nonzero constant matrix"""
    d = geometry.dim
    out = [[list(row) for row in plane] for plane in gamma]
    i, j, k = (int(v) for v in rng.integers(0, d, size=3))
    shift = geometry.scalar(Scalar.gaussian(int(rng.integers(1, 3))))
    out[i][j][k] = out[i][j][k] + shift
    return out
