"""
Matrix Geometry

Polynomial model of matrix-valued functions: A = Poly(t_1..t_m) (x) M_n over
the Gaussian rationals, with the derivation-based differential calculus

    da = sum_mu d_mu(a) theta^mu + sum_b [lambda_b, a] theta^(m+b)

where lambda_b is a fixed traceless basis of M_n. The basis 1-forms theta^i
are central, so a theta^i = theta^i a and the braiding is the flip of legs.

Provides:
1. MatFunc / MGOneForm arithmetic with numpy object arrays of exact scalars
2. Metrics from symmetric grids and their extraction
3. Connections, sigma-compatibility (index swap) and the whole-bimodule clause
4. Metric compatibility by the closed display and from first principles
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.scalar import FieldMode, Scalar
from ..utils.errors import ModeMismatchError, NotSymmetricError

logger = logging.getLogger(__name__)

MODE = FieldMode.GAUSSIAN

MultiIndex = Tuple[int, ...]


# ============================================================================
# EXACT MATRICES
# ============================================================================

def zero_matrix(n: int) -> np.ndarray:
    M = np.empty((n, n), dtype=object)
    for idx in np.ndindex(n, n):
        M[idx] = Scalar.zero(MODE)
    return M


def identity_matrix(n: int) -> np.ndarray:
    M = zero_matrix(n)
    for i in range(n):
        M[i, i] = Scalar.one(MODE)
    return M


def matrix_from_entries(rows: Sequence[Sequence[Scalar]]) -> np.ndarray:
    n = len(rows)
    M = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            M[i, j] = rows[i][j]
    return M


def is_zero_matrix(M: np.ndarray) -> bool:
    return all(e.is_zero for e in M.flat)


def matrices_equal(A: np.ndarray, B: np.ndarray) -> bool:
    return all(a == b for a, b in zip(A.flat, B.flat))


def is_scalar_matrix(M: np.ndarray) -> bool:
    n = M.shape[0]
    return all((M[i, j] == M[0, 0]) if i == j else M[i, j].is_zero
               for i in range(n) for j in range(n))


def lambda_basis(n: int) -> List[np.ndarray]:
    """
    Traceless basis of M_n with Gaussian-rational structure constants.

    n = 2: lambda_a = (i/2) sigma_a, so [lambda_a, lambda_b] = -eps_abc lambda_c.
    Otherwise: E_jk for j != k, then E_jj - E_(j+1)(j+1).
    """
    half_i = Scalar.gaussian(0, (1, 2))
    if n == 2:
        z = Scalar.zero(MODE)
        half = Scalar.gaussian((1, 2))
        return [
            matrix_from_entries([[z, half_i], [half_i, z]]),
            matrix_from_entries([[z, half], [-half, z]]),
            matrix_from_entries([[half_i, z], [z, -half_i]]),
        ]
    basis = []
    for j in range(n):
        for k in range(n):
            if j != k:
                M = zero_matrix(n)
                M[j, k] = Scalar.one(MODE)
                basis.append(M)
    for j in range(n - 1):
        M = zero_matrix(n)
        M[j, j] = Scalar.one(MODE)
        M[j + 1, j + 1] = -Scalar.one(MODE)
        basis.append(M)
    return basis


class MatrixGeometry:
    """
    Session data: m commuting coordinates, n x n matrices and the lambda basis.

    The 1-form basis has dim = m + n^2 - 1 elements: first the de Rham
    directions theta^mu, then the inner directions dual to ad(lambda_b).
    """

    def __init__(self, m: int = 2, n: int = 2):
        if m < 0 or n < 1:
            raise ValueError(f"invalid matrix geometry size m={m}, n={n}")
        self.m = m
        self.n = n
        self.lambdas = lambda_basis(n)
        self.dim = m + n * n - 1

    def zero(self) -> 'MatFunc':
        return MatFunc({}, self)

    def constant(self, M: np.ndarray) -> 'MatFunc':
        return MatFunc({(0,) * self.m: M}, self)

    def identity(self) -> 'MatFunc':
        return self.constant(identity_matrix(self.n))

    def scalar(self, c: Scalar) -> 'MatFunc':
        return self.constant(identity_matrix(self.n) * c)

    def coordinate(self, mu: int) -> 'MatFunc':
        """t_mu times the identity"""
        if not 0 <= mu < self.m:
            raise IndexError(f"coordinate index {mu} out of range")
        exps = tuple(1 if k == mu else 0 for k in range(self.m))
        return MatFunc({exps: identity_matrix(self.n)}, self)

    def lam(self, b: int) -> 'MatFunc':
        return self.constant(self.lambdas[b])

    def generators(self) -> List['MatFunc']:
        """Algebra generators: the coordinates and the lambda basis"""
        return [self.coordinate(mu) for mu in range(self.m)] + [self.lam(b) for b in range(len(self.lambdas))]

    def basis_form(self, i: int) -> 'MGOneForm':
        coeffs = [self.zero() for _ in range(self.dim)]
        coeffs[i] = self.identity()
        return MGOneForm(coeffs, self)

    def __eq__(self, other) -> bool:
        return isinstance(other, MatrixGeometry) and (self.m, self.n) == (other.m, other.n)

    def __hash__(self) -> int:
        return hash((self.m, self.n))


# ============================================================================
# MATRIX-VALUED POLYNOMIALS
# ============================================================================

class MatFunc:
    """sum over multi-indices alpha of t^alpha M_alpha; zero matrices are never stored"""

    __slots__ = ('terms', 'geometry')

    def __init__(self, terms: Dict[MultiIndex, np.ndarray], geometry: MatrixGeometry):
        self.geometry = geometry
        self.terms = {}
        for alpha, M in terms.items():
            if len(alpha) != geometry.m:
                raise ValueError(f"multi-index {alpha} does not have {geometry.m} entries")
            if M.shape != (geometry.n, geometry.n):
                raise ValueError(f"matrix of shape {M.shape}, expected {geometry.n}x{geometry.n}")
            if not is_zero_matrix(M):
                self.terms[tuple(alpha)] = M

    def _check(self, other: 'MatFunc') -> None:
        if other.geometry != self.geometry:
            raise ModeMismatchError("matrix functions from different geometries")

    def __add__(self, other: 'MatFunc') -> 'MatFunc':
        self._check(other)
        terms = dict(self.terms)
        for alpha, M in other.terms.items():
            terms[alpha] = terms[alpha] + M if alpha in terms else M
        return MatFunc(terms, self.geometry)

    def __neg__(self) -> 'MatFunc':
        return MatFunc({a: -M for a, M in self.terms.items()}, self.geometry)

    def __sub__(self, other: 'MatFunc') -> 'MatFunc':
        return self + (-other)

    def scale(self, s: Scalar) -> 'MatFunc':
        return MatFunc({a: M * s for a, M in self.terms.items()}, self.geometry)

    def __mul__(self, other: 'MatFunc') -> 'MatFunc':
        self._check(other)
        terms: Dict[MultiIndex, np.ndarray] = {}
        for alpha, A in self.terms.items():
            for beta, B in other.terms.items():
                key = tuple(a + b for a, b in zip(alpha, beta))
                product = A @ B
                terms[key] = terms[key] + product if key in terms else product
        return MatFunc(terms, self.geometry)

    def partial(self, mu: int) -> 'MatFunc':
        terms = {}
        for alpha, M in self.terms.items():
            if alpha[mu]:
                lowered = tuple(a - 1 if k == mu else a for k, a in enumerate(alpha))
                terms[lowered] = M * Scalar.from_rational(alpha[mu], 1, MODE)
        return MatFunc(terms, self.geometry)

    def commutator(self, other: 'MatFunc') -> 'MatFunc':
        return self * other - other * self

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_central(self) -> bool:
        """Central iff every coefficient is a scalar matrix"""
        return all(is_scalar_matrix(M) for M in self.terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatFunc) or other.geometry != self.geometry:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(matrices_equal(M, other.terms[a]) for a, M in self.terms.items())

    def __hash__(self) -> int:
        return hash(tuple(sorted((a, tuple(M.flat)) for a, M in self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        pieces = []
        for alpha, M in sorted(self.terms.items()):
            mono = '*'.join(f"t{k + 1}^{e}" if e > 1 else f"t{k + 1}" for k, e in enumerate(alpha) if e)
            rows = '; '.join(' '.join(str(e) for e in row) for row in M)
            pieces.append(f"[{rows}]" + (f"*{mono}" if mono else ''))
        return ' + '.join(pieces)


# ============================================================================
# ONE-FORMS AND TENSORS
# ============================================================================

class MGOneForm:
    """sum c_i theta^i; the basis is central, so left and right coefficients agree"""

    __slots__ = ('c', 'geometry')

    def __init__(self, coeffs: Sequence[MatFunc], geometry: MatrixGeometry):
        if len(coeffs) != geometry.dim:
            raise ValueError(f"expected {geometry.dim} coefficients, got {len(coeffs)}")
        self.c = list(coeffs)
        self.geometry = geometry

    @classmethod
    def zero(cls, geometry: MatrixGeometry) -> 'MGOneForm':
        return cls([geometry.zero() for _ in range(geometry.dim)], geometry)

    def __add__(self, other: 'MGOneForm') -> 'MGOneForm':
        return MGOneForm([a + b for a, b in zip(self.c, other.c)], self.geometry)

    def __sub__(self, other: 'MGOneForm') -> 'MGOneForm':
        return MGOneForm([a - b for a, b in zip(self.c, other.c)], self.geometry)

    def left_mul(self, a: MatFunc) -> 'MGOneForm':
        return MGOneForm([a * c for c in self.c], self.geometry)

    def right_mul(self, a: MatFunc) -> 'MGOneForm':
        return MGOneForm([c * a for c in self.c], self.geometry)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.c)

    def __eq__(self, other) -> bool:
        return isinstance(other, MGOneForm) and self.c == other.c

    def __str__(self) -> str:
        pieces = [f"({c})*theta{i + 1}" for i, c in enumerate(self.c) if not c.is_zero]
        return ' + '.join(pieces) if pieces else '0'


Tensor = List[List[MatFunc]]


def zero_tensor(geometry: MatrixGeometry) -> Tensor:
    return [[geometry.zero() for _ in range(geometry.dim)] for _ in range(geometry.dim)]


def tensor_is_zero(T: Tensor) -> bool:
    return all(c.is_zero for row in T for c in row)


def tensor_sub(A: Tensor, B: Tensor) -> Tensor:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def flip(T: Tensor) -> Tensor:
    """tau = sigma: theta^i (x) theta^j -> theta^j (x) theta^i"""
    d = len(T)
    return [[T[k][j] for k in range(d)] for j in range(d)]


def decompose_central(omega: MGOneForm) -> Tuple[bool, List[str]]:
    """
    Check omega = sum c_i theta^i = sum theta^i c_i, i.e. the 1-forms are
    generated by the central basis from either side.
    """
    geo = omega.geometry
    issues = []
    left = MGOneForm.zero(geo)
    right = MGOneForm.zero(geo)
    for i, c in enumerate(omega.c):
        left = left + geo.basis_form(i).left_mul(c)
        right = right + geo.basis_form(i).right_mul(c)
    if left != omega:
        issues.append("left decomposition differs")
    if right != omega:
        issues.append("right decomposition differs")
    return len(issues) == 0, issues


# ============================================================================
# DIFFERENTIAL
# ============================================================================

def differential_mg(a: MatFunc) -> MGOneForm:
    """da = sum_mu d_mu(a) theta^mu + sum_b [lambda_b, a] theta^(m+b)"""
    geo = a.geometry
    coeffs = [a.partial(mu) for mu in range(geo.m)]
    coeffs.extend(geo.lam(b).commutator(a) for b in range(len(geo.lambdas)))
    return MGOneForm(coeffs, geo)


# ============================================================================
# METRICS
# ============================================================================

class MGMetric:
    """
    g(a theta^i (x) theta^j b) = a G^ij b on tensors over the ground field,
    given as lists of terms (a, i, j, b).
    """

    def __init__(self, G: Sequence[Sequence[MatFunc]], geometry: MatrixGeometry):
        self.G = [list(row) for row in G]
        self.geometry = geometry

    def evaluate(self, terms: Sequence[Tuple[MatFunc, int, int, MatFunc]]) -> MatFunc:
        total = self.geometry.zero()
        for a, i, j, b in terms:
            total = total + a * self.G[i][j] * b
        return total

    def value(self, zeta: MGOneForm, rho: MGOneForm) -> MatFunc:
        """g(zeta, rho) = sum zeta_i G^ij rho_j"""
        left = [i for i, c in enumerate(zeta.c) if not c.is_zero]
        right = [j for j, c in enumerate(rho.c) if not c.is_zero]
        return self.evaluate([(zeta.c[i], i, j, rho.c[j]) for i in left for j in right])


def check_symmetric(G: Sequence[Sequence[MatFunc]]) -> Tuple[bool, List[str]]:
    d = len(G)
    issues = [f"G^{i + 1}{j + 1} != G^{j + 1}{i + 1}"
              for i in range(d) for j in range(i + 1, d) if G[i][j] != G[j][i]]
    return len(issues) == 0, issues


def metric_bijection(G: Sequence[Sequence[MatFunc]], geometry: MatrixGeometry) -> MGMetric:
    """
    The tau-symmetric metric with g(theta^i (x) theta^j) = G^ij.

    Raises:
        NotSymmetricError: if G is not symmetric
    """
    if len(G) != geometry.dim or any(len(row) != geometry.dim for row in G):
        raise ValueError(f"metric grid must be {geometry.dim}x{geometry.dim}")
    ok, issues = check_symmetric(G)
    if not ok:
        raise NotSymmetricError('; '.join(issues))
    return MGMetric(G, geometry)


def extract_grid(metric: MGMetric) -> List[List[MatFunc]]:
    """Inverse of metric_bijection: evaluate on the basis pairs"""
    geo = metric.geometry
    one = geo.identity()
    return [[metric.evaluate([(one, i, j, one)]) for j in range(geo.dim)] for i in range(geo.dim)]


def is_tau_symmetric_mg(metric: MGMetric) -> bool:
    geo = metric.geometry
    one = geo.identity()
    return all(metric.evaluate([(one, j, i, one)]) == metric.evaluate([(one, i, j, one)])
               for i in range(geo.dim) for j in range(geo.dim))


def is_middle_linear_mg(metric: MGMetric) -> bool:
    """g(theta^i a (x) theta^j) = g(theta^i (x) a theta^j) for every generator a"""
    geo = metric.geometry
    one = geo.identity()
    for a in geo.generators():
        for i in range(geo.dim):
            for j in range(geo.dim):
                # theta^i a = a theta^i and a theta^j = theta^j a
                if metric.evaluate([(a, i, j, one)]) != metric.evaluate([(one, i, j, a)]):
                    return False
    return True


# ============================================================================
# CONNECTIONS
# ============================================================================

Gamma = List[List[List[MatFunc]]]


def zero_gamma(geometry: MatrixGeometry) -> Gamma:
    d = geometry.dim
    return [[[geometry.zero() for _ in range(d)] for _ in range(d)] for _ in range(d)]


def swap_lower(gamma: Gamma) -> Gamma:
    """Gamma~^i_kj = Gamma^i_jk"""
    d = len(gamma)
    return [[[gamma[i][j][k] for j in range(d)] for k in range(d)] for i in range(d)]


def nabla_left_mg(gamma: Gamma, omega: MGOneForm) -> Tensor:
    """nabla^L(c_i theta^i) = dc_i (x) theta^i + c_i Gamma^i_jk theta^j (x) theta^k"""
    geo = omega.geometry
    T = zero_tensor(geo)
    for i, c in enumerate(omega.c):
        if c.is_zero:
            continue
        dc = differential_mg(c)
        for j in range(geo.dim):
            T[j][i] = T[j][i] + dc.c[j]
            for k in range(geo.dim):
                T[j][k] = T[j][k] + c * gamma[i][j][k]
    return T


def nabla_right_mg(gamma_tilde: Gamma, omega: MGOneForm) -> Tensor:
    """nabla^R(theta^i c_i) = Gamma~^i_jk theta^j (x) theta^k c_i + theta^i (x) dc_i"""
    geo = omega.geometry
    T = zero_tensor(geo)
    for i, c in enumerate(omega.c):
        if c.is_zero:
            continue
        dc = differential_mg(c)
        for j in range(geo.dim):
            T[i][j] = T[i][j] + dc.c[j]
            for k in range(geo.dim):
                T[j][k] = T[j][k] + gamma_tilde[i][j][k] * c
    return T


def sigma_compat_mg(gamma: Gamma, gamma_tilde: Gamma) -> bool:
    """Sigma-compatibility over the center: Gamma~^i_kj = Gamma^i_jk"""
    d = len(gamma)
    return all(gamma_tilde[i][k][j] == gamma[i][j][k]
               for i in range(d) for j in range(d) for k in range(d))


def sigma_compat_residuals_mg(gamma: Gamma, gamma_tilde: Gamma, geometry: MatrixGeometry,
                              central: Optional[Sequence[MatFunc]] = None) -> List[Tensor]:
    """
    nabla^L zeta - flip(nabla^R zeta) for zeta = z theta^i, z running over
    the given central elements (default: 1 and t_1).
    """
    if central is None:
        central = [geometry.identity()] + ([geometry.coordinate(0)] if geometry.m else [])
    residuals = []
    for z in central:
        for i in range(geometry.dim):
            zeta = geometry.basis_form(i).left_mul(z)
            residuals.append(tensor_sub(nabla_left_mg(gamma, zeta),
                                        flip(nabla_right_mg(gamma_tilde, zeta))))
    return residuals


def whole_bimodule_residuals_mg(gamma: Gamma, geometry: MatrixGeometry) -> List[Tensor]:
    """nabla^L(theta^i a) - (nabla^L theta^i) a - flip(theta^i (x) da) for algebra generators a"""
    residuals = []
    for a in geometry.generators():
        da = differential_mg(a)
        for i in range(geometry.dim):
            theta = geometry.basis_form(i)
            lhs = nabla_left_mg(gamma, theta.right_mul(a))
            rhs = [[entry * a for entry in row] for row in nabla_left_mg(gamma, theta)]
            leibniz = zero_tensor(geometry)
            for j in range(geometry.dim):
                leibniz[i][j] = da.c[j]
            residuals.append(tensor_sub(lhs, [[r + s for r, s in zip(rr, sr)]
                                              for rr, sr in zip(rhs, flip(leibniz))]))
    return residuals


def whole_bimodule_mg(gamma: Gamma, gamma_tilde: Gamma) -> bool:
    """Index swap holds and every Gamma^i_jk is central (a function times the identity)"""
    return sigma_compat_mg(gamma, gamma_tilde) and all(
        entry.is_central() for plane in gamma for row in plane for entry in row)


# ============================================================================
# METRIC COMPATIBILITY
# ============================================================================

def metric_compat_mg(gamma: Gamma, gamma_tilde: Gamma,
                     G: Sequence[Sequence[MatFunc]], geometry: MatrixGeometry) -> List[List[MGOneForm]]:
    """R^ij = dG^ij - (Gamma^i_kl G^lj + G^il Gamma~^j_lk) theta^k"""
    d = geometry.dim
    residuals = []
    for i in range(d):
        row = []
        for j in range(d):
            dG = differential_mg(G[i][j])
            coeffs = []
            for k in range(d):
                total = dG.c[k]
                for l in range(d):
                    total = total - gamma[i][k][l] * G[l][j] - G[i][l] * gamma_tilde[j][l][k]
                coeffs.append(total)
            row.append(MGOneForm(coeffs, geometry))
        residuals.append(row)
    return residuals


def g_check_mg(T: Tensor, rho: MGOneForm, metric: MGMetric) -> MGOneForm:
    """g_check(theta^j (x) T_jk theta^k, rho) = theta^j g(T_jk theta^k, rho)"""
    geo = metric.geometry
    coeffs = []
    for j in range(geo.dim):
        total = geo.zero()
        for k in range(geo.dim):
            if not T[j][k].is_zero:
                total = total + metric.value(geo.basis_form(k).left_mul(T[j][k]), rho)
        coeffs.append(total)
    return MGOneForm(coeffs, geo)


def g_hat_mg(zeta: MGOneForm, T: Tensor, metric: MGMetric) -> MGOneForm:
    """g_hat(zeta, theta^j (x) theta^k T_jk) = g(zeta, theta^j) theta^k T_jk"""
    geo = metric.geometry
    pairings = [metric.value(zeta, geo.basis_form(j)) for j in range(geo.dim)]
    coeffs = []
    for k in range(geo.dim):
        total = geo.zero()
        for j in range(geo.dim):
            total = total + pairings[j] * T[j][k]
        coeffs.append(total)
    return MGOneForm(coeffs, geo)


def compat_residual_mg(gamma: Gamma, gamma_tilde: Gamma, metric: MGMetric,
                       zeta: MGOneForm, rho: MGOneForm) -> MGOneForm:
    """d g(zeta, rho) - g_check(nabla^L zeta, rho) - g_hat(zeta, nabla^R rho), from the Leibniz rules"""
    return (differential_mg(metric.value(zeta, rho))
            - g_check_mg(nabla_left_mg(gamma, zeta), rho, metric)
            - g_hat_mg(zeta, nabla_right_mg(gamma_tilde, rho), metric))


def compat_residuals_first_principles(gamma: Gamma, gamma_tilde: Gamma,
                                      metric: MGMetric) -> List[List[MGOneForm]]:
    geo = metric.geometry
    return [[compat_residual_mg(gamma, gamma_tilde, metric, geo.basis_form(i), geo.basis_form(j))
             for j in range(geo.dim)] for i in range(geo.dim)]
