"""
Named Verifications

Each function reproduces one group of results about bimodule connections on
the quantum plane and returns a VerificationResult. Randomized groups draw
instance n from ``instance_rng(seed, n)`` and fan out with joblib; results
come back in submission order, so reports do not depend on ``n_jobs``.
"""

import logging
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from .random_instances import (
    VIOLATABLE_CLAUSES,
    instance_rng,
    perturb_gamma,
    random_admissible_gamma,
    random_alg,
    random_central,
    random_compat_triple,
    random_matfunc,
    random_mg_gamma,
    random_scalar,
    random_symmetric_grid,
    random_violating_gamma,
)
from ..algebra.linalg import ExactMatrix
from ..algebra.oneforms import (
    APPENDIX_FORMULAS,
    ETA,
    XI,
    BASIS_NAMES,
    OneForm,
    TensorOverA,
    appendix_formula,
    center_oneforms,
    central_generators,
    differential,
    differential_form,
    left_mul_form,
    left_mul_tensorA,
    standard_sigma,
    to_left_form,
    to_right_form,
)
from ..algebra.qalgebra import AlgElem, ExponentWindow, alg_mul, center_basis, format_alg, is_central
from ..algebra.rewriting import oracle_left_mul_form, oracle_left_mul_tensor
from ..algebra.scalar import FieldMode, Scalar, parse_scalar, q_power, qn_sum
from ..geometry import matrixgeo as mg
from ..geometry.compat import compat_over_center, metric_compat_residuals
from ..geometry.connection import (
    INDICES,
    BimoduleMap,
    Christoffel,
    GaugeMatrix,
    Side,
    admissibility_clauses,
    bimodule_automorphism_basis,
    christoffel_from_images,
    christoffel_label,
    gauge_transform_bimodule,
    gauge_transform_frame,
    is_admissible,
    is_sigma_compatible,
    satisfies_whole_bimodule,
    shear_automorphism,
    sigma_compat_solve,
    solve_right_from_left,
    whole_bimodule_family_generic,
    whole_bimodule_family_zeta3,
    whole_bimodule_solve,
)
from ..geometry.metric import (
    Metric,
    is_middle_linear,
    is_tau_symmetric,
    metric_span_rank,
    ml_family_laurent,
    ml_family_zeta3,
    ml_laurent_antisymmetric,
    solve_middle_linear,
)
from ..utils.config import get_config
from ..utils.errors import NotAdmissibleError, NotSymmetricError
from ..utils.reporting import VerificationResult, verification

logger = logging.getLogger(__name__)

GENERIC = FieldMode.GENERIC_Q
ZETA3 = FieldMode.ZETA3


def _settings(group: str, config: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    config = config or get_config()
    return config['verifications'][group]


def _run_trials(worker, args: Sequence[Tuple], n_jobs: int) -> List:
    return Parallel(n_jobs=n_jobs)(delayed(worker)(*a) for a in args)


def _span_rank(vectors: Sequence[Dict[Hashable, Scalar]], mode: FieldMode) -> int:
    keys = sorted({k for v in vectors for k in v}, key=repr)
    position = {k: n for n, k in enumerate(keys)}
    rows = [{position[k]: c for k, c in v.items()} for v in vectors]
    return ExactMatrix(rows, len(keys), mode).rank() if rows else 0


def _form_vector(omega: OneForm) -> Dict[Hashable, Scalar]:
    return {(j, mono): c for j in (XI, ETA) for mono, c in omega.b[j].coeffs.items()}


def _fits(g: Metric, window: ExponentWindow) -> bool:
    return all(mono in window for e in g.G for mono in e.coeffs)


# ============================================================================
# CENTER
# ============================================================================

@verification('verify center')
def verify_center(mode: FieldMode = ZETA3, bound: Optional[int] = None,
                  oneform_bound: Optional[int] = None,
                  config: Optional[Dict[str, Any]] = None) -> Tuple[bool, Dict[str, Any]]:
    """
    Center of the algebra and of the 1-forms.

    At q^3 = 1 the center is spanned by x^3i y^3j, d kills it, and the central
    1-forms are the center-multiples of xy xi and -x y^3 xi + x^2 y^2 eta.
    At generic q both centers are trivial.
    """
    settings = _settings('center', config)
    bound = settings['bound'] if bound is None else bound
    oneform_bound = settings['oneform_bound'] if oneform_bound is None else oneform_bound
    details: Dict[str, Any] = {'mode': mode.value, 'bound': bound}

    basis = center_basis(bound, mode)
    if mode is ZETA3:
        expected = {(3 * i, 3 * j) for i in range(bound // 3 + 1) for j in range(bound // 3 + 1)}
    else:
        expected = {(0, 0)}
    support = {mono for b in basis for mono in b.coeffs}
    center_ok = len(basis) == len(expected) and support <= expected and all(is_central(b) for b in basis)
    d_zero = all(differential(b).is_zero for b in basis)
    details['center_basis'] = [format_alg(b) for b in basis]
    details['center_dimension'] = len(basis)
    details['d_of_center_zero'] = d_zero

    forms = center_oneforms(oneform_bound, mode)
    details['central_oneform_dimension'] = len(forms)
    if mode is ZETA3:
        window = ExponentWindow.square(oneform_bound)
        candidates = []
        for z in center_basis(oneform_bound, mode):
            for zeta in central_generators(mode):
                a1, a2 = to_left_form(zeta)
                left = (alg_mul(z, a1), alg_mul(z, a2))
                if all(mono in window for a in left for mono in a.coeffs):
                    candidates.append(to_right_form(*left))
        vectors = [_form_vector(f) for f in forms]
        expected_vectors = [_form_vector(f) for f in candidates]
        forms_ok = (_span_rank(vectors, mode) == len(forms) == _span_rank(expected_vectors, mode)
                    == _span_rank(vectors + expected_vectors, mode))

        a = AlgElem.one(mode) + AlgElem.monomial(3, 0, mode)
        b = AlgElem.monomial(0, 3, mode) - AlgElem.constant(2, mode)
        xy, xy3, x2y2 = (AlgElem.monomial(p, r, mode) for p, r in ((1, 1), (1, 3), (2, 2)))
        converted = to_right_form(alg_mul(a, xy) - alg_mul(b, xy3), alg_mul(b, x2y2))
        expected_right = OneForm(alg_mul(a, xy) - alg_mul(b, xy3).scale(q_power(1, mode)), alg_mul(b, x2y2))
        conversion_ok = converted == expected_right
        details['central_oneform_generators'] = [str(z) for z in central_generators(mode)]
    else:
        forms_ok = not forms
        conversion_ok = True
    details['central_oneforms_match'] = forms_ok
    details['left_right_conversion'] = conversion_ok
    return center_ok and d_zero and forms_ok and conversion_ok, details


# ============================================================================
# MIDDLE-LINEAR METRICS
# ============================================================================

def _zeta3_family(window: ExponentWindow, tau_symmetric: bool) -> List[Metric]:
    """Family members over monomial parameters, kept when they fit the window"""
    zero = AlgElem.zero(ZETA3)
    q = q_power(1, ZETA3)
    reach = max(window.pmax, window.rmax) // 3
    members = []
    for i in range(reach + 1):
        for j in range(reach + 1):
            z = AlgElem.monomial(3 * i, 3 * j, ZETA3)
            choices = [(z, zero, zero, zero), (zero, zero, zero, z)]
            if tau_symmetric:
                choices.append((zero, z.scale(q), z, zero))
            else:
                choices.extend([(zero, z, zero, zero), (zero, zero, z, zero)])
            for params in choices:
                g = ml_family_zeta3(*params)
                if _fits(g, window):
                    members.append(g)
    return members


@verification('verify families')
def verify_middle_linear(config: Optional[Dict[str, Any]] = None) -> Tuple[bool, Dict[str, Any]]:
    """
    No middle-linear metric at generic q on polynomials. The Laurent window
    holds the three-parameter tau-symmetric family plus one solution with
    G12 = -q^-1 G21. Then the cube-root family and its tau-symmetric slice.
    """
    settings = _settings('middle_linear', config)
    details: Dict[str, Any] = {}

    poly_window = ExponentWindow.from_list(settings['generic_polynomial_window'])
    poly = solve_middle_linear(poly_window, GENERIC)
    poly_tau = solve_middle_linear(poly_window, GENERIC, tau_symmetric=True)
    details['generic_polynomial_dimension'] = len(poly)
    details['generic_polynomial_tau_dimension'] = len(poly_tau)
    generic_ok = not poly and not poly_tau

    laurent_window = ExponentWindow.from_list(settings['generic_laurent_window'])
    laurent = solve_middle_linear(laurent_window, GENERIC)
    laurent_tau = solve_middle_linear(laurent_window, GENERIC, tau_symmetric=True)
    one, zero = Scalar.one(GENERIC), Scalar.zero(GENERIC)
    family = [ml_family_laurent(one, zero, zero), ml_family_laurent(zero, one, zero),
              ml_family_laurent(zero, zero, one)]
    skew = ml_laurent_antisymmetric(one)
    family_ok = (len(laurent_tau) == 3 and all(is_middle_linear(g) and is_tau_symmetric(g) for g in family)
                 and metric_span_rank(laurent_tau + family) == 3)
    skew_ok = (is_middle_linear(skew) and not is_tau_symmetric(skew)
               and len(laurent) == 4 and metric_span_rank(laurent + family + [skew]) == 4)
    laurent_ok = family_ok and skew_ok
    details['generic_laurent_dimension'] = len(laurent)
    details['generic_laurent_tau_dimension'] = len(laurent_tau)
    details['laurent_family_matches'] = family_ok
    details['laurent_extra_solution'] = str(skew)

    zeta_window = ExponentWindow.from_list(settings['zeta3_window'])
    solved = solve_middle_linear(zeta_window, ZETA3)
    members = _zeta3_family(zeta_window, tau_symmetric=False)
    family_rank = metric_span_rank(members)
    zeta_ok = (len(solved) == family_rank == metric_span_rank(solved + members)
               and all(is_middle_linear(g) for g in solved))
    details['zeta3_dimension'] = len(solved)
    details['zeta3_family_rank'] = family_rank

    solved_tau = solve_middle_linear(zeta_window, ZETA3, tau_symmetric=True)
    members_tau = _zeta3_family(zeta_window, tau_symmetric=True)
    tau_rank = metric_span_rank(members_tau)
    tau_ok = (len(solved_tau) == tau_rank == metric_span_rank(solved_tau + members_tau)
              and all(is_tau_symmetric(g) for g in solved_tau))
    details['zeta3_tau_dimension'] = len(solved_tau)
    details['zeta3_tau_drop'] = len(solved) - len(solved_tau)
    details['zeta3_tau_drop_expected'] = family_rank - tau_rank
    return generic_ok and laurent_ok and zeta_ok and tau_ok, details


# ============================================================================
# SIGMA-COMPATIBILITY
# ============================================================================

def _admissible_trial(seed: int, index: int, max_degree: int) -> bool:
    gamma = random_admissible_gamma(instance_rng(seed, index), max_degree)
    if not is_admissible(gamma):
        return False
    return is_sigma_compatible(gamma, solve_right_from_left(gamma))


def _violating_trial(seed: int, index: int, max_degree: int) -> bool:
    clause = VIOLATABLE_CLAUSES[index % len(VIOLATABLE_CLAUSES)]
    gamma = random_violating_gamma(instance_rng(seed, index), clause, max_degree)
    failed = [n for n, (_, ok) in enumerate(admissibility_clauses(gamma)) if not ok]
    if failed != [clause]:
        return False
    try:
        solve_right_from_left(gamma)
    except NotAdmissibleError:
        return True
    return False


def rescaled_sigma_check(degree: int) -> Tuple[bool, Dict[str, Any]]:
    """
    With q^2 sigma in place of sigma, no pair of symbols up to the given
    degree is compatible; with sigma itself the zero pair is.
    """
    q2 = q_power(2, ZETA3)
    rescaled = standard_sigma(ZETA3).scaled(q2)
    pair, kernel = sigma_compat_solve(ExponentWindow.square(degree), ZETA3, rescaled)
    standard_pair, _ = sigma_compat_solve(ExponentWindow.square(0), ZETA3, standard_sigma(ZETA3))
    details = {
        'degree': degree,
        'rescaled_solvable': pair is not None,
        'rescaled_kernel_dimension': kernel,
        'standard_solvable': standard_pair is not None,
    }
    return pair is None and standard_pair is not None, details


@verification('demo rescaled-sigma')
def demo_rescaled_sigma(degree: Optional[int] = None,
                        config: Optional[Dict[str, Any]] = None) -> Tuple[bool, Dict[str, Any]]:
    settings = _settings('sigma_compat', config)
    return rescaled_sigma_check(settings['rescaled_sigma_degree'] if degree is None else degree)


@verification('verify sigma-compat')
def verify_sigma_compat(seed: int = 42, n_jobs: int = 1,
                        config: Optional[Dict[str, Any]] = None) -> Tuple[bool, Dict[str, Any]]:
    settings = _settings('sigma_compat', config)
    deg = settings['max_degree']
    admissible = _run_trials(_admissible_trial,
                             [(seed, i, deg) for i in range(settings['admissible_trials'])], n_jobs)
    offset = settings['admissible_trials']
    violating = _run_trials(_violating_trial,
                            [(seed, offset + i, deg) for i in range(settings['violating_trials'])], n_jobs)
    demo_ok, demo = rescaled_sigma_check(settings['rescaled_sigma_degree'])
    details = {
        'admissible_passed': f"{sum(admissible)}/{len(admissible)}",
        'violating_rejected': f"{sum(violating)}/{len(violating)}",
        'rescaled_sigma': demo,
    }
    return all(admissible) and all(violating) and demo_ok, details


# ============================================================================
# WHOLE-BIMODULE CONDITION
# ============================================================================

def _right_from_whole(gamma: Christoffel) -> Christoffel:
    """nabla^R = sigma^-1 nabla^L, the right partner when the condition holds on all 1-forms"""
    inverse = standard_sigma(gamma.mode).inverse()
    return christoffel_from_images([inverse.apply(gamma.image(i)) for i in (XI, ETA)], Side.RIGHT)


def _zeta3_family_trial(seed: int, index: int) -> bool:
    rng = instance_rng(seed, index)
    f = {}
    for i in (XI, ETA):
        for j in (XI, ETA):
            for k in (XI, ETA):
                if rng.random() < 0.5:
                    f[(i, j, k)] = random_central(rng, ZETA3, 3)
    gamma = whole_bimodule_family_zeta3(f)
    return satisfies_whole_bimodule(gamma) and is_sigma_compatible(gamma, _right_from_whole(gamma))


def whole_bimodule_generic_check(nu_values: Sequence[str],
                                 window: ExponentWindow) -> Tuple[bool, Dict[str, Any]]:
    family_ok = []
    for text in nu_values:
        nu = parse_scalar(text, GENERIC)
        family_ok.append(satisfies_whole_bimodule(whole_bimodule_family_generic(nu)))

    particular, basis = whole_bimodule_solve(window, GENERIC)
    reference = whole_bimodule_family_generic(Scalar.one(GENERIC))
    recovered = False
    if particular is not None and len(basis) == 1:
        found = basis[0]
        index = next(iter(reference.gamma))
        mono, c = next(iter(reference[index].coeffs.items()))
        ratio = found[index].coeff(*mono) / c
        recovered = found == reference.scale(ratio)
    details = {
        'nu_values': list(nu_values),
        'family_residuals_zero': family_ok,
        'recovery_window': str(window),
        'solution_dimension': len(basis),
        'recovered_family': recovered,
    }
    return all(family_ok) and recovered, details


def whole_bimodule_zeta3_check(trials: int, seed: int, n_jobs: int) -> Tuple[bool, Dict[str, Any]]:
    one = AlgElem.one(ZETA3)
    units = {christoffel_label(index): satisfies_whole_bimodule(whole_bimodule_family_zeta3({index: one}))
             for index in INDICES}
    unit_ok = all(units.values())
    outcomes = _run_trials(_zeta3_family_trial, [(seed, i) for i in range(trials)], n_jobs)
    details = {'unit_parameters_zero_residuals': units,
               'random_families_passed': f"{sum(outcomes)}/{len(outcomes)}"}
    return unit_ok and all(outcomes), details


@verification('verify whole-bimodule')
def verify_whole_bimodule(seed: int = 42, n_jobs: int = 1, mode: Optional[FieldMode] = None,
                          config: Optional[Dict[str, Any]] = None) -> Tuple[bool, Dict[str, Any]]:
    settings = _settings('whole_bimodule', config)
    passed, details = True, {}
    if mode in (None, GENERIC):
        ok, generic = whole_bimodule_generic_check(settings['generic_nu'],
                                                   ExponentWindow.from_list(settings['recovery_window']))
        passed &= ok
        details['generic'] = generic
    if mode in (None, ZETA3):
        ok, zeta = whole_bimodule_zeta3_check(settings['zeta3_trials'], seed, n_jobs)
        passed &= ok
        details['zeta3'] = zeta
    return passed, details


# ============================================================================
# GAUGE TRANSFORMATIONS
# ============================================================================

def frame_gauge_check(mode: FieldMode = ZETA3) -> Tuple[bool, Dict[str, Any]]:
    """A pure-gauge connection moved by U = (1 x; 0 1) acquires G^1_12 = 1 and is not admissible"""
    U = GaugeMatrix.unitriangular(AlgElem.x(mode))
    flat = Christoffel.zero(mode)
    moved = gauge_transform_frame(U, flat)
    back = gauge_transform_frame(U.inverse(), moved)
    clauses = admissibility_clauses(moved)
    details = {
        'U': U.to_dict(),
        'transformed': {k: v for k, v in moved.to_dict().items() if v != '0'},
        'admissible': all(ok for _, ok in clauses),
        'failed_clauses': [name for name, ok in clauses if not ok],
        'inverse_restores': back == flat,
    }
    passed = (moved[(XI, XI, ETA)] == AlgElem.one(mode)
              and not details['admissible'] and back == flat)
    return passed, details


@verification('connection gauge-demo')
def gauge_demo() -> Tuple[bool, Dict[str, Any]]:
    return frame_gauge_check(ZETA3)


def _automorphism_trial(seed: int, index: int) -> bool:
    rng = instance_rng(seed, index)
    f, f_inv = shear_automorphism(random_central(rng, ZETA3, 3), random_scalar(rng, ZETA3))
    gamma = random_admissible_gamma(rng, 3)
    triple = (gamma, solve_right_from_left(gamma), standard_sigma(ZETA3))
    new_gamma, new_tilde, new_sigma = gauge_transform_bimodule(f, f_inv, triple)
    return is_sigma_compatible(new_gamma, new_tilde, new_sigma)


@verification('verify gauge')
def verify_gauge(seed: int = 42, n_jobs: int = 1,
                 config: Optional[Dict[str, Any]] = None) -> Tuple[bool, Dict[str, Any]]:
    settings = _settings('gauge', config)
    frame_ok, frame = frame_gauge_check(ZETA3)

    rng = instance_rng(seed, 0)
    gamma = random_admissible_gamma(rng, 3)
    triple = (gamma, solve_right_from_left(gamma), standard_sigma(ZETA3))
    identity = BimoduleMap.identity(ZETA3)
    c = Scalar.from_rational(2, 1, ZETA3)
    trivial_ok = (gauge_transform_bimodule(identity, identity, triple) == triple
                  and gauge_transform_bimodule(BimoduleMap.scalar(c), BimoduleMap.scalar(c.inverse()),
                                               triple) == triple)

    outcomes = _run_trials(_automorphism_trial,
                           [(seed, i) for i in range(settings['automorphism_trials'])], n_jobs)
    endomorphisms = bimodule_automorphism_basis(0, GENERIC)
    details = {
        'frame_gauge': frame,
        'identity_and_scalar_maps_trivial': trivial_ok,
        'automorphisms_preserving_compatibility': f"{sum(outcomes)}/{len(outcomes)}",
        'generic_degree0_endomorphisms': len(endomorphisms),
    }
    return frame_ok and trivial_ok and all(outcomes) and len(endomorphisms) == 1, details


# ============================================================================
# METRIC COMPATIBILITY
# ============================================================================

def _compat_trial(seed: int, index: int, max_degree: int) -> Tuple[bool, bool]:
    gamma, gamma_tilde, g = random_compat_triple(instance_rng(seed, index), index % 3, max_degree)
    return compat_over_center(gamma, gamma_tilde, g), metric_compat_residuals(gamma, gamma_tilde, g).satisfied


@verification('compat equivalence-test')
def compat_equivalence_test(trials: Optional[int] = None, seed: int = 42, n_jobs: int = 1,
                            config: Optional[Dict[str, Any]] = None) -> Tuple[bool, Dict[str, Any]]:
    """Compatibility tested only on central 1-forms agrees with the full check"""
    settings = _settings('compat', config)
    trials = settings['equivalence_trials'] if trials is None else trials
    verdicts = _run_trials(_compat_trial, [(seed, i, settings['max_degree']) for i in range(trials)], n_jobs)
    disagreements = [i for i, (center, full) in enumerate(verdicts) if center != full]
    details = {
        'trials': trials,
        'compatible_instances': sum(full for _, full in verdicts),
        'incompatible_instances': sum(not full for _, full in verdicts),
        'disagreements': disagreements,
    }
    return not disagreements, details


@verification('verify compat')
def verify_compat(seed: int = 42, n_jobs: int = 1,
                  config: Optional[Dict[str, Any]] = None) -> Tuple[bool, Dict[str, Any]]:
    flat = Christoffel.zero(ZETA3, Side.LEFT)
    flat_tilde = Christoffel.zero(ZETA3, Side.RIGHT)
    constant = Metric.constant([1, 0, 0, 1], ZETA3)
    flat_ok = metric_compat_residuals(flat, flat_tilde, constant).satisfied and \
        compat_over_center(flat, flat_tilde, constant)

    zero = AlgElem.zero(ZETA3)
    g_x = Metric((AlgElem.x(ZETA3), zero, zero, zero))
    report = metric_compat_residuals(flat, flat_tilde, g_x)
    residual_ok = report.residuals[0][0] == OneForm.xi(ZETA3) and not compat_over_center(flat, flat_tilde, g_x)

    equivalence = compat_equivalence_test(seed=seed, n_jobs=n_jobs, config=config)
    details = {
        'flat_constant_compatible': flat_ok,
        'G11_x_residual': report.to_dict(),
        'equivalence': equivalence.details,
    }
    return flat_ok and residual_ok and equivalence.passed, details


# ============================================================================
# APPENDIX COMMUTATION RULES
# ============================================================================

def _appendix_batch(index: int, max_exponent: int) -> Tuple[str, int, int]:
    """Closed form vs engine vs rewriting for one formula, every exponent 0..max_exponent"""
    name = APPENDIX_FORMULAS[index]
    gen, *legs = name
    legs_idx = [BASIS_NAMES.index(leg) for leg in legs]
    agreed = 0
    for n in range(max_exponent + 1):
        p, r = (n, 0) if gen == 'x' else (0, n)
        ok = True
        for mode in (GENERIC, ZETA3):
            closed = appendix_formula(tuple(name), n, mode)
            a = AlgElem.monomial(p, r, mode)
            if len(legs_idx) == 1:
                engine = left_mul_form(a, OneForm.basis(legs_idx[0], mode))
                oracle = oracle_left_mul_form(p, r, legs_idx[0], mode)
            else:
                engine = left_mul_tensorA(a, TensorOverA.basis(legs_idx[0], legs_idx[1], mode))
                oracle = oracle_left_mul_tensor(p, r, legs_idx[0], legs_idx[1], mode)
            ok = ok and closed == engine == oracle
        agreed += ok
    return ' '.join(name), agreed, max_exponent + 1


def _monomial_trial(seed: int, index: int, max_exponent: int) -> Tuple[Tuple, bool]:
    """x^p y^r on a basis form: engine vs rewriting"""
    rng = instance_rng(seed, index)
    p, r = (int(v) for v in rng.integers(0, max_exponent + 1, size=2))
    j = int(rng.integers(0, 2))
    mode = ZETA3 if rng.random() < 0.5 else GENERIC
    ok = left_mul_form(AlgElem.monomial(p, r, mode), OneForm.basis(j, mode)) == oracle_left_mul_form(p, r, j, mode)
    return (p, r, j, mode.value), ok


def _d_squared_trial(seed: int, index: int) -> bool:
    rng = instance_rng(seed, index)
    mode = ZETA3 if index % 2 else GENERIC
    return differential_form(differential(random_alg(rng, mode, 8, n_terms=4))).is_zero


@verification('verify appendix')
def verify_appendix(seed: int = 42, n_jobs: int = 1,
                    config: Optional[Dict[str, Any]] = None) -> Tuple[bool, Dict[str, Any]]:
    settings = _settings('appendix', config)
    trials, max_exp = settings['monomial_trials'], settings['max_exponent']
    batches = _run_trials(_appendix_batch,
                          [(i, max_exp) for i in range(len(APPENDIX_FORMULAS))], n_jobs)
    base = len(APPENDIX_FORMULAS)
    monomials = _run_trials(_monomial_trial, [(seed, base + i, max_exp) for i in range(trials)], n_jobs)
    base += trials
    d_squared = _run_trials(_d_squared_trial,
                            [(seed, base + i) for i in range(settings['d_squared_trials'])], n_jobs)
    q3_zero = qn_sum(3, ZETA3).is_zero and not qn_sum(3, GENERIC).is_zero
    details = {
        'formulas': {name: f"{agreed}/{total}" for name, agreed, total in batches},
        'formula_exponents_checked': max_exp + 1,
        'monomials_vs_rewriting': f"{sum(ok for _, ok in monomials)}/{len(monomials)}",
        'monomial_instances_distinct': len({key for key, _ in monomials}),
        'Q3_vanishes_at_cube_root': q3_zero,
        'd_squared_zero': f"{sum(d_squared)}/{len(d_squared)}",
    }
    passed = (all(agreed == total for _, agreed, total in batches) and all(ok for _, ok in monomials)
              and all(d_squared) and q3_zero)
    return passed, details


# ============================================================================
# MATRIX GEOMETRY
# ============================================================================

def _mg_trial(seed: int, index: int, m: int, n: int, max_degree: int) -> Dict[str, bool]:
    rng = instance_rng(seed, index)
    geo = mg.MatrixGeometry(m, n)
    central = bool(index % 2)

    G = random_symmetric_grid(rng, geo, max_degree, central=central)
    metric = mg.metric_bijection(G, geo)
    entries_central = all(e.is_central() for row in G for e in row)
    round_trip = (mg.extract_grid(metric) == G and mg.is_tau_symmetric_mg(metric)
                  and mg.is_middle_linear_mg(metric) == entries_central)

    gamma = random_mg_gamma(rng, geo, max_degree)
    gamma_tilde = mg.swap_lower(gamma)
    if rng.random() < 0.5:
        gamma_tilde = perturb_gamma(rng, gamma_tilde, geo)
    residuals_zero = all(mg.tensor_is_zero(T) for T in mg.sigma_compat_residuals_mg(gamma, gamma_tilde, geo))
    whole_zero = residuals_zero and all(mg.tensor_is_zero(T) for T in mg.whole_bimodule_residuals_mg(gamma, geo))
    swap = (mg.sigma_compat_mg(gamma, gamma_tilde) == residuals_zero
            and mg.whole_bimodule_mg(gamma, gamma_tilde) == whole_zero)

    display = mg.metric_compat_mg(gamma, gamma_tilde, G, geo)
    direct = mg.compat_residuals_first_principles(gamma, gamma_tilde, metric)
    compat = display == direct

    omega = mg.MGOneForm([random_matfunc(rng, geo, max_degree) if rng.random() < 0.5 else geo.zero()
                          for _ in range(geo.dim)], geo)
    decomposes = mg.decompose_central(omega)[0]
    return {'round_trip': round_trip, 'swap_predicate': swap, 'compat_display': compat,
            'central_decomposition': decomposes}


def matrixgeo_fixed_checks(geo: mg.MatrixGeometry) -> Dict[str, bool]:
    """Small instances with known answers"""
    checks = {}
    t1 = geo.coordinate(0)
    checks['d_t1_is_theta1'] = mg.differential_mg(t1) == geo.basis_form(0)
    checks['d_central_has_no_inner_part'] = all(
        c.is_zero for c in mg.differential_mg(t1 * t1).c[geo.m:])

    identity = [[geo.identity() if i == j else geo.zero() for j in range(geo.dim)] for i in range(geo.dim)]
    flat = mg.zero_gamma(geo)
    checks['flat_identity_compatible'] = all(
        r.is_zero for row in mg.metric_compat_mg(flat, flat, identity, geo) for r in row)
    shifted = [list(row) for row in identity]
    shifted[0][0] = t1
    residuals = mg.metric_compat_mg(flat, flat, shifted, geo)
    checks['G11_t1_residual_is_theta1'] = residuals[0][0] == geo.basis_form(0) and all(
        residuals[i][j].is_zero for i in range(geo.dim) for j in range(geo.dim) if (i, j) != (0, 0))

    noncentral = [list(row) for row in identity]
    noncentral[0][0] = geo.lam(0)
    checks['noncentral_entry_not_middle_linear'] = not mg.is_middle_linear_mg(mg.metric_bijection(noncentral, geo))
    checks['identity_middle_linear'] = mg.is_middle_linear_mg(mg.metric_bijection(identity, geo))

    asymmetric = [list(row) for row in identity]
    asymmetric[0][1] = t1
    try:
        mg.metric_bijection(asymmetric, geo)
        checks['asymmetric_rejected'] = False
    except NotSymmetricError:
        checks['asymmetric_rejected'] = True

    matrix_gamma = mg.zero_gamma(geo)
    matrix_gamma[0][0][1] = geo.lam(0) * t1
    checks['matrix_symbols_compatible_over_center'] = mg.sigma_compat_mg(matrix_gamma, mg.swap_lower(matrix_gamma))
    checks['matrix_symbols_not_whole_bimodule'] = not mg.whole_bimodule_mg(matrix_gamma, mg.swap_lower(matrix_gamma))
    return checks


@verification('matrixgeo verify')
def verify_matrixgeo(seed: int = 42, n_jobs: int = 1, trials: Optional[int] = None,
                     config: Optional[Dict[str, Any]] = None) -> Tuple[bool, Dict[str, Any]]:
    config = config or get_config()
    session = config['matrixgeo']
    trials = config['verifications']['matrixgeo']['trials'] if trials is None else trials
    m, n, max_degree = session['m'], session['n'], session['max_degree']

    fixed = matrixgeo_fixed_checks(mg.MatrixGeometry(m, n))
    outcomes = _run_trials(_mg_trial, [(seed, i, m, n, max_degree) for i in range(trials)], n_jobs)
    tallies = {key: f"{sum(o[key] for o in outcomes)}/{len(outcomes)}" for key in
               ('round_trip', 'swap_predicate', 'compat_display', 'central_decomposition')}
    details = {'m': m, 'n': n, 'fixed': fixed, 'random': tallies}
    passed = all(fixed.values()) and all(all(o.values()) for o in outcomes)
    return passed, details


# ============================================================================
# ALL
# ============================================================================

def verify_all(seed: int = 42, n_jobs: int = 1,
               config: Optional[Dict[str, Any]] = None) -> List[VerificationResult]:
    """Every group, in declaration order"""
    config = config or get_config()
    return [
        verify_center(ZETA3, config=config),
        verify_middle_linear(config=config),
        verify_sigma_compat(seed, n_jobs, config=config),
        verify_whole_bimodule(seed, n_jobs, config=config),
        verify_gauge(seed, n_jobs, config=config),
        verify_compat(seed, n_jobs, config=config),
        verify_appendix(seed, n_jobs, config=config),
        verify_matrixgeo(seed, n_jobs, config=config),
    ]
