import pytest

from bimod.algebra.oneforms import (
    ETA,
    XI,
    OneForm,
    TensorOverA,
    differential,
    left_mul_form,
    left_mul_tensorA,
    standard_sigma,
)
from bimod.algebra.qalgebra import AlgElem, ExponentWindow
from bimod.algebra.scalar import FieldMode, Scalar
from bimod.analysis.random_instances import (
    VIOLATABLE_CLAUSES,
    instance_rng,
    random_admissible_gamma,
    random_alg,
    random_central,
    random_christoffel,
    random_scalar,
    random_violating_gamma,
)
from bimod.geometry.connection import (
    INDICES,
    BimoduleMap,
    Christoffel,
    GaugeMatrix,
    Side,
    admissibility_clauses,
    bimodule_automorphism_basis,
    check_admissible,
    check_inverse_pair,
    christoffel_label,
    gauge_transform_bimodule,
    gauge_transform_frame,
    is_sigma_compatible,
    nabla_left,
    nabla_right,
    parse_christoffel_label,
    satisfies_whole_bimodule,
    shear_automorphism,
    sigma_compat_residuals,
    solve_right_from_left,
    transform_braiding,
    whole_bimodule_family_generic,
    whole_bimodule_family_zeta3,
    whole_bimodule_solve,
)
from bimod.utils.errors import InverseInvalidError, ModeMismatchError, NotAdmissibleError, NotCentralError

GENERIC = FieldMode.GENERIC_Q
ZETA3 = FieldMode.ZETA3


def test_labels():
    assert christoffel_label((0, 0, 1)) == 'G^1_12'
    assert parse_christoffel_label('G^2_21') == (1, 1, 0)
    for bad in ('G^3_11', 'G1_12', 'G^1_1'):
        with pytest.raises(ValueError):
            parse_christoffel_label(bad)


def test_christoffel_rejects_bad_index():
    with pytest.raises(IndexError):
        Christoffel({(2, 0, 0): AlgElem.one(ZETA3)}, Side.LEFT, ZETA3)


def test_christoffel_rejects_mixed_modes():
    with pytest.raises(ModeMismatchError):
        Christoffel({(0, 0, 0): AlgElem.one(ZETA3), (0, 0, 1): AlgElem.one(GENERIC)}, Side.LEFT, ZETA3)


def test_admissible_connections_have_a_compatible_right_partner(rng):
    for _ in range(3):
        gamma = random_admissible_gamma(rng, 3)
        assert check_admissible(gamma) == (True, [])
        gamma_tilde = solve_right_from_left(gamma)
        assert gamma_tilde.side is Side.RIGHT
        assert is_sigma_compatible(gamma, gamma_tilde)


@pytest.mark.parametrize('clause', VIOLATABLE_CLAUSES)
def test_violating_connections_are_rejected(clause, rng):
    gamma = random_violating_gamma(rng, clause, 3)
    failed = [n for n, (_, ok) in enumerate(admissibility_clauses(gamma)) if not ok]
    assert failed == [clause]
    with pytest.raises(NotAdmissibleError) as exc:
        solve_right_from_left(gamma)
    assert len(exc.value.failed_clauses) == 1


def test_right_from_left_needs_cube_root_mode():
    with pytest.raises(ModeMismatchError):
        solve_right_from_left(Christoffel.zero(GENERIC))


def test_no_sigma_condition_at_generic_q():
    assert sigma_compat_residuals(Christoffel.zero(GENERIC), Christoffel.zero(GENERIC, Side.RIGHT)) == []


def test_generic_whole_bimodule_family():
    for nu in (1, -2, 5):
        assert satisfies_whole_bimodule(whole_bimodule_family_generic(Scalar.from_rational(nu, 1, GENERIC)))
    assert satisfies_whole_bimodule(Christoffel.zero(GENERIC))


def test_generic_whole_bimodule_solution_space():
    particular, basis = whole_bimodule_solve(ExponentWindow.square(3), GENERIC)
    assert particular is not None
    assert len(basis) == 1
    reference = whole_bimodule_family_generic(Scalar.one(GENERIC))
    ratio = basis[0][(XI, XI, XI)].coeff(1, 2) / reference[(XI, XI, XI)].coeff(1, 2)
    assert basis[0] == reference.scale(ratio)


@pytest.mark.parametrize('index', INDICES, ids=christoffel_label)
def test_zeta3_whole_bimodule_family(index):
    assert satisfies_whole_bimodule(whole_bimodule_family_zeta3({index: AlgElem.one(ZETA3)}))
    assert satisfies_whole_bimodule(whole_bimodule_family_zeta3({index: AlgElem.monomial(3, 0, ZETA3)}))


def test_zeta3_family_column_of_f121(mono):
    gamma = whole_bimodule_family_zeta3({(0, 1, 0): AlgElem.one(ZETA3)})
    assert gamma[(XI, XI, XI)] == mono(1, 3, ZETA3, -1)
    assert gamma[(XI, ETA, XI)] == mono(2, 2, ZETA3)
    assert gamma[(ETA, XI, XI)] == mono(0, 4, ZETA3, -1)
    assert satisfies_whole_bimodule(gamma)


def test_zeta3_whole_bimodule_family_needs_central_parameters():
    with pytest.raises(NotCentralError):
        whole_bimodule_family_zeta3({(0, 0, 0): AlgElem.x(ZETA3)})


def test_frame_gauge_produces_non_admissible_connection():
    U = GaugeMatrix.unitriangular(AlgElem.x(ZETA3))
    flat = Christoffel.zero(ZETA3)
    moved = gauge_transform_frame(U, flat)
    assert moved[(XI, XI, ETA)] == AlgElem.one(ZETA3)
    assert not check_admissible(moved)[0]
    assert gauge_transform_frame(U.inverse(), moved) == flat


def test_gauge_matrix_checks_inverse():
    x = AlgElem.x(ZETA3)
    one, zero = AlgElem.one(ZETA3), AlgElem.zero(ZETA3)
    with pytest.raises(InverseInvalidError):
        GaugeMatrix([[one, x], [zero, one]], [[one, x], [zero, one]])
    assert GaugeMatrix.identity(ZETA3).to_dict()['U11'] == '1'


def test_shear_automorphism_preserves_sigma_compatibility(rng):
    f, f_inv = shear_automorphism(random_central(rng, ZETA3, 3), random_scalar(rng, ZETA3))
    assert check_inverse_pair(f, f_inv) == (True, [])
    gamma = random_admissible_gamma(rng, 3)
    triple = (gamma, solve_right_from_left(gamma), standard_sigma(ZETA3))
    new_gamma, new_tilde, new_sigma = gauge_transform_bimodule(f, f_inv, triple)
    assert new_sigma.check_bimodule()[0]
    assert is_sigma_compatible(new_gamma, new_tilde, new_sigma)


def test_identity_and_scalar_maps_act_trivially(rng):
    gamma = random_admissible_gamma(rng, 2)
    triple = (gamma, solve_right_from_left(gamma), standard_sigma(ZETA3))
    identity = BimoduleMap.identity(ZETA3)
    assert gauge_transform_bimodule(identity, identity, triple) == triple
    c = Scalar.from_rational(3, 1, ZETA3)
    assert gauge_transform_bimodule(BimoduleMap.scalar(c), BimoduleMap.scalar(c.inverse()), triple) == triple
    assert transform_braiding(identity, identity, standard_sigma(ZETA3)) == standard_sigma(ZETA3)


def test_shear_needs_central_parameter():
    with pytest.raises(NotCentralError):
        shear_automorphism(AlgElem.y(ZETA3), Scalar.one(ZETA3))


def test_wrong_inverse_is_rejected():
    f, _ = shear_automorphism(AlgElem.one(ZETA3), Scalar.one(ZETA3))
    triple = (Christoffel.zero(ZETA3), Christoffel.zero(ZETA3, Side.RIGHT), standard_sigma(ZETA3))
    with pytest.raises(InverseInvalidError):
        gauge_transform_bimodule(f, f, triple)


def test_generic_degree_zero_endomorphisms_are_scalars():
    basis = bimodule_automorphism_basis(0, GENERIC)
    assert len(basis) == 1
    assert all(m.check_bimodule()[0] for m in basis)


@pytest.mark.parametrize('trial', range(4))
def test_left_connection_obeys_leibniz_rule(qmode, trial):
    rng = instance_rng(11, trial)
    gamma = random_christoffel(rng, qmode, 2)
    a = random_alg(rng, qmode, 2)
    zeta = OneForm(random_alg(rng, qmode, 2), random_alg(rng, qmode, 2))
    expected = TensorOverA.from_forms(differential(a), zeta) + left_mul_tensorA(a, nabla_left(gamma, zeta))
    assert nabla_left(gamma, left_mul_form(a, zeta)) == expected


@pytest.mark.parametrize('trial', range(4))
def test_right_connection_obeys_leibniz_rule(qmode, trial):
    rng = instance_rng(12, trial)
    gamma_tilde = random_christoffel(rng, qmode, 2, Side.RIGHT)
    a = random_alg(rng, qmode, 2)
    zeta = OneForm(random_alg(rng, qmode, 2), random_alg(rng, qmode, 2))
    expected = nabla_right(gamma_tilde, zeta) * a + TensorOverA.from_forms(zeta, differential(a))
    assert nabla_right(gamma_tilde, zeta * a) == expected


def test_right_from_left_single_symbol(mono):
    gamma = Christoffel({(XI, ETA, ETA): mono(2, 0, ZETA3)}, Side.LEFT, ZETA3)
    gamma_tilde = solve_right_from_left(gamma)
    assert gamma_tilde[(XI, ETA, ETA)] == mono(2, 0, ZETA3)
    assert gamma_tilde[(ETA, ETA, ETA)].is_zero
    assert is_sigma_compatible(gamma, gamma_tilde)
