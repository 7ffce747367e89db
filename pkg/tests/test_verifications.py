from bimod.algebra.scalar import FieldMode
from bimod.analysis import verifications as V
from bimod.utils.reporting import FAIL, PASS


def test_center_zeta3(small_config):
    result = V.verify_center(FieldMode.ZETA3, config=small_config)
    assert result.status == PASS, result.details
    assert result.details['center_dimension'] == 4
    assert result.details['central_oneform_dimension'] == 5


def test_center_generic(small_config):
    result = V.verify_center(FieldMode.GENERIC_Q, bound=4, config=small_config)
    assert result.passed, result.details
    assert result.details['center_dimension'] == 1
    assert result.details['central_oneform_dimension'] == 0


def test_middle_linear_families(small_config):
    result = V.verify_middle_linear(config=small_config)
    assert result.passed, result.details
    assert result.details['generic_polynomial_dimension'] == 0
    assert result.details['generic_laurent_dimension'] == 4
    assert result.details['generic_laurent_tau_dimension'] == 3
    assert result.details['laurent_family_matches']
    assert result.details['zeta3_tau_drop'] == result.details['zeta3_tau_drop_expected']


def test_sigma_compat(small_config):
    result = V.verify_sigma_compat(seed=7, config=small_config)
    assert result.passed, result.details
    assert result.details['admissible_passed'] == '4/4'


def test_rescaled_sigma_has_no_compatible_pair():
    passed, details = V.rescaled_sigma_check(2)
    assert passed
    assert not details['rescaled_solvable']
    assert details['standard_solvable']


def test_whole_bimodule(small_config):
    result = V.verify_whole_bimodule(config=small_config)
    assert result.passed, result.details
    units = result.details['zeta3']['unit_parameters_zero_residuals']
    assert len(units) == 8 and all(units.values())


def test_whole_bimodule_generic_only(small_config):
    result = V.verify_whole_bimodule(mode=FieldMode.GENERIC_Q, config=small_config)
    assert result.passed
    assert result.details['generic']['solution_dimension'] == 1


def test_gauge(small_config):
    result = V.verify_gauge(config=small_config)
    assert result.passed, result.details
    assert result.details['generic_degree0_endomorphisms'] == 1


def test_gauge_demo():
    result = V.gauge_demo()
    assert result.name == 'connection gauge-demo'
    assert result.passed
    assert result.details['transformed'] == {'G^1_12': '1'}


def test_compat(small_config):
    assert V.verify_compat(config=small_config).passed


def test_equivalence_test_parallel_matches_serial(small_config):
    serial = V.compat_equivalence_test(6, seed=3, n_jobs=1, config=small_config)
    parallel = V.compat_equivalence_test(6, seed=3, n_jobs=2, config=small_config)
    assert serial.passed
    assert serial.details == parallel.details


def test_appendix(small_config):
    result = V.verify_appendix(config=small_config)
    assert result.passed, result.details
    assert result.details['formula_exponents_checked'] == 6
    assert all(v == '6/6' for v in result.details['formulas'].values())
    assert 1 <= result.details['monomial_instances_distinct'] <= 10


def test_matrixgeo(small_config):
    result = V.verify_matrixgeo(config=small_config)
    assert result.passed, result.details
    assert result.details['random']['round_trip'] == '3/3'


def test_all(small_config):
    results = V.verify_all(seed=1, config=small_config)
    assert len(results) == 8
    assert [r.status for r in results] == [PASS] * 8
    assert FAIL not in {r.status for r in results}
