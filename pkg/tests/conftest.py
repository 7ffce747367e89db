"""Shared fixtures: field modes, quantum-plane factories, a seeded rng and a reduced config"""

import copy

import numpy as np
import pytest

from bimod.algebra.qalgebra import AlgElem
from bimod.algebra.scalar import FieldMode, q_power
from bimod.utils.config import DEFAULT_CONFIG

GENERIC = FieldMode.GENERIC_Q
ZETA3 = FieldMode.ZETA3


@pytest.fixture(params=[GENERIC, ZETA3], ids=['generic', 'zeta3'])
def qmode(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def mono():
    """mono(p, r, mode, c=1) -> c x^p y^r"""
    def build(p, r, mode=ZETA3, c=1):
        return AlgElem.monomial(p, r, mode, coeff=c)
    return build


@pytest.fixture
def q():
    """q(k, mode) -> q^k"""
    def build(k, mode=ZETA3):
        return q_power(k, mode)
    return build


@pytest.fixture
def small_config():
    """Default configuration with every randomized suite cut down"""
    config = copy.deepcopy(DEFAULT_CONFIG)
    v = config['verifications']
    v['center'].update(bound=3, oneform_bound=4)
    v['middle_linear'].update(generic_polynomial_window=[0, 4, 0, 4],
                              zeta3_window=[0, 5, 0, 5])
    v['sigma_compat'].update(admissible_trials=4, violating_trials=4, max_degree=3,
                             rescaled_sigma_degree=2)
    v['whole_bimodule'].update(zeta3_trials=2)
    v['gauge'].update(automorphism_trials=2)
    v['compat'].update(equivalence_trials=6, max_degree=2)
    v['appendix'].update(monomial_trials=10, max_exponent=5, d_squared_trials=6)
    v['matrixgeo'].update(trials=3)
    config['matrixgeo'].update(m=1, n=2, max_degree=1)
    return config
