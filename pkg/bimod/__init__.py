"""
Bimodule Connections on the Quantum Plane

Exact symbolic engine for 1-form metrics and left/right connections on the
quantum plane xy = qyx (generic q and q^3 = 1) and on matrix geometries,
with a command-line driver that reproduces each result as a named
verification.
"""

from .algebra.qalgebra import AlgElem, ExponentWindow
from .algebra.scalar import FieldMode, Scalar
from .geometry.connection import Christoffel
from .geometry.metric import Metric
from .utils.config import load_config
from .utils.errors import BimodError

__all__ = ['AlgElem', 'BimodError', 'Christoffel', 'ExponentWindow', 'FieldMode', 'Metric',
           'Scalar', 'load_config']
