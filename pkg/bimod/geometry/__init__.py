"""Metrics, connections and their compatibility conditions"""

from .compat import metric_compat_residuals
from .connection import Christoffel, Side, solve_right_from_left
from .matrixgeo import MatrixGeometry
from .metric import Metric, solve_middle_linear

__all__ = [
    'Christoffel', 'MatrixGeometry', 'Metric', 'Side',
    'metric_compat_residuals', 'solve_middle_linear', 'solve_right_from_left',
]
