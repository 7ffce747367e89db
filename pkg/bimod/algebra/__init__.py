"""Exact arithmetic on the quantum plane: scalars, linear algebra, the algebra and its 1-forms"""

from .oneforms import OneForm, TensorOverA, TensorOverC, differential, standard_sigma
from .qalgebra import AlgElem, ExponentWindow, PowerMode
from .scalar import FieldMode, Scalar

__all__ = [
    'AlgElem', 'ExponentWindow', 'FieldMode', 'OneForm', 'PowerMode', 'Scalar',
    'TensorOverA', 'TensorOverC', 'differential', 'standard_sigma',
]
