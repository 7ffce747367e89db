"""
Exact Linear Algebra

Gauss-Jordan elimination over any Scalar field mode:
1. Rows are kept sparse (column -> Scalar) so block-structured systems stay cheap
2. Pivoting is deterministic: rows in insertion order, pivot on the first nonzero column
3. The echelon form is fully reduced, so nullspace vectors come out canonical

Every solver in the package funnels its constraint system through here.
"""

import logging
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .scalar import FieldMode, Scalar
from ..utils.errors import ModeMismatchError

logger = logging.getLogger(__name__)

SparseRow = Dict[int, Scalar]


class ExactMatrix:
    """
    A rows x cols grid of exact Scalars in a single field mode.

    Key Features:
    - Sparse row storage, zero entries never stored
    - Reduced row echelon form computed once and cached
    - nullspace / rank / solve built on the cached echelon form
    """

    def __init__(self, rows: Sequence[SparseRow], ncols: int, mode: FieldMode):
        self.mode = mode
        self.ncols = ncols
        self.rows: List[SparseRow] = []
        for row in rows:
            clean = {}
            for col, value in row.items():
                if not 0 <= col < ncols:
                    raise IndexError(f"column {col} outside 0..{ncols - 1}")
                if value.mode is not mode:
                    raise ModeMismatchError(f"entry in {value.mode.value} mode, matrix is {mode.value}")
                if value:
                    clean[col] = value
            self.rows.append(clean)
        self._rref: Optional[Tuple[List[int], List[SparseRow]]] = None

    @classmethod
    def from_dense(cls, grid: Sequence[Sequence[Scalar]], mode: FieldMode) -> 'ExactMatrix':
        ncols = len(grid[0]) if grid else 0
        for row in grid:
            if len(row) != ncols:
                raise ValueError("ExactMatrix rows must all have the same length")
        return cls([{j: v for j, v in enumerate(row)} for row in grid], ncols, mode)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), self.ncols

    def to_dense(self) -> List[List[Scalar]]:
        zero = Scalar.zero(self.mode)
        return [[row.get(j, zero) for j in range(self.ncols)] for row in self.rows]

    def matvec(self, v: Sequence[Scalar]) -> List[Scalar]:
        zero = Scalar.zero(self.mode)
        out = []
        for row in self.rows:
            total = zero
            for col, value in row.items():
                total = total + value * v[col]
            out.append(total)
        return out

    # ------------------------------------------------------------------
    # Elimination
    # ------------------------------------------------------------------

    def rref(self) -> Tuple[List[int], List[SparseRow]]:
        """
        Reduced row echelon form.

        Returns:
            Tuple of (pivot_columns, pivot_rows); pivot_rows[k] has a 1 at
            pivot_columns[k] and zeros at every other pivot column.
        """
        if self._rref is None:
            self._rref = _gauss_jordan(self.rows)
            logger.debug("rref of %dx%d %s matrix: rank %d",
                         len(self.rows), self.ncols, self.mode.value, len(self._rref[0]))
        return self._rref

    def rank(self) -> int:
        return len(self.rref()[0])

    def nullspace(self) -> List[List[Scalar]]:
        """
        Basis of {v : Mv = 0}, one vector per free column in ascending order.

        The vector for free column f has a 1 at f, zeros at the other free
        columns and minus the echelon entries at the pivot columns.
        """
        pivots, prows = self.rref()
        pivot_set = set(pivots)
        zero = Scalar.zero(self.mode)
        one = Scalar.one(self.mode)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = [zero] * self.ncols
            v[free] = one
            for p, row in zip(pivots, prows):
                entry = row.get(free)
                if entry is not None:
                    v[p] = -entry
            basis.append(v)
        return basis

    def solve(self, b: Sequence[Scalar]) -> Optional[List[Scalar]]:
        """One solution of Mv = b (free variables set to zero), or None"""
        if len(b) != len(self.rows):
            raise ValueError(f"right-hand side has {len(b)} entries, matrix has {len(self.rows)} rows")
        augmented = []
        for row, rhs in zip(self.rows, b):
            new_row = dict(row)
            if rhs:
                new_row[self.ncols] = rhs
            augmented.append(new_row)
        pivots, prows = _gauss_jordan(augmented)
        zero = Scalar.zero(self.mode)
        v = [zero] * self.ncols
        for p, row in zip(pivots, prows):
            if p == self.ncols:
                return None
            v[p] = row.get(self.ncols, zero)
        return v


def _gauss_jordan(rows: Sequence[SparseRow]) -> Tuple[List[int], List[SparseRow]]:
    pivots: List[int] = []
    prows: List[SparseRow] = []
    pivot_index: Dict[int, int] = {}

    for source in rows:
        row = dict(source)
        # reduce against existing pivots; pivot rows carry no other pivot columns
        for col in [c for c in row if c in pivot_index]:
            factor = row.get(col)
            if factor is None:
                continue
            _axpy(row, -factor, prows[pivot_index[col]])
        if not row:
            continue

        p = min(row)
        inv = row[p].inverse()
        row = {c: v * inv for c, v in row.items()}

        for other in prows:
            factor = other.get(p)
            if factor is not None:
                _axpy(other, -factor, row)

        pivot_index[p] = len(prows)
        pivots.append(p)
        prows.append(row)

    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    return [pivots[k] for k in order], [prows[k] for k in order]


def _axpy(target: SparseRow, factor: Scalar, source: SparseRow) -> None:
    """target += factor * source, in place, dropping zeros"""
    for col, value in source.items():
        updated = target.get(col)
        updated = factor * value if updated is None else updated + factor * value
        if updated:
            target[col] = updated
        else:
            target.pop(col, None)


# ============================================================================
# COLUMN-IMAGE SYSTEMS
# ============================================================================

def _rows_from_columns(columns: Sequence[Dict[Hashable, Scalar]],
                       extra: Optional[Dict[Hashable, Scalar]] = None) -> Tuple[List[SparseRow], List[Hashable]]:
    """Transpose column images keyed by arbitrary equation labels into sparse rows"""
    by_key: Dict[Hashable, SparseRow] = {}
    for j, image in enumerate(columns):
        for key, value in image.items():
            if value:
                by_key.setdefault(key, {})[j] = value
    if extra:
        for key, value in extra.items():
            if value:
                by_key.setdefault(key, {})[len(columns)] = value
    keys = sorted(by_key, key=repr)
    return [by_key[k] for k in keys], keys


def nullspace(M: ExactMatrix) -> List[List[Scalar]]:
    return M.nullspace()


def rank(M: ExactMatrix) -> int:
    return M.rank()


def column_nullspace(columns: Sequence[Dict[Hashable, Scalar]], mode: FieldMode) -> List[List[Scalar]]:
    """
    Kernel of the linear map sending unknown j to the sparse vector columns[j].

    Args:
        columns: image of each unknown, keyed by equation label
        mode: scalar field mode

    Returns:
        Basis of coefficient vectors c with sum_j c_j * columns[j] = 0
    """
    rows, _ = _rows_from_columns(columns)
    return ExactMatrix(rows, len(columns), mode).nullspace()


def affine_solve(columns: Sequence[Dict[Hashable, Scalar]],
                 constant: Dict[Hashable, Scalar],
                 mode: FieldMode) -> Tuple[Optional[List[Scalar]], List[List[Scalar]]]:
    """
    Solve sum_j c_j * columns[j] + constant = 0.

    Returns:
        Tuple of (particular solution or None, homogeneous basis)
    """
    n = len(columns)
    negated = {k: -v for k, v in constant.items()}
    rows, _ = _rows_from_columns(columns, negated)
    pivots, prows = _gauss_jordan(rows)
    zero = Scalar.zero(mode)

    particular: Optional[List[Scalar]] = [zero] * n
    for p, row in zip(pivots, prows):
        if p == n:
            particular = None
            break
        particular[p] = row.get(n, zero)

    homogeneous = column_nullspace(columns, mode)
    logger.debug("affine system with %d unknowns: %s, kernel dimension %d",
                 n, 'solvable' if particular is not None else 'inconsistent', len(homogeneous))
    return particular, homogeneous
