"""
Exact rational linear algebra.

Matrices are immutable values over ``fractions.Fraction``. Elimination is
plain rational Gauss-Jordan with leading-entry pivoting on sparse working
rows; ``to_float`` is the single place where exact values become doubles.
"""

from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.exceptions import NumericRangeError, ParseError, UsageError

Scalar = Fraction
Number = Union[int, Fraction, str]
SparseRow = Dict[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(value: Number) -> Fraction:
    """Convert an int, Fraction or "p/q" string to an exact scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise UsageError("Booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"Invalid rational literal: {value!r}") from exc
    raise UsageError(f"Inexact value {value!r} cannot enter exact arithmetic")


def format_scalar(value: Fraction) -> str:
    """Serialize a scalar as "p" or "p/q"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Mat:
    """Dense immutable rational matrix stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __init__(self, rows: int, cols: int, entries: Iterable[Number]):
        values = tuple(to_scalar(v) for v in entries)
        if rows < 0 or cols < 0 or len(values) != rows * cols:
            raise UsageError(
                f"Matrix of shape {rows}x{cols} needs {rows * cols} entries, got {len(values)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", values)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Mat is immutable")

    # Constructors

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]], cols: int = 0) -> "Mat":
        if not rows:
            return cls(0, cols, [])
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise UsageError("Ragged rows")
        return cls(len(rows), width, [v for r in rows for v in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Number]], rows: int) -> "Mat":
        if any(len(c) != rows for c in columns):
            raise UsageError("Column length mismatch")
        return cls(rows, len(columns), [columns[j][i] for i in range(rows) for j in range(len(columns))])

    @classmethod
    def from_function(cls, rows: int, cols: int, fn: Callable[[int, int], Number]) -> "Mat":
        return cls(rows, cols, [fn(i, j) for i in range(rows) for j in range(cols)])

    @classmethod
    def from_sparse(cls, rows: int, cols: int, data: Dict[Tuple[int, int], Fraction]) -> "Mat":
        values = [ZERO] * (rows * cols)
        for (i, j), v in data.items():
            values[i * cols + j] = v
        return cls(rows, cols, values)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls.from_function(n, n, lambda i, j: 1 if i == j else 0)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def column(cls, values: Sequence[Number]) -> "Mat":
        return cls(len(values), 1, values)

    @classmethod
    def diag(cls, values: Sequence[Number]) -> "Mat":
        n = len(values)
        return cls.from_function(n, n, lambda i, j: values[i] if i == j else 0)

    @classmethod
    def unit(cls, n: int, i: int) -> "Mat":
        return cls.from_function(n, 1, lambda r, _: 1 if r == i else 0)

    # Access

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"Index {key} outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def column_mats(self) -> List["Mat"]:
        return [Mat.column(self.col(j)) for j in range(self.cols)]

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def vector(self) -> Tuple[Fraction, ...]:
        """Entries of a column or row vector."""
        if self.cols != 1 and self.rows != 1:
            raise UsageError(f"Expected a vector, got shape {self.shape}")
        return self.entries

    def sparse_col(self, j: int) -> SparseRow:
        return {i: v for i, v in enumerate(self.col(j)) if v}

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Mat":
        return Mat.from_function(self.cols, self.rows, lambda i, j: self[j, i])

    # Arithmetic

    def _same_shape(self, other: "Mat", op: str) -> None:
        if self.shape != other.shape:
            raise UsageError(f"Shape mismatch in {op}: {self.shape} vs {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        self._same_shape(other, "addition")
        return Mat(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_shape(other, "subtraction")
        return Mat(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, s: Number) -> "Mat":
        q = to_scalar(s)
        return Mat(self.rows, self.cols, [q * a for a in self.entries])

    def __rmul__(self, s: Number) -> "Mat":
        return self.scale(s)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise UsageError(f"Shape mismatch in product: {self.shape} @ {other.shape}")
        out: List[Fraction] = []
        other_cols = [other.col(j) for j in range(other.cols)]
        for i in range(self.rows):
            r = self.row(i)
            nz = [(k, a) for k, a in enumerate(r) if a]
            for c in other_cols:
                out.append(sum((a * c[k] for k, a in nz), ZERO))
        return Mat(self.rows, other.cols, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_scalar(v) for v in self.row(i)) for i in range(self.rows))
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    # Structure

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), ZERO)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat.from_function(len(rows), len(cols), lambda i, j: self[rows[i], cols[j]])

    def power(self, k: int) -> "Mat":
        if not self.is_square() or k < 0:
            raise UsageError("Power needs a square matrix and k >= 0")
        out = Mat.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out


def hstack(mats: Sequence[Mat], rows: Optional[int] = None) -> Mat:
    """Concatenate matrices side by side."""
    if not mats:
        return Mat.zero(rows or 0, 0)
    height = mats[0].rows
    if any(m.rows != height for m in mats):
        raise UsageError("hstack row mismatch")
    width = sum(m.cols for m in mats)
    return Mat(height, width, [v for i in range(height) for m in mats for v in m.row(i)])


def vstack(mats: Sequence[Mat], cols: Optional[int] = None) -> Mat:
    """Stack matrices vertically."""
    if not mats:
        return Mat.zero(0, cols or 0)
    width = mats[0].cols
    if any(m.cols != width for m in mats):
        raise UsageError("vstack column mismatch")
    return Mat(sum(m.rows for m in mats), width, [v for m in mats for v in m.entries])


def block_diag(mats: Sequence[Mat]) -> Mat:
    """Block-diagonal assembly."""
    n = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    data: Dict[Tuple[int, int], Fraction] = {}
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                if m[i, j]:
                    data[(r0 + i, c0 + j)] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return Mat.from_sparse(n, c, data)


class RowReducer:
    """Incremental reduced row echelon form over sparse rational rows.

    Rows are kept fully reduced: every stored row has pivot entry 1 and no
    other stored row has a nonzero in its pivot column.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: Dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, row: SparseRow) -> SparseRow:
        """Remainder of a row after elimination against the stored pivots."""
        work = {k: v for k, v in row.items() if v}
        for p in [c for c in work if c in self.pivot_rows]:
            coef = work.get(p)
            if not coef:
                continue
            for k, v in self.pivot_rows[p].items():
                nv = work.get(k, ZERO) - coef * v
                if nv:
                    work[k] = nv
                else:
                    work.pop(k, None)
        return work

    def add(self, row: SparseRow) -> bool:
        """Insert a row; returns True when it raised the rank."""
        work = self.reduce(row)
        if not work:
            return False
        pivot = min(work)
        inv = ONE / work[pivot]
        work = {k: v * inv for k, v in work.items()}
        for other in self.pivot_rows.values():
            coef = other.get(pivot)
            if coef:
                for k, v in work.items():
                    nv = other.get(k, ZERO) - coef * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        self.pivot_rows[pivot] = work
        return True

    def free_columns(self, ncols: Optional[int] = None) -> List[int]:
        return [c for c in range(ncols if ncols is not None else self.ncols) if c not in self.pivot_rows]

    def nullspace(self, ncols: Optional[int] = None) -> List[SparseRow]:
        """Basis of the kernel, one vector per free column."""
        basis: List[SparseRow] = []
        for f in self.free_columns(ncols):
            vec: SparseRow = {f: ONE}
            for p, prow in self.pivot_rows.items():
                v = prow.get(f)
                if v:
                    vec[p] = -v
            basis.append(vec)
        return basis


def _sparse_rows(A: Mat) -> Iterator[SparseRow]:
    for i in range(A.rows):
        yield {j: v for j, v in enumerate(A.row(i)) if v}


def rref(A: Mat) -> Tuple[Mat, List[int]]:
    """Reduced row echelon form and pivot columns."""
    red = RowReducer(A.cols)
    for row in _sparse_rows(A):
        red.add(row)
    pivots = sorted(red.pivot_rows)
    data = {(i, k): v for i, p in enumerate(pivots) for k, v in red.pivot_rows[p].items()}
    return Mat.from_sparse(len(pivots), A.cols, data), pivots


def rank(A: Mat) -> int:
    """Exact rank."""
    red = RowReducer(A.cols)
    for row in _sparse_rows(A):
        red.add(row)
    return red.rank


def nullspace(A: Mat) -> List[Mat]:
    """Exact basis of {x : A x = 0} as column matrices."""
    red = RowReducer(A.cols)
    for row in _sparse_rows(A):
        red.add(row)
    return [Mat.from_sparse(A.cols, 1, {(k, 0): v for k, v in vec.items()}) for vec in red.nullspace()]


def solve(A: Mat, b: Mat) -> Optional[Mat]:
    """Some exact x with A x = b, or None when the system is inconsistent."""
    if b.cols != 1 or A.rows != b.rows:
        raise UsageError(f"solve needs b of shape ({A.rows}, 1), got {b.shape}")
    n = A.cols
    red = RowReducer(n + 1)
    for i in range(A.rows):
        row = {j: v for j, v in enumerate(A.row(i)) if v}
        if b[i, 0]:
            row[n] = b[i, 0]
        red.add(row)
    if n in red.pivot_rows:
        return None
    x = [ZERO] * n
    for p, prow in red.pivot_rows.items():
        x[p] = prow.get(n, ZERO)
    return Mat.column(x)


def solve_matrix(A: Mat, B: Mat) -> Optional[Mat]:
    """Column-wise solve of A X = B."""
    cols = []
    for j in range(B.cols):
        x = solve(A, Mat.column(B.col(j)))
        if x is None:
            return None
        cols.append(x.col(0))
    return Mat.from_columns(cols, A.cols) if cols else Mat.zero(A.cols, 0)


def inverse(A: Mat) -> Mat:
    """Exact inverse of a square matrix."""
    if not A.is_square():
        raise UsageError(f"Inverse of non-square matrix {A.shape}")
    X = solve_matrix(A, Mat.identity(A.rows))
    if X is None or rank(A) < A.rows:
        raise UsageError("Matrix is singular")
    return X


def column_space(A: Mat) -> Mat:
    """Independent columns of A spanning its image (ordered by first appearance)."""
    red = RowReducer(A.rows)
    keep = []
    for j in range(A.cols):
        if red.add(A.sparse_col(j)):
            keep.append(j)
    return A.submatrix(list(range(A.rows)), keep)


def span_of(vectors: Sequence[Mat], dim: int) -> Mat:
    """Basis matrix of the span of column vectors in a dim-space."""
    if not vectors:
        return Mat.zero(dim, 0)
    return column_space(hstack(list(vectors)))


def contains(U: Mat, V: Mat) -> bool:
    """True iff span(V) is contained in span(U)."""
    if V.cols == 0:
        return True
    return rank(hstack([U, V])) == rank(U)


def same_span(U: Mat, V: Mat) -> bool:
    """Equality of column spans decided by rank tests."""
    return contains(U, V) and contains(V, U)


def intersection(U: Mat, V: Mat) -> Mat:
    """Basis of span(U) ∩ span(V)."""
    if U.cols == 0 or V.cols == 0:
        return Mat.zero(U.rows, 0)
    U = column_space(U)
    V = column_space(V)
    kernel = nullspace(hstack([U, -V]))
    if not kernel:
        return Mat.zero(U.rows, 0)
    coeffs = hstack(kernel)
    top = coeffs.submatrix(list(range(U.cols)), list(range(coeffs.cols)))
    return column_space(U @ top)


def coordinates(basis: Mat, v: Mat) -> Optional[Mat]:
    """Coordinates of v in an independent basis, or None if v is outside the span."""
    return solve(basis, v)


def orthogonal_complement(U: Mat, gram: Mat) -> Mat:
    """Basis of {x : <u, x> = 0 for all u in span(U)}."""
    if U.cols == 0:
        return Mat.identity(gram.rows)
    kernel = nullspace(U.T @ gram)
    return hstack(kernel) if kernel else Mat.zero(gram.rows, 0)


def restrict_form(gram: Mat, U: Mat) -> Mat:
    """Gram matrix of a bilinear form restricted to span(U) in the basis U."""
    return U.T @ gram @ U


def inertia(gram: Mat) -> Tuple[int, int, int]:
    """(negative, zero, positive) counts of a symmetric form via exact congruence."""
    if not gram.is_symmetric():
        raise UsageError("Inertia of a non-symmetric matrix")
    n = gram.rows
    a = gram.to_rows()
    neg = pos = 0
    active = list(range(n))
    while active:
        pivot = next((i for i in active if a[i][i]), None)
        if pivot is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # congruence e_i -> e_i + e_j makes the diagonal entry 2 a_ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            pivot = i
        d = a[pivot][pivot]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(pivot)
        for i in active:
            f = a[i][pivot] / d
            if f:
                for k in range(n):
                    a[i][k] -= f * a[pivot][k]
        for i in active:
            a[pivot][i] = ZERO
            a[i][pivot] = ZERO
    return neg, n - neg - pos, pos


def is_nondegenerate(gram: Mat) -> bool:
    return rank(gram) == gram.rows


def cayley_transform(K: Mat) -> Mat:
    """(Id - K)(Id + K)^-1; orthogonal for the gram making K antisymmetric."""
    n = K.rows
    return (Mat.identity(n) - K) @ inverse(Mat.identity(n) + K)


def to_float(M: Mat, context: str) -> np.ndarray:
    """Nearest-double conversion of every entry; the only rational to float boundary."""
    try:
        values = [float(v) for v in M.entries]
    except OverflowError as exc:
        raise NumericRangeError(
            f"Entry of {context} exceeds double range", {"context": context}
        ) from exc
    return np.array(values, dtype=float).reshape(M.rows, M.cols)


def to_float_scalar(value: Fraction, context: str) -> float:
    """Scalar form of ``to_float``."""
    return float(to_float(Mat(1, 1, [value]), context)[0, 0])
