"""Dense matrices over pluggable scalar backends.

Implements the deletion and selector constructions (single row/column
deletion, deleted row/column vectors, unit selector vectors) together with
determinants, minors, adjugates and inverses.  Public indices are 1-based.

Determinants use fraction-free (Bareiss) elimination on the exact backend and
partial-pivoting elimination on the float backend; cofactor expansion exists
only as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    IndexOutOfRange,
    MatrixTooSmall,
    NotSquare,
    SelectorUndefined,
    SingularMatrix,
)
from .scalars import EXACT, FLOAT

# Float elimination treats a pivot smaller than this times the largest
# initial |entry| as singular.
PIVOT_FLOOR_FACTOR = 1e-13


class DenseMatrix:
    """Immutable row-major dense matrix over a scalar backend."""

    __slots__ = ("n_rows", "n_cols", "entries", "backend")

    def __init__(self, n_rows: int, n_cols: int, entries: Sequence, backend=EXACT):
        if n_rows <= 0 or n_cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        entries = tuple(entries)
        if len(entries) != n_rows * n_cols:
            raise ValueError(
                f"expected {n_rows * n_cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "n_rows", n_rows)
        object.__setattr__(self, "n_cols", n_cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "backend", backend)

    def __setattr__(self, name, value):
        raise AttributeError("DenseMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], backend=EXACT) -> "DenseMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("matrix needs at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("all rows must have the same length")
        flat = [backend.coerce(v) for r in rows for v in r]
        return cls(len(rows), width, flat, backend)

    @classmethod
    def identity(cls, n: int, backend=EXACT) -> "DenseMatrix":
        one, zero = backend.one, backend.zero
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)], backend)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int, backend=EXACT) -> "DenseMatrix":
        return cls(n_rows, n_cols, [backend.zero] * (n_rows * n_cols), backend)

    # -- queries ----------------------------------------------------------

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def require_square(self) -> int:
        if not self.is_square:
            raise NotSquare(f"matrix is {self.n_rows}x{self.n_cols}")
        return self.n_rows

    def at(self, i: int, j: int):
        """Entry at row i, column j (1-based, bounds-checked)."""
        if not (1 <= i <= self.n_rows and 1 <= j <= self.n_cols):
            raise IndexOutOfRange(
                f"index ({i},{j}) outside 1..{self.n_rows} x 1..{self.n_cols}"
            )
        return self.entries[(i - 1) * self.n_cols + (j - 1)]

    def row(self, i: int) -> tuple:
        if not 1 <= i <= self.n_rows:
            raise IndexOutOfRange(f"row {i} outside 1..{self.n_rows}")
        base = (i - 1) * self.n_cols
        return self.entries[base : base + self.n_cols]

    def col(self, j: int) -> tuple:
        if not 1 <= j <= self.n_cols:
            raise IndexOutOfRange(f"column {j} outside 1..{self.n_cols}")
        return self.entries[j - 1 :: self.n_cols]

    def rows_as_lists(self) -> list[list]:
        return [list(self.row(i)) for i in range(1, self.n_rows + 1)]

    # -- algebra ----------------------------------------------------------

    def transpose(self) -> "DenseMatrix":
        flat = [self.entries[r * self.n_cols + c] for c in range(self.n_cols) for r in range(self.n_rows)]
        return DenseMatrix(self.n_cols, self.n_rows, flat, self.backend)

    def add(self, other: "DenseMatrix") -> "DenseMatrix":
        self._check_same_shape(other)
        return DenseMatrix(
            self.n_rows, self.n_cols,
            [a + b for a, b in zip(self.entries, other.entries)], self.backend,
        )

    def sub(self, other: "DenseMatrix") -> "DenseMatrix":
        self._check_same_shape(other)
        return DenseMatrix(
            self.n_rows, self.n_cols,
            [a - b for a, b in zip(self.entries, other.entries)], self.backend,
        )

    def scale(self, s) -> "DenseMatrix":
        return DenseMatrix(self.n_rows, self.n_cols, [s * e for e in self.entries], self.backend)

    def matmul(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError("inner dimensions do not match")
        rows = self.rows_as_lists()
        cols = [other.col(j) for j in range(1, other.n_cols + 1)]
        flat = [sum(a * b for a, b in zip(r, c)) for r in rows for c in cols]
        return DenseMatrix(self.n_rows, other.n_cols, flat, self.backend)

    def _check_same_shape(self, other: "DenseMatrix") -> None:
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            raise ValueError("shape mismatch")

    # -- conversions ------------------------------------------------------

    def to_float(self) -> "DenseMatrix":
        """Render onto the float backend (correctly rounded per entry)."""
        if self.backend is FLOAT:
            return self
        return DenseMatrix(self.n_rows, self.n_cols, [float(e) for e in self.entries], FLOAT)

    def to_exact(self) -> "DenseMatrix":
        """Lift onto the exact backend; float entries convert exactly."""
        if self.backend is EXACT:
            return self
        return DenseMatrix(self.n_rows, self.n_cols, [Fraction(e) for e in self.entries], EXACT)

    # -- dunder -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DenseMatrix)
            and self.backend.name == other.backend.name
            and (self.n_rows, self.n_cols) == (other.n_rows, other.n_cols)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.backend.name, self.n_rows, self.n_cols, self.entries))

    def __repr__(self) -> str:
        rows = "; ".join(
            " ".join(self.backend.format(e) for e in self.row(i))
            for i in range(1, self.n_rows + 1)
        )
        return f"DenseMatrix({self.n_rows}x{self.n_cols} {self.backend.name} [{rows}])"


@dataclass(frozen=True)
class DeletedVector:
    """Length n-1 vector produced by deleting one entry of a row or column.

    ``source_index`` records which 1-based index was deleted (for row/column
    extractions) or which index the selector is relative to.
    """

    entries: tuple
    source_index: int
    orientation: str  # "row" or "column"

    def __len__(self) -> int:
        return len(self.entries)

    def dot(self, other) -> object:
        other_entries = other.entries if isinstance(other, DeletedVector) else tuple(other)
        if len(self.entries) != len(other_entries):
            raise ValueError("dimension mismatch in dot product")
        return sum(a * b for a, b in zip(self.entries, other_entries))


def mat_vec(M: DenseMatrix, v) -> tuple:
    """M @ v for a plain entries sequence or DeletedVector; returns a tuple."""
    entries = v.entries if isinstance(v, DeletedVector) else tuple(v)
    if M.n_cols != len(entries):
        raise ValueError("dimension mismatch in mat_vec")
    return tuple(
        sum(a * b for a, b in zip(M.row(i), entries)) for i in range(1, M.n_rows + 1)
    )


def delete_row_col(B: DenseMatrix, i: int, j: int) -> DenseMatrix:
    """B with row i and column j removed (conventionally written B(i|j))."""
    n = B.require_square()
    if n < 2:
        raise MatrixTooSmall("cannot delete from a 1x1 matrix")
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexOutOfRange(f"deletion index ({i},{j}) outside 1..{n}")
    flat = [
        B.entries[r * n + c]
        for r in range(n)
        if r != i - 1
        for c in range(n)
        if c != j - 1
    ]
    return DenseMatrix(n - 1, n - 1, flat, B.backend)


def row_without(B: DenseMatrix, l: int) -> DeletedVector:
    """Row l of B with its l-th entry removed."""
    n = B.require_square()
    if n < 2:
        raise MatrixTooSmall("need n >= 2")
    if not 1 <= l <= n:
        raise IndexOutOfRange(f"index {l} outside 1..{n}")
    r = B.row(l)
    return DeletedVector(r[: l - 1] + r[l:], l, "row")


def col_without(B: DenseMatrix, l: int) -> DeletedVector:
    """Column l of B with its l-th entry removed."""
    n = B.require_square()
    if n < 2:
        raise MatrixTooSmall("need n >= 2")
    if not 1 <= l <= n:
        raise IndexOutOfRange(f"index {l} outside 1..{n}")
    c = B.col(l)
    return DeletedVector(c[: l - 1] + c[l:], l, "column")


def selector(m: int, l: int, n: int, backend=EXACT) -> DeletedVector:
    """Unit row vector of length n-1 picking the slot that original index m
    occupies after index l has been deleted: basis index m when m < l,
    basis index m-1 when m > l."""
    if n < 2:
        raise MatrixTooSmall("need n >= 2")
    if not (1 <= m <= n and 1 <= l <= n):
        raise IndexOutOfRange(f"indices ({m},{l}) outside 1..{n}")
    if m == l:
        raise SelectorUndefined(f"selector undefined for m == l == {m}")
    pos = m if m < l else m - 1  # 1-based slot in the reduced vector
    entries = [backend.zero] * (n - 1)
    entries[pos - 1] = backend.one
    return DeletedVector(tuple(entries), l, "row")


# -- determinants ---------------------------------------------------------


def _det_bareiss(rows: list[list[Fraction]]) -> Fraction:
    """Fraction-free elimination; mutates its argument."""
    n = len(rows)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if rows[k][k] == 0:
            for r in range(k + 1, n):
                if rows[r][k] != 0:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = rows[k][k]
        for i in range(k + 1, n):
            row_i = rows[i]
            row_k = rows[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - lead * row_k[j]) / prev
            row_i[k] = Fraction(0)
        prev = pivot
    return rows[n - 1][n - 1] if sign > 0 else -rows[n - 1][n - 1]


def _det_float(rows: list[list[float]]) -> float:
    """Partial-pivoting elimination; mutates its argument. A zero pivot
    column yields 0.0 rather than an error."""
    n = len(rows)
    det = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda r: abs(rows[r][k]))
        if rows[p][k] == 0.0:
            return 0.0
        if p != k:
            rows[k], rows[p] = rows[p], rows[k]
            det = -det
        pivot = rows[k][k]
        det *= pivot
        for i in range(k + 1, n):
            factor = rows[i][k] / pivot
            if factor != 0.0:
                for j in range(k + 1, n):
                    rows[i][j] -= factor * rows[k][j]
    return det


def determinant(B: DenseMatrix):
    """det(B): Bareiss on the exact backend, partial pivoting on floats."""
    B.require_square()
    rows = B.rows_as_lists()
    if B.backend is FLOAT or B.backend.name == "float":
        return _det_float(rows)
    return _det_bareiss(rows)


def minor(B: DenseMatrix, i: int, j: int):
    """The (i,j)-minor: det of B with row i and column j deleted."""
    return determinant(delete_row_col(B, i, j))


def adjugate(B: DenseMatrix) -> DenseMatrix:
    """Transpose of the cofactor matrix; adj of a 1x1 matrix is [[1]]."""
    n = B.require_square()
    if n == 1:
        return DenseMatrix(1, 1, [B.backend.one], B.backend)
    flat = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            cof = minor(B, j, i)  # note the transpose
            flat.append(cof if (i + j) % 2 == 0 else -cof)
    return DenseMatrix(n, n, flat, B.backend)


# -- inverses -------------------------------------------------------------


def _inverse_exact(B: DenseMatrix) -> DenseMatrix:
    n = B.n_rows
    a = B.rows_as_lists()
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(n):
        p = next((r for r in range(k, n) if a[r][k] != 0), None)
        if p is None:
            raise SingularMatrix("exact elimination found a zero pivot column")
        if p != k:
            a[k], a[p] = a[p], a[k]
            inv[k], inv[p] = inv[p], inv[k]
        pivot = a[k][k]
        a[k] = [x / pivot for x in a[k]]
        inv[k] = [x / pivot for x in inv[k]]
        for r in range(n):
            if r != k and a[r][k] != 0:
                f = a[r][k]
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[k])]
    return DenseMatrix(n, n, [x for row in inv for x in row], B.backend)


def _inverse_float(B: DenseMatrix) -> DenseMatrix:
    n = B.n_rows
    a = B.rows_as_lists()
    floor = PIVOT_FLOOR_FACTOR * max(abs(e) for e in B.entries)
    inv = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    for k in range(n):
        p = max(range(k, n), key=lambda r: abs(a[r][k]))
        if abs(a[p][k]) < floor or a[p][k] == 0.0:
            raise SingularMatrix(
                f"pivot {a[p][k]!r} below singularity floor {floor!r}"
            )
        if p != k:
            a[k], a[p] = a[p], a[k]
            inv[k], inv[p] = inv[p], inv[k]
        pivot = a[k][k]
        a[k] = [x / pivot for x in a[k]]
        inv[k] = [x / pivot for x in inv[k]]
        for r in range(n):
            if r != k and a[r][k] != 0.0:
                f = a[r][k]
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[k])]
    return DenseMatrix(n, n, [x for row in inv for x in row], B.backend)


def inverse(B: DenseMatrix) -> DenseMatrix:
    """Gauss-Jordan inverse. Exact backend: B @ inverse(B) == I exactly."""
    B.require_square()
    if B.backend is FLOAT or B.backend.name == "float":
        return _inverse_float(B)
    return _inverse_exact(B)
