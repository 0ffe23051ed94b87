"""Exact linear algebra over the rationals and prime fields.

Matrices are immutable, stored row-major, and act on the left of column
vectors: a map ``V -> W`` has shape ``dim W x dim V``.  Every elimination
uses the same pivot order (leftmost column first, topmost row first), so all
derived bases are reproducible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import DimensionMismatch, EntryOverflowBudget, FieldMismatch

_LITERAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (``p == 0``) or the prime field with ``p`` elements."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"prime field modulus must be prime, got {self.p}")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``Q`` or ``F<p>``."""
        text = text.strip()
        if text == "Q":
            return cls(0)
        m = re.fullmatch(r"F(\d+)", text)
        if not m:
            raise ValueError(f"unknown field {text!r}; expected Q or F<p>")
        return cls(int(m.group(1)))

    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def __call__(self, x):
        """Coerce an int, Fraction or rational literal string into the field."""
        if isinstance(x, str):
            m = _LITERAL.match(x)
            if not m:
                raise ValueError(f"bad field literal {x!r}")
            num = int(m.group(1))
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise ValueError(f"zero denominator in {x!r}")
            x = Fraction(num, den)
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ValueError(f"{x} has no image in {self.name}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / x
        return pow(x, -1, self.p)

    def fmt(self, x) -> str:
        if self.p == 0:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x) % self.p)


QQ = Field(0)


def _check_same_field(*ms: "Matrix") -> Field:
    fields = {m.field for m in ms}
    if len(fields) > 1:
        raise FieldMismatch(f"matrices over different fields: {sorted(f.name for f in fields)}")
    return ms[0].field


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple
    field: Field = QQ

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = QQ, cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch(f"ragged matrix rows: expected {cols} columns, got {len(r)}")
        return cls(len(rows), cols, tuple(field(x) for r in rows for x in r), field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], field: Field = QQ, rows: int | None = None) -> "Matrix":
        columns = [list(c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        for c in columns:
            if len(c) != rows:
                raise DimensionMismatch("ragged column list")
        return cls(rows, len(columns), tuple(field(columns[j][i]) for i in range(rows) for j in range(len(columns))), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> "Matrix":
        return cls(rows, cols, (field.zero,) * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        z, o = field.zero, field.one
        return cls(n, n, tuple(o if i == j else z for i in range(n) for j in range(n)), field)

    @classmethod
    def scalar(cls, value, field: Field = QQ) -> "Matrix":
        return cls(1, 1, (field(value),), field)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_lists(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_strings(self) -> list[list[str]]:
        return [[self.field.fmt(x) for x in self.row(i)] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __repr__(self):
        return f"Matrix({self.to_strings()}, {self.field.name}, shape={self.rows}x{self.cols})"

    # arithmetic

    def _norm(self, x):
        return x % self.field.p if self.field.p else x

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.rows, self.cols, tuple(self._norm(a + b) for a, b in zip(self.entries, other.entries)), self.field)

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(self._norm(-a) for a in self.entries), self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix(self.rows, self.cols, tuple(self._norm(c * a) for a in self.entries), self.field)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        n, m, k = self.rows, other.cols, self.cols
        a, b = self.entries, other.entries
        zero = self.field.zero
        out = []
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            for j in range(m):
                s = zero
                for t in range(k):
                    x = arow[t]
                    if x:
                        s += x * b[t * m + j]
                out.append(self._norm(s))
        return Matrix(n, m, tuple(out), self.field)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        zero = self.field.zero
        out = []
        for i in range(self.rows):
            s = zero
            for x, y in zip(self.row(i), v):
                s += x * y
            out.append(self._norm(s))
        return tuple(out)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)), self.field)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), len(cols), tuple(self.entries[i * self.cols + j] for i in rows for j in cols), self.field)

    def power(self, n: int, max_bits: int | None = None) -> "Matrix":
        """``self ** n`` by repeated squaring; rationals are checked against ``max_bits``."""
        if not self.is_square():
            raise DimensionMismatch("power of a non-square matrix")
        result = Matrix.identity(self.rows, self.field)
        base = self
        while n:
            if n & 1:
                result = result @ base
                check_budget(result, max_bits)
            n >>= 1
            if n:
                base = base @ base
                check_budget(base, max_bits)
        return result


def check_budget(m: Matrix, max_bits: int | None) -> None:
    if max_bits is None or not m.field.is_rational:
        return
    for x in m.entries:
        if x.numerator.bit_length() > max_bits or x.denominator.bit_length() > max_bits:
            raise EntryOverflowBudget(f"matrix entry exceeds {max_bits} bits")


def hstack(ms: Sequence[Matrix], rows: int | None = None, field: Field | None = None) -> Matrix:
    if not ms:
        return Matrix.zeros(rows or 0, 0, field or QQ)
    f = _check_same_field(*ms)
    r = ms[0].rows
    if any(m.rows != r for m in ms):
        raise DimensionMismatch("hstack of matrices with different row counts")
    out = []
    for i in range(r):
        for m in ms:
            out.extend(m.row(i))
    return Matrix(r, sum(m.cols for m in ms), tuple(out), f)


def vstack(ms: Sequence[Matrix], cols: int | None = None, field: Field | None = None) -> Matrix:
    if not ms:
        return Matrix.zeros(0, cols or 0, field or QQ)
    f = _check_same_field(*ms)
    c = ms[0].cols
    if any(m.cols != c for m in ms):
        raise DimensionMismatch("vstack of matrices with different column counts")
    return Matrix(sum(m.rows for m in ms), c, tuple(x for m in ms for x in m.entries), f)


def block_diag(ms: Sequence[Matrix], field: Field | None = None) -> Matrix:
    """Block-diagonal assembly; the empty list gives the 0x0 matrix."""
    if not ms:
        return Matrix.zeros(0, 0, field or QQ)
    f = _check_same_field(*ms)
    rows = sum(m.rows for m in ms)
    cols = sum(m.cols for m in ms)
    out = [f.zero] * (rows * cols)
    r0 = c0 = 0
    for m in ms:
        for i in range(m.rows):
            for j in range(m.cols):
                out[(r0 + i) * cols + c0 + j] = m.entries[i * m.cols + j]
        r0 += m.rows
        c0 += m.cols
    return Matrix(rows, cols, tuple(out), f)


def kron_product(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; row index ``i*b.rows + k``, column index ``j*b.cols + l``."""
    f = _check_same_field(a, b)
    rows, cols = a.rows * b.rows, a.cols * b.cols
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            brow = b.row(k)
            for j in range(a.cols):
                x = a[i, j]
                for y in brow:
                    out.append(a._norm(x * y))
    return Matrix(rows, cols, tuple(out), f)


# elimination

def _rref_rows(rows: list[list], ncols: int, field: Field, limit: int | None = None):
    """In-place reduced row echelon form; pivots are searched in columns ``< limit``."""
    p = field.p
    limit = ncols if limit is None else limit
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(limit):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        prow = [(x * inv) % p if p else x * inv for x in rows[r]]
        rows[r] = prow
        for i in range(nrows):
            if i != r:
                fct = rows[i][c]
                if fct != 0:
                    row = rows[i]
                    if p:
                        rows[i] = [(x - fct * y) % p for x, y in zip(row, prow)]
                    else:
                        rows[i] = [x - fct * y if y else x for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    rows = m.to_lists()
    pivots = _rref_rows(rows, m.cols, m.field)
    return Matrix(m.rows, m.cols, tuple(x for r in rows for x in r), m.field), tuple(pivots)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def _free_kernel(m: Matrix) -> tuple[int, list[list]]:
    rows = m.to_lists()
    pivots = _rref_rows(rows, m.cols, m.field)
    field = m.field
    pivset = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [field.zero] * m.cols
        v[f] = field.one
        for r, c in enumerate(pivots):
            v[c] = field(-rows[r][f]) if field.p else -rows[r][f]
        basis.append(v)
    return len(pivots), basis


def rank_and_kernel(m: Matrix) -> tuple[int, list[tuple]]:
    """Rank and a null-space basis whose stacked rows are in reduced echelon form."""
    r, basis = _free_kernel(m)
    if basis:
        _rref_rows(basis, m.cols, m.field)
    return r, [tuple(v) for v in basis]


def kernel_matrix(m: Matrix) -> Matrix:
    """Columns form the canonical null-space basis of ``m``."""
    _, basis = rank_and_kernel(m)
    return Matrix.from_columns(basis, m.field, rows=m.cols) if basis else Matrix.zeros(m.cols, 0, m.field)


def left_kernel_matrix(m: Matrix) -> Matrix:
    """Rows ``y`` with ``y @ m == 0``; full row rank, kernel equals the column space of ``m``."""
    return kernel_matrix(m.T).T


def column_space(m: Matrix) -> Matrix:
    """The pivot columns of ``m``, a basis of its column space."""
    _, pivots = rref(m)
    return m.submatrix(range(m.rows), pivots)


class Solution(NamedTuple):
    particular: tuple
    kernel: list


def solve_linear(a: Matrix, b: Sequence) -> Solution | None:
    """Solve ``a x = b``; ``None`` when inconsistent.

    The particular solution sets every free variable to zero.
    """
    if len(b) != a.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {a.rows} equations")
    field = a.field
    b = [field(x) for x in b]
    rows = [list(a.row(i)) + [b[i]] for i in range(a.rows)]
    pivots = _rref_rows(rows, a.cols + 1, field, limit=a.cols)
    for i in range(len(pivots), a.rows):
        if rows[i][a.cols] != 0:
            return None
    x = [field.zero] * a.cols
    for r, c in enumerate(pivots):
        x[c] = rows[r][a.cols]
    return Solution(tuple(x), rank_and_kernel(a)[1])


def solve_matrix(a: Matrix, b: Matrix, unique: bool = False) -> Matrix | None:
    """Solve ``a @ X == b`` column by column; ``None`` when inconsistent.

    With ``unique`` set, a non-injective ``a`` raises ``ValueError``.
    """
    _check_same_field(a, b)
    if a.rows != b.rows:
        raise DimensionMismatch(f"cannot solve {a.shape} X = {b.shape}")
    field = a.field
    rows = [list(a.row(i)) + list(b.row(i)) for i in range(a.rows)]
    pivots = _rref_rows(rows, a.cols + b.cols, field, limit=a.cols)
    if unique and len(pivots) != a.cols:
        raise ValueError("solution is not unique")
    for i in range(len(pivots), a.rows):
        if any(rows[i][a.cols + j] != 0 for j in range(b.cols)):
            return None
    out = [[field.zero] * b.cols for _ in range(a.cols)]
    for r, c in enumerate(pivots):
        for j in range(b.cols):
            out[c][j] = rows[r][a.cols + j]
    return Matrix(a.cols, b.cols, tuple(x for r in out for x in r), field)


def solve_left(a: Matrix, b: Matrix, unique: bool = False) -> Matrix | None:
    """Solve ``X @ a == b``."""
    x = solve_matrix(a.T, b.T, unique=unique)
    return None if x is None else x.T


def inverse(m: Matrix) -> Matrix | None:
    if not m.is_square():
        return None
    x = solve_matrix(m, Matrix.identity(m.rows, m.field))
    if x is None or rank(m) != m.rows:
        return None
    return x


def is_invertible(m: Matrix) -> bool:
    return m.is_square() and rank(m) == m.rows


def homogeneous_block_solutions(field: Field, blocks: Sequence[tuple[int, int]], equations) -> list[list[Matrix]]:
    """Basis of solutions of a homogeneous system in matrix unknowns.

    ``blocks[k]`` is the shape of unknown ``X_k``.  Each equation is a list of
    terms ``(k, L, R)`` meaning ``L @ X_k @ R``; the terms of one equation sum to
    zero.  Returns one list of matrices (one per unknown) per basis vector.
    """
    offsets = []
    total = 0
    for r, c in blocks:
        offsets.append(total)
        total += r * c
    system = []
    for terms in equations:
        if not terms:
            continue
        p, q = terms[0][1].rows, terms[0][2].cols
        eq_rows = [[field.zero] * total for _ in range(p * q)]
        for k, left, right in terms:
            br, bc = blocks[k]
            if left.cols != br or right.rows != bc or left.rows != p or right.cols != q:
                raise DimensionMismatch("inconsistent term shapes in matrix equation")
            base = offsets[k]
            for i in range(p):
                for a in range(br):
                    la = left[i, a]
                    if la == 0:
                        continue
                    for b in range(bc):
                        rb_row = right.row(b)
                        idx = base + a * bc + b
                        for j in range(q):
                            if rb_row[j] != 0:
                                eq_rows[i * q + j][idx] += la * rb_row[j]
        system.extend(eq_rows)
    if field.p:
        system = [[x % field.p for x in r] for r in system]
    coeffs = Matrix(len(system), total, tuple(x for r in system for x in r), field)
    _, basis = rank_and_kernel(coeffs)
    out = []
    for v in basis:
        mats = []
        for (r, c), off in zip(blocks, offsets):
            mats.append(Matrix(r, c, tuple(v[off:off + r * c]), field))
        out.append(mats)
    return out
