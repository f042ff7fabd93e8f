"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`.  Elimination is fraction-free: rows are
scaled to integers and reduced with a Bareiss-type Gauss-Jordan sweep, either
by the pure-Python routine :func:`bareiss_rref` or by FLINT's ``fmpz_mat``
(also fraction-free) for larger inputs.  The two agree exactly; the switch is a
speed decision only.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import flint

Scalar = Fraction

# Matrices with fewer entries than this go through the pure-Python sweep.
SMALL_ENTRIES = 256


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class Matrix:
    """Dense immutable rational matrix stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        ent = tuple(as_scalar(x) for x in entries)
        if len(ent) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(ent)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = [list(c) for c in columns]
        return cls.from_rows([[c[i] for c in cols] for i in range(rows)], len(cols))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable) -> "Matrix":
        """Sparse construction path; repeated positions are summed."""
        acc: dict[tuple[int, int], Fraction] = {}
        for i, j, v in triplets:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            acc[i, j] = acc.get((i, j), Fraction(0)) + as_scalar(v)
        ent = [Fraction(0)] * (rows * cols)
        for (i, j), v in acc.items():
            ent[i * cols + j] = v
        return cls(rows, cols, ent)

    @classmethod
    def from_sparse_columns(cls, rows: int, columns: Sequence[dict]) -> "Matrix":
        return cls.from_triplets(
            rows, len(columns), ((i, j, v) for j, c in enumerate(columns) for i, v in c.items()))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            out = []
            ocols = [other.column(j) for j in range(other.cols)]
            for i in range(self.rows):
                r = self.row(i)
                nz = [(k, x) for k, x in enumerate(r) if x]
                for c in ocols:
                    out.append(sum((x * c[k] for k, x in nz), Fraction(0)))
            return Matrix(self.rows, other.cols, out)
        return self.apply(other)

    def apply(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} for {self.cols} columns")
        v = [as_scalar(x) for x in vec]
        nz = [(k, x) for k, x in enumerate(v) if x]
        return [sum((self.entries[i * self.cols + k] * x for k, x in nz), Fraction(0))
                for i in range(self.rows)]

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix(self.rows, self.cols, [c * a for a in self.entries])

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        return [{j: x for j, x in enumerate(self.row(i)) if x} for i in range(self.rows)]


def hstack(*ms: Matrix) -> Matrix:
    rows = ms[0].rows
    if any(m.rows != rows for m in ms):
        raise ValueError("row count mismatch")
    return Matrix.from_rows([[x for m in ms for x in m.row(i)] for i in range(rows)],
                            sum(m.cols for m in ms))


def vstack(*ms: Matrix) -> Matrix:
    cols = ms[0].cols
    if any(m.cols != cols for m in ms):
        raise ValueError("column count mismatch")
    return Matrix(sum(m.rows for m in ms), cols, [x for m in ms for x in m.entries])


# ---------------------------------------------------------------------------
# elimination on sparse rows (dict col -> Fraction)

Row = dict


def _integer_row(row, ncols: int) -> list[int]:
    """Scale a rational row (dict or dense sequence) to a primitive-free integer row."""
    items = row.items() if isinstance(row, dict) else enumerate(row)
    items = [(j, as_scalar(x)) for j, x in items if x]
    den = lcm(*(x.denominator for _, x in items)) if items else 1
    out = [0] * ncols
    for j, x in items:
        out[j] = x.numerator * (den // x.denominator)
    return out


def bareiss_rref(int_rows: list[list[int]], ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Fraction-free Gauss-Jordan on integer rows.

    Every update is an exact integer division by the previous pivot, so
    intermediate entries stay bounded by minors of the input.  Returns the
    normalized reduced rows (pivot entry 1) and the pivot columns.
    """
    m = [list(r) for r in int_rows if any(r)]
    nrows = len(m)
    prev = 1
    k = 0
    pivots: list[int] = []
    for c in range(ncols):
        if k == nrows:
            break
        p = next((i for i in range(k, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[k], m[p] = m[p], m[k]
        pk = m[k]
        piv = pk[c]
        for i in range(nrows):
            if i == k:
                continue
            ri = m[i]
            f = ri[c]
            ri[:] = [(piv * a - f * b) // prev for a, b in zip(ri, pk)]
        prev = piv
        pivots.append(c)
        k += 1
    out = []
    for i, c in enumerate(pivots):
        d = m[i][c]
        out.append({j: Fraction(x, d) for j, x in enumerate(m[i]) if x})
    return out, pivots


def _flint_rref(int_rows: list[list[int]], ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    nrows = len(int_rows)
    mat = flint.fmpz_mat(nrows, ncols, [x for r in int_rows for x in r])
    red, den, rk = mat.rref()
    den = int(den)
    out, pivots = [], []
    table = red.tolist()
    for i in range(rk):
        row = {j: Fraction(int(x), den) for j, x in enumerate(table[i]) if x}
        pivots.append(min(row))
        out.append(row)
    return out, pivots


def rref_rows(rows, ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form of rational rows; returns (nonzero rows, pivots)."""
    int_rows = [_integer_row(r, ncols) for r in rows]
    int_rows = [r for r in int_rows if any(r)]
    if not int_rows:
        return [], []
    if len(int_rows) * ncols <= SMALL_ENTRIES:
        return bareiss_rref(int_rows, ncols)
    return _flint_rref(int_rows, ncols)


def rank_rows(rows, ncols: int) -> int:
    int_rows = [_integer_row(r, ncols) for r in rows]
    int_rows = [r for r in int_rows if any(r)]
    if not int_rows:
        return 0
    if len(int_rows) * ncols <= SMALL_ENTRIES:
        return len(bareiss_rref(int_rows, ncols)[1])
    if len(int_rows) > ncols:
        # FLINT ranks the transpose just as well and the wide shape is cheaper
        int_rows = [list(c) for c in zip(*int_rows)]
        ncols = len(int_rows[0])
    return flint.fmpz_mat(len(int_rows), ncols, [x for r in int_rows for x in r]).rank()


def kernel_rows(rows, ncols: int) -> list[dict[int, Fraction]]:
    """Basis of {v : r.v = 0 for every row r}, one vector per free column."""
    red, pivots = rref_rows(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for r, p in zip(red, pivots):
            x = r.get(f)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# public matrix interface

def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    red, pivots = rref_rows(m.sparse_rows(), m.cols)
    ent = [Fraction(0)] * (m.rows * m.cols)
    for i, r in enumerate(red):
        for j, x in r.items():
            ent[i * m.cols + j] = x
    return Matrix(m.rows, m.cols, ent), len(pivots), pivots


def rank(m: Matrix) -> int:
    return rank_rows(m.sparse_rows(), m.cols)


class Subspace:
    """A subspace of Q^n, kept as its reduced echelon basis."""

    __slots__ = ("ambient_dim", "_rows", "_pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable = ()):
        vecs = [v if isinstance(v, dict) else {j: as_scalar(x) for j, x in enumerate(v) if x}
                for v in vectors]
        for v in vecs:
            if any(j >= ambient_dim or j < 0 for j in v):
                raise ValueError("vector longer than the ambient space")
        red, piv = rref_rows(vecs, ambient_dim) if vecs else ([], [])
        self.ambient_dim = ambient_dim
        self._rows = red
        self._pivots = piv

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def basis(self) -> list[list[Fraction]]:
        return [[r.get(j, Fraction(0)) for j in range(self.ambient_dim)] for r in self._rows]

    @property
    def sparse_basis(self) -> list[dict[int, Fraction]]:
        return [dict(r) for r in self._rows]

    @property
    def pivots(self) -> list[int]:
        return list(self._pivots)

    def contains(self, v) -> bool:
        w = dict(v) if isinstance(v, dict) else {j: as_scalar(x) for j, x in enumerate(v) if x}
        w = {j: x for j, x in w.items() if x}
        for r, p in zip(self._rows, self._pivots):
            x = w.get(p)
            if x:
                for j, y in r.items():
                    w[j] = w.get(j, Fraction(0)) - x * y
                    if not w[j]:
                        del w[j]
        return not w

    def reduce(self, v: dict) -> dict:
        """Remainder of v modulo this subspace (pivot coordinates cleared)."""
        w = {j: x for j, x in v.items() if x}
        for r, p in zip(self._rows, self._pivots):
            x = w.get(p)
            if x:
                for j, y in r.items():
                    nv = w.get(j, Fraction(0)) - x * y
                    if nv:
                        w[j] = nv
                    else:
                        w.pop(j, None)
        return w

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self._rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, self._rows + other._rows)

    def intersection(self, other: "Subspace") -> "Subspace":
        # v = sum a_i s_i = sum b_j t_j  <=>  (a, -b) in the kernel of [S^T | T^T]
        n = self.ambient_dim
        if self.dim == 0 or other.dim == 0:
            return Subspace(n)
        cols = self._rows + [{j: -x for j, x in r.items()} for r in other._rows]
        rows = [{} for _ in range(n)]
        for k, c in enumerate(cols):
            for j, x in c.items():
                rows[j][k] = x
        ker = kernel_rows(rows, len(cols))
        out = []
        for v in ker:
            w: dict[int, Fraction] = {}
            for k, a in v.items():
                if k < self.dim:
                    for j, x in self._rows[k].items():
                        w[j] = w.get(j, Fraction(0)) + a * x
            out.append(w)
        return Subspace(n, out)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self._pivots == other._pivots and self._rows == other._rows)

    def __repr__(self):
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"


def kernel_basis(m: Matrix) -> Subspace:
    return Subspace(m.cols, kernel_rows(m.sparse_rows(), m.cols))


def image_basis(m: Matrix) -> Subspace:
    return Subspace(m.rows, m.transpose().sparse_rows())


def solve(m: Matrix, b: Sequence) -> list[Fraction] | None:
    """Some x with m x = b, or None when the system is inconsistent."""
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    n = m.cols
    rows = []
    for i in range(m.rows):
        r = {j: x for j, x in enumerate(m.row(i)) if x}
        bi = as_scalar(b[i])
        if bi:
            r[n] = bi
        rows.append(r)
    red, pivots = rref_rows(rows, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for r, p in zip(red, pivots):
        x[p] = r.get(n, Fraction(0))
    return x


def solve_rows(rows: Sequence[dict], rhs: Sequence, ncols: int) -> dict[int, Fraction] | None:
    """Sparse version of solve: rows are the equations as {column: coefficient}."""
    aug = []
    for r, b in zip(rows, rhs):
        a = {j: as_scalar(x) for j, x in r.items() if x}
        bi = as_scalar(b)
        if bi:
            a[ncols] = bi
        if a:
            aug.append(a)
    red, pivots = rref_rows(aug, ncols + 1) if aug else ([], [])
    if pivots and pivots[-1] == ncols:
        return None
    return {p: r[ncols] for r, p in zip(red, pivots) if r.get(ncols)}


def quotient_dim(sub: Subspace, ambient: Subspace) -> int:
    if sub.ambient_dim != ambient.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    if not sub.is_subspace_of(ambient):
        raise ValueError("first subspace is not contained in the second")
    return ambient.dim - sub.dim


class SparseMatrix:
    """Rational matrix stored by sparse columns; used for large chain maps."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: Sequence[dict]):
        if len(columns) != cols:
            raise ValueError(f"expected {cols} columns, got {len(columns)}")
        self.rows, self.cols = rows, cols
        self.columns = [dict(c) for c in columns]

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, [{} for _ in range(cols)])

    @classmethod
    def from_dense(cls, m: Matrix) -> "SparseMatrix":
        cols = [{i: m[i, j] for i in range(m.rows) if m[i, j]} for j in range(m.cols)]
        return cls(m.rows, m.cols, cols)

    def to_dense(self) -> Matrix:
        return Matrix.from_sparse_columns(self.rows, self.columns)

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for j, c in v.items():
            for i, x in self.columns[j].items():
                y = out.get(i, 0) + c * x
                if y:
                    out[i] = y
                else:
                    del out[i]
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        return SparseMatrix(self.rows, other.cols, [self.apply(c) for c in other.columns])

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        cols = []
        for a, b in zip(self.columns, other.columns):
            c = dict(a)
            for i, x in b.items():
                y = c.get(i, 0) - x
                if y:
                    c[i] = y
                else:
                    c.pop(i, None)
            cols.append(c)
        return SparseMatrix(self.rows, self.cols, cols)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return rank_rows(self.columns, self.rows)

    def image(self) -> Subspace:
        return Subspace(self.rows, self.columns)

    def kernel(self) -> Subspace:
        return Subspace(self.cols, kernel_rows(self.row_dicts(), self.cols))

    def row_dicts(self) -> list[dict]:
        rows: list[dict] = [{} for _ in range(self.rows)]
        for j, c in enumerate(self.columns):
            for i, x in c.items():
                rows[i][j] = x
        return [r for r in rows if r]
