"""Exact dense linear algebra over Q and prime fields.

Everything above this layer talks to :class:`Matrix`; the heavy lifting is
done by FLINT (``fmpq_mat`` / ``nmod_mat``).  Matrices are treated as
immutable values.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import flint


class FieldMismatchError(ValueError):
    """Raised when matrices over different fields are combined."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str = "rational"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "rational":
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        elif self.kind == "prime":
            if self.p is None or not _is_prime(int(self.p)):
                raise ValueError(f"modulus {self.p!r} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    def scalar(self, x):
        """Coerce ``x`` (int, Fraction, str like ``"-3/4"``, flint scalar) into the field."""
        t = type(x)
        if t is int:
            return flint.fmpq(x) if self.kind == "rational" else flint.nmod(x, self.p)
        if t is str:
            x = Fraction(x.strip())
        if self.is_rational:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, flint.nmod):
                raise FieldMismatchError("prime-field scalar used over Q")
            x = Fraction(x)
            return flint.fmpq(x.numerator, x.denominator)
        if isinstance(x, flint.nmod):
            if int(x.modulus()) != self.p:
                raise FieldMismatchError("scalar from a different prime field")
            return x
        if isinstance(x, flint.fmpq):
            x = Fraction(int(x.p), int(x.q))
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
        return flint.nmod(x.numerator, self.p) / flint.nmod(x.denominator, self.p)

    def to_json(self) -> dict:
        return {"kind": "rational"} if self.is_rational else {"kind": "prime", "p": self.p}

    def __str__(self):
        return "Q" if self.is_rational else f"F_{self.p}"


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec("prime", p)


def scalar_str(x) -> str:
    """Canonical string of a field element: ``"3"``, ``"-1/2"``; residues as ints."""
    if isinstance(x, flint.nmod):
        return str(int(x))
    return str(x)


def _residue(field: FieldSpec, v) -> int:
    if type(v) is flint.nmod and v.modulus() == field.p:
        return int(v)
    return int(field.scalar(v))


class Matrix:
    """Immutable dense matrix over a :class:`FieldSpec`."""

    __slots__ = ("field", "rows", "cols", "_m")

    def __init__(self, field: FieldSpec, rows: int, cols: int, raw=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if raw is None:
            raw = flint.fmpq_mat(rows, cols) if field.is_rational else flint.nmod_mat(rows, cols, field.p)
        self._m = raw

    # construction -------------------------------------------------------
    @classmethod
    def _wrap(cls, field, raw):
        return cls(field, raw.nrows(), raw.ncols(), raw)

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls.from_flat(field, len(rows), cols, [v for r in rows for v in r])

    @classmethod
    def from_flat(cls, field: FieldSpec, rows: int, cols: int, entries: Sequence) -> "Matrix":
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        if rows == 0 or cols == 0:
            return cls(field, rows, cols)
        if field.is_rational:
            fq = flint.fmpq
            vals = [v if type(v) is fq or type(v) is int else field.scalar(v) for v in entries]
            raw = flint.fmpq_mat(rows, cols, vals)
        else:
            p = field.p
            nm = flint.nmod
            vals = [v if type(v) is int else int(v) if type(v) is nm else _residue(field, v) for v in entries]
            raw = flint.nmod_mat(rows, cols, vals, p)
        return cls(field, rows, cols, raw)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        one = [0] * (n * n)
        for i in range(n):
            one[i * n + i] = 1
        return cls.from_flat(field, n, n, one)

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entries(self) -> list:
        if self.rows == 0 or self.cols == 0:
            return []
        return list(self._m.entries())

    def tolist(self) -> list[list]:
        e = self.entries()
        c = self.cols
        return [e[i * c:(i + 1) * c] for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self._m[i, j]

    def row(self, i: int) -> "Matrix":
        return self.submatrix([i], range(self.cols))

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        rows, cols = list(rows), list(cols)
        e = self.entries()
        c = self.cols
        flat = [e[i * c + j] for i in rows for j in cols]
        return Matrix.from_flat(self.field, len(rows), len(cols), flat)

    def select_rows(self, rows: Iterable[int]) -> "Matrix":
        return self.submatrix(rows, range(self.cols))

    def select_cols(self, cols: Iterable[int]) -> "Matrix":
        return self.submatrix(range(self.rows), cols)

    def is_zero(self) -> bool:
        if self.rows == 0 or self.cols == 0:
            return True
        return all(v == 0 for v in self._m.entries())

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"cannot combine matrices over {self.field} and {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix(self.field, self.rows, other.cols)
        return Matrix._wrap(self.field, self._m * other._m)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix._wrap(self.field, self._m + other._m)

    def __neg__(self) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix._wrap(self.field, -self._m)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix._wrap(self.field, self._m * self.field.scalar(c))

    @property
    def T(self) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return Matrix(self.field, self.cols, self.rows)
        return Matrix._wrap(self.field, self._m.transpose())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        return self.entries() == other.entries()

    def __hash__(self):
        return hash((self.field, self.shape, tuple(scalar_str(v) for v in self.entries())))

    def __repr__(self):
        body = "; ".join(" ".join(scalar_str(v) for v in r) for r in self.tolist())
        return f"Matrix<{self.field} {self.rows}x{self.cols}>[{body}]"

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return int(self._m.rank())

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        if self.rows == 0:
            return self
        return Matrix._wrap(self.field, self._m.inv())

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def charpoly(self):
        """Characteristic polynomial as a FLINT polynomial (fmpq_poly or nmod_poly)."""
        if self.rows != self.cols:
            raise ValueError("charpoly of a non-square matrix")
        if self.rows == 0:
            return flint.fmpq_poly([1]) if self.field.is_rational else flint.nmod_poly([1], self.field.p)
        return self._m.charpoly()

    def poly_eval(self, poly) -> "Matrix":
        """Evaluate a FLINT polynomial at this square matrix (Horner)."""
        coeffs = [self.field.scalar(c) if self.field.is_rational else int(c) for c in poly.coeffs()]
        out = Matrix.zeros(self.field, self.rows, self.cols)
        eye = Matrix.identity(self.field, self.rows)
        for c in reversed(coeffs):
            out = out @ self + eye.scale(c)
        return out

    def vec(self) -> list:
        """Row-major flattening."""
        return self.entries()


def hstack(field: FieldSpec, blocks: Sequence[Matrix], rows: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(field, rows or 0, 0)
    r = blocks[0].rows
    if any(b.rows != r for b in blocks):
        raise ValueError("hstack: row counts differ")
    lists = [b.tolist() for b in blocks]
    cols = sum(b.cols for b in blocks)
    flat = [v for i in range(r) for lst in lists for v in lst[i]]
    return Matrix.from_flat(field, r, cols, flat)


def vstack(field: FieldSpec, blocks: Sequence[Matrix], cols: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(field, 0, cols or 0)
    c = blocks[0].cols
    if any(b.cols != c for b in blocks):
        raise ValueError("vstack: column counts differ")
    flat = [v for b in blocks for v in b.entries()]
    return Matrix.from_flat(field, sum(b.rows for b in blocks), c, flat)


def block_diag(field: FieldSpec, blocks: Sequence[Matrix]) -> Matrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    flat = [0] * (n * m)
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.tolist()):
            base = (r0 + i) * m + c0
            flat[base:base + b.cols] = row
        r0 += b.rows
        c0 += b.cols
    return Matrix.from_flat(field, n, m, flat)


# elimination ------------------------------------------------------------------

def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns."""
    if m.rows == 0 or m.cols == 0:
        return m, 0, []
    raw, rank = m._m.rref()
    reduced = Matrix._wrap(m.field, raw)
    e = reduced.entries()
    pivots = []
    c = m.cols
    j = 0
    for i in range(int(rank)):
        while e[i * c + j] == 0:
            j += 1
        pivots.append(j)
    return reduced, int(rank), pivots


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning the right null space ``{x : m x = 0}``."""
    n = m.cols
    reduced, rank, pivots = rref(m)
    free = [j for j in range(n) if j not in set(pivots)]
    if not free:
        return Matrix.zeros(m.field, n, 0)
    e = reduced.entries()
    flat = [0] * (n * len(free))
    pos = {j: k for k, j in enumerate(free)}
    for k, f in enumerate(free):
        flat[f * len(free) + k] = 1
    neg_one = m.field.scalar(-1)
    for i, p in enumerate(pivots):
        for f in free:
            v = e[i * n + f]
            if v != 0:
                flat[p * len(free) + pos[f]] = v * neg_one
    return Matrix.from_flat(m.field, n, len(free), flat)


def left_kernel(m: Matrix) -> Matrix:
    """Rows spanning ``{x : x m = 0}``."""
    return kernel_basis(m.T).T


def row_basis(m: Matrix) -> Matrix:
    """Nonzero rows of the rref: a canonical basis of the row space."""
    reduced, rank, _ = rref(m)
    if rank == 0:
        return Matrix.zeros(m.field, 0, m.cols)
    return reduced.select_rows(range(rank))


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Some ``x`` with ``a x = b``, or ``None`` when inconsistent."""
    if a.field != b.field:
        raise FieldMismatchError("solve over mixed fields")
    if a.rows != b.rows:
        raise ValueError(f"solve: a has {a.rows} rows, b has {b.rows}")
    n, k = a.cols, b.cols
    if a.rows == 0:
        return Matrix.zeros(a.field, n, k)
    aug = hstack(a.field, [a, b])
    reduced, rank, pivots = rref(aug)
    if any(p >= n for p in pivots):
        return None
    e = reduced.entries()
    w = n + k
    flat = [0] * (n * k)
    for i, p in enumerate(pivots):
        flat[p * k:(p + 1) * k] = e[i * w + n:(i + 1) * w]
    return Matrix.from_flat(a.field, n, k, flat)


def solve_left(a: Matrix, b: Matrix) -> Matrix | None:
    """Some ``x`` with ``x a = b``."""
    x = solve(a.T, b.T)
    return None if x is None else x.T


class RowCoordinates:
    """Coordinates of vectors with respect to a fixed basis of row vectors.

    ``coords(v)`` returns ``c`` with ``c @ basis == v``; rows of ``v`` outside
    the span raise unless ``check=False``.
    """

    def __init__(self, basis: Matrix):
        self.basis = basis
        self.field = basis.field
        _, rank, pivots = rref(basis)
        if rank != basis.rows:
            raise ValueError("basis rows are linearly dependent")
        self.pivots = pivots
        self._inv = basis.select_cols(pivots).inverse() if pivots else Matrix.zeros(self.field, 0, 0)

    def coords(self, v: Matrix, check: bool = True) -> Matrix:
        if v.cols != self.basis.cols:
            raise ValueError("vector length does not match basis")
        if self.basis.rows == 0:
            if check and not v.is_zero():
                raise ValueError("vector not in span of the empty basis")
            return Matrix.zeros(self.field, v.rows, 0)
        c = v.select_cols(self.pivots) @ self._inv
        if check and c @ self.basis != v:
            raise ValueError("vector not in the span of the basis")
        return c


def span_contains(basis: Matrix, v: Matrix) -> bool:
    if v.rows == 0:
        return True
    return vstack(basis.field, [basis, v]).rank() == basis.rank()
