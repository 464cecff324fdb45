"""Exact rational vectors and matrices.

Everything here is immutable and computes with ``fractions.Fraction`` only,
so reconstruction identities (B = Bhat * Mu, M * solve(M, v) = v) hold with
literal equality.  Determinant and linear solve run fraction-free
(Bareiss elimination on a denominator-cleared integer matrix) to keep
intermediate entries from blowing up.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import RankDeficient, Singular
from .rationals import frac, lcm_of


class RVector:
    """Immutable vector over the exact rationals."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable) -> None:
        object.__setattr__(self, "entries", tuple(frac(e) for e in entries))

    def __setattr__(self, name, value):
        raise AttributeError("RVector is immutable")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, RVector) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"RVector([{', '.join(str(e) for e in self.entries)}])"

    def __add__(self, other: "RVector") -> "RVector":
        self._check_dim(other)
        return RVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "RVector") -> "RVector":
        self._check_dim(other)
        return RVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "RVector":
        return RVector(-a for a in self.entries)

    def scale(self, c) -> "RVector":
        c = frac(c)
        return RVector(c * a for a in self.entries)

    def dot(self, other: "RVector") -> Fraction:
        self._check_dim(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def norm_sq(self) -> Fraction:
        return self.dot(self)

    def inf_norm(self) -> Fraction:
        return max((abs(a) for a in self.entries), default=Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def _check_dim(self, other: "RVector") -> None:
        if len(self.entries) != len(other.entries):
            raise ValueError("dimension mismatch")

    @staticmethod
    def zero(n: int) -> "RVector":
        return RVector([0] * n)

    @staticmethod
    def unit(n: int, i: int) -> "RVector":
        return RVector([1 if j == i else 0 for j in range(n)])


class RMatrix:
    """Immutable rectangular matrix over the exact rationals (row major)."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]) -> None:
        data = tuple(tuple(frac(e) for e in row) for row in rows)
        if data and any(len(r) != len(data[0]) for r in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("RMatrix is immutable")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, RMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(e) for e in row) for row in self.rows)
        return f"RMatrix([{body}])"

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def row(self, i: int) -> RVector:
        return RVector(self.rows[i])

    def column(self, j: int) -> RVector:
        return RVector(row[j] for row in self.rows)

    def columns(self) -> list[RVector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "RMatrix":
        return RMatrix(zip(*self.rows)) if self.rows else RMatrix([])

    def matvec(self, v: RVector) -> RVector:
        if v.dim != self.ncols:
            raise ValueError("dimension mismatch")
        return RVector(
            sum((row[j] * v[j] for j in range(self.ncols)), Fraction(0))
            for row in self.rows
        )

    def matmul(self, other: "RMatrix") -> "RMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        cols = other.ncols
        return RMatrix(
            [
                [
                    sum(
                        (self.rows[i][k] * other.rows[k][j] for k in range(self.ncols)),
                        Fraction(0),
                    )
                    for j in range(cols)
                ]
                for i in range(self.nrows)
            ]
        )

    def scale(self, c) -> "RMatrix":
        c = frac(c)
        return RMatrix([[c * e for e in row] for row in self.rows])

    @staticmethod
    def identity(n: int) -> "RMatrix":
        return RMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def from_columns(cols: Sequence[RVector]) -> "RMatrix":
        if not cols:
            return RMatrix([])
        n = cols[0].dim
        if any(c.dim != n for c in cols):
            raise ValueError("dimension mismatch")
        return RMatrix([[c[i] for c in cols] for i in range(n)])

    @staticmethod
    def diagonal(values) -> "RMatrix":
        vals = [frac(v) for v in values]
        n = len(vals)
        return RMatrix([[vals[i] if i == j else 0 for j in range(n)] for i in range(n)])


def gram_schmidt(basis: RMatrix) -> tuple[RMatrix, RMatrix]:
    """Orthogonalize the columns b_1..b_n of ``basis``.

    Returns (Bhat, Mu) with Bhat's columns pairwise orthogonal, Mu unit upper
    triangular, and basis = Bhat * Mu exactly.  Mu[i][j] is the projection
    coefficient <b_j, bhat_i> / |bhat_i|^2 for i < j.
    """
    if not basis.is_square():
        raise RankDeficient("basis matrix must be square")
    n = basis.ncols
    cols = basis.columns()
    hat: list[RVector] = []
    mu = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for j in range(n):
        v = cols[j]
        for i in range(j):
            coeff = cols[j].dot(hat[i]) / hat[i].norm_sq()
            mu[i][j] = coeff
            v = v - hat[i].scale(coeff)
        if v.is_zero():
            raise RankDeficient(f"column {j} is dependent on earlier columns")
        hat.append(v)
    return RMatrix.from_columns(hat), RMatrix(mu)


def _cleared_int_rows(m: RMatrix) -> tuple[list[list[int]], int]:
    """Multiply each row by its denominator lcm; return rows and the product of scales."""
    rows = []
    scale = 1
    for row in m.rows:
        den = lcm_of(e.denominator for e in row) if row else 1
        rows.append([int(e * den) for e in row])
        scale *= den
    return rows, scale


def determinant(m: RMatrix) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square():
        raise ValueError("determinant needs a square matrix")
    n = m.nrows
    if n == 0:
        return Fraction(1)
    a, scale = _cleared_int_rows(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot is None:
                return Fraction(0)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1], scale)


def solve_linear(m: RMatrix, v: RVector) -> RVector:
    """Solve m * x = v exactly; raises Singular when det(m) = 0."""
    if not m.is_square():
        raise ValueError("solve_linear needs a square matrix")
    n = m.nrows
    if v.dim != n:
        raise ValueError("dimension mismatch")
    aug = RMatrix([list(m.rows[i]) + [v[i]] for i in range(n)])
    a, _ = _cleared_int_rows(aug)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot is None:
                raise Singular("coefficient matrix is singular")
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n + 1):
                a[i][j] = (a[i][j] * akk - aik * a[k][j]) // prev
            a[i][k] = 0
        prev = akk
    if a[n - 1][n - 1] == 0:
        raise Singular("coefficient matrix is singular")
    # back substitution over Fractions on the triangularized integer system
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        rhs = Fraction(a[i][n])
        for j in range(i + 1, n):
            rhs -= a[i][j] * x[j]
        x[i] = rhs / a[i][i]
    return RVector(x)
