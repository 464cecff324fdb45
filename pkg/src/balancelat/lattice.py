"""Exact-rational LLL reduction, SVP enumeration in the max norm, and the
operator lower-bound certificate for reduced bases.

All arithmetic is over Fraction, so the reduction certificate (size-reduced
and the Lovasz condition |bhat_i|^2 <= 2 |bhat_{i+1}|^2) is checked as literal
inequalities in Q, and the unimodular transform is tracked alongside the swaps
and size reductions together with its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BudgetExceeded,
    NotFound,
    PreconditionFailed,
    RankDeficient,
)
from .linalg import RMatrix, RVector, determinant, gram_schmidt, solve_linear
from .nbp import enumeration_budget
from .rationals import floor_frac, frac, sqrt_lower

LOVASZ_DELTA = Fraction(3, 4)  # yields |bhat_i|^2 <= 2 |bhat_{i+1}|^2 on exit


@dataclass(frozen=True)
class LatticeBasis:
    """Full-rank basis; columns of B generate the lattice."""

    B: RMatrix

    def __post_init__(self):
        if not self.B.is_square():
            raise RankDeficient("basis matrix must be square")
        if determinant(self.B) == 0:
            raise RankDeficient("basis matrix is singular")

    @property
    def n(self) -> int:
        return self.B.ncols


@dataclass(frozen=True)
class UnimodularTransform:
    """Integer matrix with determinant +-1, carried with its exact inverse."""

    U: RMatrix
    Uinv: RMatrix

    def __post_init__(self):
        n = self.U.ncols
        if any(e.denominator != 1 for row in self.U.rows for e in row):
            raise PreconditionFailed("unimodular matrix must be integral")
        if abs(determinant(self.U)) != 1:
            raise PreconditionFailed("unimodular matrix must have det +-1")
        if self.U.matmul(self.Uinv) != RMatrix.identity(n):
            raise PreconditionFailed("inverse does not match")

    @staticmethod
    def identity(n: int) -> "UnimodularTransform":
        eye = RMatrix.identity(n)
        return UnimodularTransform(eye, eye)

    def apply(self, x: RVector) -> RVector:
        return self.U.matvec(x)

    def apply_inverse(self, x: RVector) -> RVector:
        return self.Uinv.matvec(x)


@dataclass(frozen=True)
class LllCertificate:
    """Gram-Schmidt data of a reduced basis plus the two condition flags."""

    Bhat: RMatrix
    Mu: RMatrix
    size_reduced: bool
    lovasz_ok: bool


def check_reduction_conditions(basis: RMatrix) -> LllCertificate:
    """Evaluate both reduction conditions exactly on the given basis."""
    bhat, mu = gram_schmidt(basis)
    n = basis.ncols
    size_ok = all(
        abs(mu[i, j]) <= Fraction(1, 2) for i in range(n) for j in range(i + 1, n)
    )
    norms = [bhat.column(i).norm_sq() for i in range(n)]
    lovasz_ok = all(norms[i] <= 2 * norms[i + 1] for i in range(n - 1))
    return LllCertificate(bhat, mu, size_ok, lovasz_ok)


def lll_reduce(basis: LatticeBasis) -> tuple[LatticeBasis, UnimodularTransform, LllCertificate]:
    """LLL-reduce the basis, returning (reduced, U, certificate).

    reduced.B = basis.B * U exactly, |det U| = 1, and the certificate's two
    flags are both True.  Uses the standard Lovasz parameter delta = 3/4.
    """
    n = basis.n
    cols = [list(basis.B.column(j)) for j in range(n)]
    u_cols = [[Fraction(1 if i == j else 0) for i in range(n)] for j in range(n)]
    uinv_rows = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def col_vec(c):
        return RVector(c)

    def recompute_gs():
        b = RMatrix.from_columns([col_vec(c) for c in cols])
        bhat, mu = gram_schmidt(b)
        norms = [bhat.column(i).norm_sq() for i in range(n)]
        # mu rows indexed [i][j] with j < i meaning coefficient of bhat_j in b_i
        mu_of = [[mu[j, i] for j in range(n)] for i in range(n)]
        return mu_of, norms

    mu_of, norms = recompute_gs()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            r = floor_frac(mu_of[k][j] + Fraction(1, 2))
            if r != 0:
                cols[k] = [a - r * b for a, b in zip(cols[k], cols[j])]
                u_cols[k] = [a - r * b for a, b in zip(u_cols[k], u_cols[j])]
                # column op on U is the inverse row op on Uinv
                uinv_rows[j] = [a + r * b for a, b in zip(uinv_rows[j], uinv_rows[k])]
                for jj in range(j):
                    mu_of[k][jj] -= r * mu_of[j][jj]
                mu_of[k][j] -= r
        if norms[k] >= (LOVASZ_DELTA - mu_of[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            cols[k], cols[k - 1] = cols[k - 1], cols[k]
            u_cols[k], u_cols[k - 1] = u_cols[k - 1], u_cols[k]
            uinv_rows[k], uinv_rows[k - 1] = uinv_rows[k - 1], uinv_rows[k]
            mu_of, norms = recompute_gs()
            k = max(k - 1, 1)

    reduced = RMatrix.from_columns([col_vec(c) for c in cols])
    u = RMatrix.from_columns([RVector(c) for c in u_cols])
    uinv = RMatrix(uinv_rows)
    transform = UnimodularTransform(u, uinv)
    cert = check_reduction_conditions(reduced)
    assert cert.size_reduced and cert.lovasz_ok
    assert basis.B.matmul(u) == reduced
    return LatticeBasis(reduced), transform, cert


def lll_min_gain(basis: LatticeBasis, cert: LllCertificate | None = None) -> Fraction:
    """Certified squared-gain lower bound 2^(-3n) for a reduced basis.

    Requires the basis to be LLL reduced with |b_i|^2 >= 1 for all columns.
    The certificate re-verifies the intermediate inequality
    |bhat_k|^2 >= 2^(-n) for every k before certifying that
    |B x|_2^2 >= 2^(-3n) |x|_2^2 for all x.  The squared form is returned
    because 2^(-3n/2) itself is irrational for odd n; callers that need the
    unsquared gain may take any rational r with r^2 <= the returned value.
    """
    n = basis.n
    if cert is None:
        cert = check_reduction_conditions(basis.B)
    if not (cert.size_reduced and cert.lovasz_ok):
        raise PreconditionFailed("basis is not LLL reduced")
    for i in range(n):
        if basis.B.column(i).norm_sq() < 1:
            raise PreconditionFailed(f"column {i} has squared norm < 1")
    bound = Fraction(1, 2**n)
    for k in range(n):
        if cert.Bhat.column(k).norm_sq() < bound:
            raise PreconditionFailed(
                f"Gram-Schmidt vector {k} violates the 2^(-n) lower bound"
            )
    return Fraction(1, 2 ** (3 * n))


def svp_exact_linf(
    basis: LatticeBasis,
    search_bound: Fraction | None = None,
    budget: int | None = None,
) -> tuple[int, ...]:
    """Exact shortest nonzero lattice vector in the max norm.

    Returns the coefficient vector y (w.r.t. the *input* basis) minimizing
    |B y|_inf.  The enumeration region is certified complete: every vector
    with max norm <= V has Euclidean norm <= sqrt(n) V, and the Gram-Schmidt
    norms of an LLL-reduced basis bound the coefficients level by level.
    Ties are broken by smallest Euclidean norm, then lexicographically on y.

    ``search_bound``, when given, must be a promised attainable max norm
    (e.g. 1 for a determinant <= 1 lattice, by Minkowski's theorem); NotFound
    is raised if the promise fails.
    """
    limit = enumeration_budget(budget)
    n = basis.n
    reduced, transform, cert = lll_reduce(basis)
    bprime = reduced.B
    norms = [cert.Bhat.column(i).norm_sq() for i in range(n)]
    mu = cert.Mu  # mu[i][j], i < j

    col_inf = min(bprime.column(j).inf_norm() for j in range(n))
    v0 = col_inf if search_bound is None else min(col_inf, frac(search_bound))
    radius_sq = n * v0 * v0

    best: list = [None, None, None]  # value, norm_sq, y_input
    nodes = [0]
    y = [0] * n
    centers = [Fraction(0)] * n

    def cur_radius_sq() -> Fraction:
        return n * best[0] * best[0] if best[0] is not None else radius_sq

    def y_range(level: int, c: Fraction, room: Fraction) -> range:
        # integers y with (y + c)^2 * norms[level] <= room, i.e.
        # -sqrt(q) <= y + c <= sqrt(q) with q = room / norms[level]
        if room < 0:
            return range(0)
        q = room / norms[level]
        approx = sqrt_lower(q, 8)

        def below_upper(yv: int) -> bool:  # y + c <= sqrt(q)
            u = yv + c
            return u <= 0 or u * u <= q

        def above_lower(yv: int) -> bool:  # y + c >= -sqrt(q)
            u = yv + c
            return u >= 0 or u * u <= q

        # one-sided sqrt makes the seeds conservative, so only a couple of
        # exact expansion steps are ever needed
        hi = floor_frac(approx - c)
        while below_upper(hi + 1):
            hi += 1
        lo = -floor_frac(approx + c)
        while above_lower(lo - 1):
            lo -= 1
        return range(lo, hi + 1)

    def consider(yvec: list[int]) -> None:
        v = bprime.matvec(RVector(yvec))
        val = v.inf_norm()
        if best[0] is not None and val > best[0]:
            return
        nsq = v.norm_sq()
        y_in = transform.U.matvec(RVector(yvec))
        y_in_t = tuple(int(e) for e in y_in)
        key = (val, nsq, y_in_t)
        if best[0] is None or key < (best[0], best[1], best[2]):
            best[0], best[1], best[2] = key

    def descend(level: int, weight: Fraction) -> None:
        nodes[0] += 1
        if nodes[0] > limit:
            raise BudgetExceeded("SVP enumeration exceeded budget")
        if level < 0:
            if any(y):
                consider(list(y))
            return
        c = sum(
            (mu[level, j] * y[j] for j in range(level + 1, n)), Fraction(0)
        )
        for val in y_range(level, c, cur_radius_sq() - weight):
            y[level] = val
            contrib = (val + c) ** 2 * norms[level]
            if weight + contrib <= cur_radius_sq():
                descend(level - 1, weight + contrib)
        y[level] = 0

    descend(n - 1, Fraction(0))
    if best[0] is None or (search_bound is not None and best[0] > frac(search_bound)):
        raise NotFound("no nonzero lattice vector within the promised bound")
    return best[2]


def lattice_membership(basis: LatticeBasis, x: RVector) -> tuple[int, ...] | None:
    """Return integer coefficients y with B y = x, or None when x is no lattice point."""
    y = solve_linear(basis.B, x)
    if any(e.denominator != 1 for e in y):
        return None
    return tuple(int(e) for e in y)
