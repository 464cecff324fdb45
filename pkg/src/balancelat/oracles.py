"""Oracle handles and their standard realizations.

Each handle carries its claimed guarantee parameters, and every call is
re-verified against the claim with exact arithmetic: a violation raises
OracleContractViolation rather than silently degrading downstream bounds.
The factories wire the exact enumeration oracles from the geometry and
lattice modules; LLL-approximate and adversarial variants exist so tests and
benchmarks can exercise the failure paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import OracleContractViolation, PreconditionFailed
from .geometry import SymmetricConvexBody, minkowski_exact_oracle
from .lattice import LatticeBasis, lattice_membership, lll_reduce, svp_exact_linf
from .linalg import RVector, determinant
from .nbp import NbpInstance, instance_inner, karmarkar_karp, mitm_min, pigeonhole_solve


@dataclass
class MinkowskiOracle:
    """rho-approximate Minkowski oracle: finds points of (rho K) cap Z^n \\ {0}."""

    rho: Fraction
    solver: Callable[[SymmetricConvexBody], Sequence[int]]
    name: str = "minkowski"

    def find(self, body: SymmetricConvexBody) -> tuple[int, ...]:
        x = tuple(int(v) for v in self.solver(body))
        if not any(x):
            raise OracleContractViolation(f"{self.name}: returned the zero vector")
        dilated = body if self.rho == 1 else body.dilate(self.rho)
        if not dilated.member(RVector(x)):
            raise OracleContractViolation(
                f"{self.name}: point is not in the {self.rho}-dilated body"
            )
        return x


@dataclass
class SvpInfOracle:
    """Max-norm SVP oracle for lattices promised to have det <= 1."""

    rho: Fraction
    solver: Callable[[LatticeBasis], RVector]
    name: str = "svp-linf"

    def find(self, basis: LatticeBasis) -> tuple[RVector, tuple[int, ...]]:
        x = self.solver(basis)
        coeffs = lattice_membership(basis, x)
        if coeffs is None:
            raise OracleContractViolation(f"{self.name}: vector is not a lattice point")
        if not any(coeffs):
            raise OracleContractViolation(f"{self.name}: returned the zero vector")
        if x.inf_norm() > self.rho:
            raise OracleContractViolation(
                f"{self.name}: max norm {x.inf_norm()} exceeds rho = {self.rho}"
            )
        return x, coeffs


@dataclass
class BoundedNbpOracle:
    """Balancing oracle with coefficients in {-k..k} and a per-dimension guarantee."""

    k: int
    guarantee: Callable[[int], Fraction]
    solver: Callable[[NbpInstance], Sequence[int]]
    name: str = "bounded-nbp"

    def solve(self, inst: NbpInstance) -> tuple[int, ...]:
        x = tuple(int(v) for v in self.solver(inst))
        if len(x) != inst.n:
            raise OracleContractViolation(f"{self.name}: dimension mismatch")
        if not any(x):
            raise OracleContractViolation(f"{self.name}: returned the zero vector")
        if max(abs(v) for v in x) > self.k:
            raise OracleContractViolation(f"{self.name}: coefficient exceeds {self.k}")
        err = abs(instance_inner(inst, x))
        bound = self.guarantee(inst.n)
        if err > bound:
            raise OracleContractViolation(
                f"{self.name}: error {err} exceeds guarantee {bound} at n={inst.n}"
            )
        return x


@dataclass
class NbpDeltaOracle:
    """Sign-vector balancing oracle with guarantee |<a,x>| <= delta(n)."""

    delta: Callable[[int], Fraction]
    solver: Callable[[NbpInstance], Sequence[int]]
    name: str = "nbp-delta"

    def solve(self, inst: NbpInstance) -> tuple[int, ...]:
        x = tuple(int(v) for v in self.solver(inst))
        if len(x) != inst.n:
            raise OracleContractViolation(f"{self.name}: dimension mismatch")
        if not any(x):
            raise OracleContractViolation(f"{self.name}: returned the zero vector")
        if max(abs(v) for v in x) > 1:
            raise OracleContractViolation(f"{self.name}: not a sign vector")
        err = abs(instance_inner(inst, x))
        bound = self.delta(inst.n)
        if err > bound:
            raise OracleContractViolation(
                f"{self.name}: error {err} exceeds delta {bound} at n={inst.n}"
            )
        return x


# ---------------------------------------------------------------------------
# standard realizations


def exact_minkowski_oracle(budget: int | None = None) -> MinkowskiOracle:
    """rho = 1, realized by the exact integer-point enumeration."""
    return MinkowskiOracle(
        rho=Fraction(1),
        solver=lambda body: minkowski_exact_oracle(body, budget),
        name="exact-minkowski",
    )


def exact_svp_oracle(budget: int | None = None) -> SvpInfOracle:
    """rho = 1 for det <= 1 lattices (Minkowski guarantees attainability)."""

    def solve(basis: LatticeBasis) -> RVector:
        if abs(determinant(basis.B)) > 1:
            raise PreconditionFailed("exact SVP oracle requires det <= 1")
        y = svp_exact_linf(basis, search_bound=Fraction(1), budget=budget)
        return basis.B.matvec(RVector(y))

    return SvpInfOracle(rho=Fraction(1), solver=solve, name="exact-svp-linf")


def lll_svp_rho(dim: int) -> Fraction:
    """Claimed rho of the LLL oracle: 2^ceil((dim-1)/4) >= 2^((dim-1)/4)."""
    return Fraction(2 ** ((dim - 1 + 3) // 4))


def lll_svp_oracle(dim: int) -> SvpInfOracle:
    """Approximate oracle: LLL-reduce, return the best reduced basis column."""

    def solve(basis: LatticeBasis) -> RVector:
        reduced, _, _ = lll_reduce(basis)
        cols = [reduced.B.column(j) for j in range(reduced.n)]
        return min(cols, key=lambda c: c.inf_norm())

    return SvpInfOracle(rho=lll_svp_rho(dim), solver=solve, name="lll-svp-linf")


def mitm_exact_guarantee(k: int) -> Callable[[int], Fraction]:
    """Pigeonhole bound the exact solver always meets: 2dk/((k+1)^d - 1)."""
    return lambda d: Fraction(2 * d * k, (k + 1) ** d - 1)


def mitm_bounded_oracle(k: int, budget: int | None = None) -> BoundedNbpOracle:
    return BoundedNbpOracle(
        k=k,
        guarantee=mitm_exact_guarantee(k),
        solver=lambda inst: mitm_min(inst, k, budget).x,
        name=f"exact-mitm(k={k})",
    )


def mitm_delta_oracle(budget: int | None = None) -> NbpDeltaOracle:
    return NbpDeltaOracle(
        delta=mitm_exact_guarantee(1),
        solver=lambda inst: mitm_min(inst, 1, budget).x,
        name="exact-mitm-delta",
    )


def claimed_delta_oracle(
    delta: Callable[[int], Fraction], budget: int | None = None, name: str = "claimed-mitm"
) -> NbpDeltaOracle:
    """Exact solver with a caller-supplied claimed guarantee.

    The claim need not be worst-case sound; it is re-verified on every call,
    which is how the paper's canonical f(n) = 2^-n oracle is represented at
    desk scale.
    """
    return NbpDeltaOracle(
        delta=delta,
        solver=lambda inst: mitm_min(inst, 1, budget).x,
        name=name,
    )


def kk_delta_oracle() -> NbpDeltaOracle:
    """Karmarkar-Karp; the only a-priori sound claim is max|a_i| <= 1."""
    return NbpDeltaOracle(
        delta=lambda d: Fraction(1),
        solver=lambda inst: karmarkar_karp(inst).x,
        name="karmarkar-karp-delta",
    )


def pigeonhole_delta_oracle(pigeons: Callable[[int], int] | None = None) -> NbpDeltaOracle:
    pigeons = pigeons or (lambda d: d**3)

    def delta(d: int) -> Fraction:
        n_pigeons = pigeons(d)
        return Fraction(2 * n_pigeons.bit_length(), n_pigeons)

    return NbpDeltaOracle(
        delta=delta,
        solver=lambda inst: pigeonhole_solve(inst, pigeons(inst.n)).x,
        name="pigeonhole-delta",
    )


def adversarial_delta_oracle() -> NbpDeltaOracle:
    """Claims the paper's 2^-n guarantee but just returns e_1; for failure-path tests."""
    return NbpDeltaOracle(
        delta=lambda d: Fraction(1, 2**d),
        solver=lambda inst: (1,) + (0,) * (inst.n - 1),
        name="adversarial-delta",
    )


def adversarial_minkowski_oracle() -> MinkowskiOracle:
    """Claims rho = 1 but returns a far-away integer point."""

    def solve(body: SymmetricConvexBody) -> tuple[int, ...]:
        far = body.int_box_limit() + 5
        return (far,) + (0,) * (body.dim - 1)

    return MinkowskiOracle(rho=Fraction(1), solver=solve, name="adversarial-minkowski")
