"""Factorization of WM0 matrices into primitive (degree one) factors.

Every ``A`` in WM0(m, N, N) factors uniquely as

    A(z) = V_1(z) V_2(z) ... V_N(z),   V_j(z) = (I - P_j) + P_j z,

with rank-one projections ``P_j`` and ``P_j P_{j+1} != 0``.  The left
factor is found from the left null vector of ``A_0``; dividing it out
drops order and degree by one.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .core import PrimitiveFactor, WaveletMatrix, is_primitive, order_degree
from .errors import (
    CertificationError,
    ConsecutiveOrthogonal,
    OrderMismatch,
    RankDefect,
    ValueMismatch,
)
from .field import C64, Field
from .laurent import PolyMatrix

__all__ = [
    "PrimitiveFactor",
    "FactorChain",
    "is_primitive",
    "extract_left_factor",
    "factorize",
    "product_chain",
    "chain_from_vectors",
    "primitive_matrix",
]


@dataclass(frozen=True)
class FactorChain:
    factors: tuple
    m: int
    field: Field = C64

    def __post_init__(self):
        factors = tuple(
            f if isinstance(f, PrimitiveFactor) else PrimitiveFactor(tuple(f), self.field)
            for f in self.factors
        )
        if any(f.m != self.m for f in factors):
            raise ValueError(f"every direction must have length {self.m}")
        object.__setattr__(self, "factors", factors)

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def same_as(self, other, tol=1e-7):
        """Projective equality of the directions, factor by factor."""
        return len(self) == len(other) and all(
            a.same_direction(b, tol) for a, b in zip(self.factors, other.factors)
        )


def _is_identity(M, field):
    return linalg.equal(M, linalg.eye(len(M), field), field)


def extract_left_factor(A: WaveletMatrix):
    """Split ``A = V_1 B``; returns ``(factor, B)`` with ``ord(B) = N - 1``."""
    field = A.field
    A0 = A.coeff(0)
    r0 = linalg.rank(A0, field)
    if A.N < 1 or r0 != A.m - 1:
        raise RankDefect(f"rank(A_0) = {r0}, need {A.m - 1} (order {A.N})")
    v = linalg.nullspace(linalg.adjoint(A0), field)[0]
    f = PrimitiveFactor(tuple(v), field)
    B = f.matrix().adjoint() @ A.poly
    neg = B.proj_minus()
    res = max((abs(complex(c)) for e in neg.entries() for c in e.coeffs), default=0.0)
    if (not neg.is_zero()) if field.exact else not field.residual_ok(res):
        raise CertificationError(f"left quotient has negative powers (residual {res:.3g})")
    B = B.proj_plus()
    sup = B.support
    if sup is None or sup[1] != A.N - 1:
        raise OrderMismatch(f"quotient has order {sup and sup[1]}, expected {A.N - 1}")
    return f, WaveletMatrix(B, A.N - 1, certified=A.certified)


def factorize(A: WaveletMatrix) -> FactorChain:
    """The unique chain of primitive factors of ``A`` in WM0(m, N, N)."""
    A.certify()
    if not _is_identity(A.at_one(), A.field):
        raise ValueMismatch("factorization needs A(1) = I; apply normalize_linear first")
    factors = []
    B = A
    while B.N > 0:
        f, B = extract_left_factor(B)
        factors.append(f)
    return FactorChain(tuple(factors), A.m, A.field)


def product_chain(chain: FactorChain) -> WaveletMatrix:
    """``prod_j (I - P_j + P_j z)``, certified in WM0(m, N, N)."""
    factors = chain.factors
    if not factors:
        raise ValueError("a chain needs at least one factor")
    field = chain.field
    for j in range(len(factors) - 1):
        if field.is_zero(factors[j].inner(factors[j + 1])):
            raise ConsecutiveOrthogonal(j)
    prod = factors[0].matrix()
    for f in factors[1:]:
        prod = prod @ f.matrix()
    A = WaveletMatrix(prod, len(factors))
    A.certify()
    od = order_degree(A)
    if od.degree != od.order:
        raise CertificationError(f"product has degree {od.degree} but order {od.order}")
    return A


def chain_from_vectors(vectors, field: Field = C64) -> FactorChain:
    vectors = [tuple(v) for v in vectors]
    return FactorChain(tuple(PrimitiveFactor(v, field) for v in vectors), len(vectors[0]), field)


def primitive_matrix(v, field: Field = C64) -> PolyMatrix:
    return PrimitiveFactor(tuple(v), field).matrix()
