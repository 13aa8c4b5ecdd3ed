"""Completion of a paraunitary first row to a full wavelet matrix.

Given a low-pass row ``r`` of order ``N`` and a constant unitary ``V``
whose first row is ``r(1)``, there is exactly one ``A`` in WM(m, N, N)
with first row ``r`` and ``A(1) = V``.  The construction works with
``s = r V*``, the first row of ``A0 = A V*`` (which has ``A0(1) = I``),
and reads parameters off the column form of ``A0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import linalg
from .core import WaveletMatrix, from_pu1, order_degree
from .errors import (
    CertificationError,
    DimensionMismatch,
    NotUnitary,
    NotUnitRow,
    OrderSlack,
    ValueMismatch,
)
from .field import C64, Field
from .laurent import LaurentPoly, PolyMatrix
from .parametrize import ParamPoint, forward_map

__all__ = ["RowVector", "complete_from_row"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RowVector:
    """``m`` entries in ``P+_N`` forming a candidate first row."""

    entries: tuple
    N: int
    field: Field = C64

    def __post_init__(self):
        f = self.field
        entries = tuple(
            e if isinstance(e, LaurentPoly) else LaurentPoly.constant(f.coerce(e), f)
            for e in self.entries
        )
        if not entries:
            raise DimensionMismatch("a row needs at least one entry")
        if self.N < 0 or not all(e.in_plus(self.N) for e in entries):
            raise DimensionMismatch(f"row entries must lie in P+_{self.N}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_coeffs(cls, coeffs, field: Field = C64):
        """From a ``[k][col]`` coefficient array; the order is ``len(coeffs) - 1``."""
        m = len(coeffs[0])
        if any(len(c) != m for c in coeffs):
            raise DimensionMismatch("ragged row coefficient array")
        entries = tuple(
            LaurentPoly([field.coerce(c[j]) for c in coeffs], 0, field) for j in range(m)
        )
        return cls(entries, len(coeffs) - 1, field)

    @property
    def m(self):
        return len(self.entries)

    def coeffs(self):
        return [[e.coeff(k) for e in self.entries] for k in range(self.N + 1)]

    def at_one(self):
        return [e.evaluate(self.field.one) for e in self.entries]

    def norm_residual(self):
        """``sum_j a_j a~_j - 1``; zero for a paraunitary row."""
        f = self.field
        acc = LaurentPoly.constant(-f.one, f)
        for e in self.entries:
            acc = acc + e * e.adjoint()
        return acc


def _residual(P, field):
    res = max((abs(complex(c)) for c in P.coeffs), default=0.0)
    return (not P.is_zero()) if field.exact else not field.residual_ok(res), res


def _column_params(s, N, field):
    """Parameters of the WM1 column whose entries are ``s`` (last entry carries ``z^N``)."""
    m = len(s)
    den = s[-1].adjoint().shift(N).series_reciprocal(N + 1)
    gamma = []
    for i in range(m - 1):
        q = s[i].adjoint() * den
        gamma.append(tuple(q.coeff(-k) for k in range(1, N + 1)))
    return ParamPoint(m, N, tuple(gamma), field)


def _swap(m, p):
    perm = list(range(m))
    perm[p], perm[m - 1] = perm[m - 1], perm[p]
    return perm


def _complete_normalized(s, N, field):
    """The unique ``A0`` in WM0(m, N, N) with first row ``s`` (``s(1) = e_1``)."""
    m = len(s)
    if N == 0:
        return PolyMatrix.identity(m, field)
    top = [e.coeff(N) for e in s]
    cand = [j for j in range(1, m) if not field.is_zero(top[j])]
    if not cand:
        # only the first coordinate reaches z^N: the rightmost primitive
        # factor is diag(z, 1, ..., 1), so divide it out and recurse
        log.debug("completion: peeling diag(z, 1, ..., 1) at order %d", N)
        s1 = [s[0].shift(-1)] + list(s[1:])
        C = _complete_normalized(s1, N - 1, field)
        return C @ PolyMatrix.diag(
            [LaurentPoly.monomial(field.one, 1, field)]
            + [LaurentPoly.constant(field.one, field)] * (m - 1),
            field,
        )
    p = cand[0] if field.exact else max(cand, key=lambda j: abs(complex(top[j])))
    perm = _swap(m, p)
    log.debug("completion: coordinate %d moved to position %d", p, m - 1)
    sp = [s[j] for j in perm]
    U = forward_map(_column_params(sp, N, field))
    B = from_pu1(U).poly
    # B is the transpose of the permuted A0; undo both
    return B.transpose().permute_rows(perm).permute_columns(perm)


def complete_from_row(r: RowVector, V=None) -> WaveletMatrix:
    """The unique wavelet matrix with first row ``r`` and ``A(1) = V``.

    ``V`` defaults to the identity, in which case ``r(1)`` must be ``e_1``.
    """
    field, m, N = r.field, r.m, r.N
    if V is None:
        V = linalg.eye(m, field)
    V = linalg.coerce_matrix(V, field)
    if linalg.shape(V) != (m, m):
        raise DimensionMismatch(f"V must be {m}x{m}")
    VV = linalg.matmul(V, linalg.adjoint(V))
    if not linalg.equal(VV, linalg.eye(m, field), field):
        raise NotUnitary(f"V V* differs from I by {linalg.max_abs_diff(VV, linalg.eye(m, field)):.3g}")
    bad, res = _residual(r.norm_residual(), field)
    if bad:
        raise NotUnitRow(f"sum_j a_j a~_j differs from 1 by {res:.3g}")
    if not linalg.equal([r.at_one()], [V[0]], field):
        raise ValueMismatch("r(1) is not the first row of V")
    if all(field.is_zero(e.coeff(N)) for e in r.entries):
        raise OrderSlack(f"no entry has a nonzero z^{N} coefficient")

    Vs = PolyMatrix.constant(linalg.adjoint(V), field)
    s = list((PolyMatrix([list(r.entries)], field) @ Vs).rows[0])
    A0 = _complete_normalized(s, N, field)
    A = WaveletMatrix(A0.right_const(V), N)
    A.certify()
    if order_degree(A).degree != N:
        raise CertificationError("completion is not of degree N")
    first = PolyMatrix([A.row(0)], field) - PolyMatrix([list(r.entries)], field)
    bad, res = _residual(
        LaurentPoly([c for e in first.entries() for c in e.coeffs], 0, field), field
    )
    if bad:
        raise CertificationError(f"completed first row deviates by {res:.3g}")
    return A
