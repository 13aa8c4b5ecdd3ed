"""Compact wavelet matrices and their classification.

A wavelet matrix of rank ``m`` and order ``N`` is stored through its
polyphase representation ``A(z) = A_0 + A_1 z + ... + A_N z^N``.  The
classes used throughout the package are

* ``WM``  -- paraunitary, ``A(z) A~(z) = I``;
* ``WM0`` -- additionally ``A(1) = I`` and degree equal to order;
* ``WM1`` -- additionally the last row of ``A_N`` is nonzero.

``WM1`` is in bijection with the mixed-causality class ``PU1`` (last row
multiplied by ``z^-N``), see :func:`to_pu1` / :func:`from_pu1`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

import numpy as np

from . import linalg
from .errors import (
    CertificationError,
    DetNotMonomial,
    DimensionMismatch,
    NotInWM1,
    NotParaunitary,
    NotPU1,
    OrderMismatch,
)
from .field import C64, Field
from .laurent import LaurentPoly, PolyMatrix

__all__ = [
    "WaveletMatrix",
    "PU1Matrix",
    "FlatWaveletRows",
    "PrimitiveFactor",
    "ParaunitaryReport",
    "OrderDegree",
    "check_paraunitary",
    "shifted_orthogonality_residual",
    "from_flat",
    "to_flat",
    "det_monomial",
    "order_degree",
    "normalize_linear",
    "wm1_failures",
    "classify",
    "to_pu1",
    "from_pu1",
    "certify_pu1",
    "is_primitive",
]


class ParaunitaryReport(NamedTuple):
    ok: bool
    residual: float


class OrderDegree(NamedTuple):
    order: int
    degree: int
    rank0: int


@dataclass(frozen=True)
class WaveletMatrix:
    """Polyphase matrix ``A(z)`` with its declared order ``N``.

    Construction checks the shape and that the trimmed support is exactly
    ``[0, N]``; :meth:`certify` checks paraunitarity and the determinant.
    """

    poly: PolyMatrix
    N: int
    certified: bool = dc_field(default=False, compare=False, repr=False)

    def __post_init__(self):
        m, n = self.poly.shape
        if m != n:
            raise DimensionMismatch(f"wavelet matrix must be square, got {m}x{n}")
        if self.N < 0:
            raise OrderMismatch("order must be nonnegative")
        sup = self.poly.support
        if sup is None:
            raise NotParaunitary("the zero matrix is not a wavelet matrix")
        if sup[0] < 0 or sup[1] != self.N:
            raise OrderMismatch(
                f"declared order {self.N} but coefficients occupy exponents {sup[0]}..{sup[1]}"
            )

    @classmethod
    def from_coeffs(cls, mats, field: Field = C64):
        mats = [linalg.coerce_matrix(M, field) for M in mats]
        return cls(PolyMatrix.from_coeffs(mats, 0, field), len(mats) - 1)

    @property
    def m(self):
        return self.poly.shape[0]

    @property
    def field(self):
        return self.poly.field

    def coeff(self, k):
        return self.poly.coeff(k)

    def coeffs(self):
        return self.poly.coeff_list(0, self.N)

    def at_one(self):
        return self.poly.evaluate(self.field.one)

    def row(self, i):
        return list(self.poly.rows[i])

    def certify(self):
        """Raise unless paraunitary with a unimodular monomial determinant."""
        if self.certified:
            return self
        rep = check_paraunitary(self.poly)
        if not rep.ok:
            raise NotParaunitary(f"A(z)A~(z) differs from I by {rep.residual:.3g}")
        c, _ = det_monomial(self.poly)
        if not _unimodular(c, self.field):
            raise DetNotMonomial(f"determinant leading coefficient {c} is not unimodular")
        object.__setattr__(self, "certified", True)
        return self

    def close(self, other, tol=None):
        return self.N == other.N and self.poly.close(other.poly, tol)

    def max_abs_diff(self, other):
        return self.poly.max_abs_diff(other.poly)


@dataclass(frozen=True)
class PU1Matrix:
    """``U(z)`` whose first ``m-1`` rows lie in ``P+_N`` and whose last row
    holds adjoints of polynomials in ``P+_N``."""

    poly: PolyMatrix
    N: int
    certified: bool = dc_field(default=False, compare=False, repr=False)

    @property
    def m(self):
        return self.poly.shape[0]

    @property
    def field(self):
        return self.poly.field

    def last_row_polys(self):
        """The polynomials ``u_mj`` (adjoints of the stored last row)."""
        return [e.adjoint() for e in self.poly.rows[-1]]

    def close(self, other, tol=None):
        return self.N == other.N and self.poly.close(other.poly, tol)


@dataclass(frozen=True)
class FlatWaveletRows:
    """The ``m`` flat scalar rows ``a^i_j``, ``j = 0 .. m(N+1)-1``."""

    rows: tuple
    m: int

    def __post_init__(self):
        if len(self.rows) != self.m:
            raise DimensionMismatch(f"expected {self.m} rows, got {len(self.rows)}")


@dataclass(frozen=True)
class PrimitiveFactor:
    """Direction ``v`` of the rank-one projection in ``V(z) = I - P + P z``.

    The stored vector is the canonical projective representative: first
    nonzero coordinate equal to 1 on the exact backend; unit 2-norm with a
    real positive first nonzero coordinate on the float backend.
    """

    v: tuple
    field: Field = C64

    def __post_init__(self):
        f = self.field
        v = [f.coerce(x) for x in self.v]
        lead = next((x for x in v if not f.is_zero(x)), None)
        if lead is None:
            raise ValueError("a primitive factor needs a nonzero direction")
        if f.exact:
            scale = f.one / lead
        else:
            norm = sum(abs(x) ** 2 for x in v) ** 0.5
            scale = abs(lead) / (lead * norm)
        object.__setattr__(self, "v", tuple(x * scale for x in v))

    @property
    def m(self):
        return len(self.v)

    def projection(self):
        """``P = v (v* v)^-1 v*``."""
        v = self.v
        inv = self.field.one / sum((x * x.conjugate() for x in v), start=self.field.zero)
        return [[a * b.conjugate() * inv for b in v] for a in v]

    def matrix(self):
        """``V(z) = (I - P) + P z``."""
        P = self.projection()
        Q = linalg.sub(linalg.eye(self.m, self.field), P)
        return PolyMatrix.from_coeffs([Q, P], 0, self.field)

    def inner(self, other):
        return sum((a * b.conjugate() for a, b in zip(self.v, other.v)), start=self.field.zero)

    def same_direction(self, other, tol=1e-7):
        if self.m != other.m:
            return False
        d = max(abs(complex(a - b)) for a, b in zip(self.v, other.v))
        return d == 0 if self.field.exact and other.field.exact else d <= tol


# -- checks -------------------------------------------------------------------


def _unimodular(c, field):
    if field.exact:
        return c.abs2() == 1
    return abs(abs(c) - 1) <= field.policy.residual_eps


def _identity_residual(P):
    """Max-norm of ``P(z) - I`` over all coefficients, and exact flag."""
    n = P.shape[0]
    field = P.field
    res = 0.0
    exact_zero = True
    for i, r in enumerate(P.rows):
        for j, e in enumerate(r):
            d = e - field.one if i == j else e
            for c in d.coeffs:
                if c:
                    exact_zero = False
                res = max(res, abs(complex(c)))
    return res, exact_zero


def check_paraunitary(A, pol=None):
    """Residual ``max_l || sum_k A_k A*_{k+l} - delta_l0 I ||_max``.

    On the exact backend ``ok`` means the residual is identically zero.
    """
    P = A.poly if isinstance(A, (WaveletMatrix, PU1Matrix)) else A
    m, n = P.shape
    if m != n:
        raise DimensionMismatch("paraunitarity is defined for square matrices")
    if P.field.exact:
        res, exact_zero = _identity_residual(P @ P.adjoint())
        return ParaunitaryReport(exact_zero, 0.0 if exact_zero else res)
    # raw block sums, so round-off below zero_eps is still reported
    sup = P.support
    if sup is None:
        return ParaunitaryReport(False, 1.0)
    lo, hi = sup
    C = np.array([[[complex(e.coeff(k)) for e in r] for r in P.rows] for k in range(lo, hi + 1)])
    res = 0.0
    for l in range(hi - lo + 1):
        S = np.einsum("kij,klj->il", C[: len(C) - l], C[l:].conj())
        if l == 0:
            S = S - np.eye(m)
        res = max(res, float(np.abs(S).max()))
    eps = (pol or P.field.policy).residual_eps
    return ParaunitaryReport(res <= eps, res)


def shifted_orthogonality_residual(rows, m, field=C64):
    """Max deviation from ``sum_k a^i_{k+mj} conj(a^r_{k+ms}) = delta_ir delta_js``.

    Works directly on the flat rows, independently of the polyphase form.
    """
    length = max(len(r) for r in rows)
    rows = [list(r) + [field.zero] * (length - len(r)) for r in rows]
    nblocks = -(-length // m)
    worst = 0.0
    exact_zero = True
    for t in range(-nblocks, nblocks + 1):
        for i in range(m):
            for r in range(m):
                s = field.zero
                for k in range(length):
                    kk = k + m * t
                    if 0 <= kk < length:
                        s = s + rows[i][kk] * rows[r][k].conjugate()
                if t == 0 and i == r:
                    s = s - field.one
                if s:
                    exact_zero = False
                worst = max(worst, abs(complex(s)))
    return worst, exact_zero


def from_flat(rows, field: Field = C64, m=None):
    """Polyphase matrix of flat rows (blocks ``A_k = (a^i_{km+j})``)."""
    if isinstance(rows, FlatWaveletRows):
        m = rows.m
        rows = rows.rows
    rows = [[field.coerce(a) for a in r] for r in rows]
    m = len(rows) if m is None else m
    if len(rows) != m:
        raise DimensionMismatch(f"expected {m} rows, got {len(rows)}")
    length = max(len(r) for r in rows)
    length = -(-length // m) * m
    rows = [r + [field.zero] * (length - len(r)) for r in rows]
    blocks = [[r[k * m : (k + 1) * m] for r in rows] for k in range(length // m)]

    def zero_block(B):
        return all(field.is_zero(a) for row in B for a in row)

    while blocks and zero_block(blocks[0]):
        blocks.pop(0)
    while blocks and zero_block(blocks[-1]):
        blocks.pop()
    if not blocks:
        raise NotParaunitary("all rows are zero")
    res, exact_zero = shifted_orthogonality_residual(
        [[a for B in blocks for a in B[i]] for i in range(m)], m, field
    )
    if not (exact_zero if field.exact else field.residual_ok(res)):
        raise NotParaunitary(f"rows violate shifted orthogonality (residual {res:.3g})")
    A = WaveletMatrix.from_coeffs(blocks, field)
    return A


def to_flat(A: WaveletMatrix) -> FlatWaveletRows:
    coeffs = A.coeffs()
    rows = tuple(tuple(a for Ak in coeffs for a in Ak[i]) for i in range(A.m))
    return FlatWaveletRows(rows, A.m)


def det_monomial(P):
    """``(c, d)`` with ``det P(z) = c z^d``; raises DetNotMonomial otherwise."""
    D = P.det()
    if D.is_zero() or len(D.coeffs) != 1:
        raise DetNotMonomial(f"determinant {D} is not a monomial")
    return D.coeffs[0], D.lo


def order_degree(A: WaveletMatrix) -> OrderDegree:
    """Order, degree and ``rank(A_0)``; checks ``d >= N`` and the rank criterion."""
    field = A.field
    N = A.poly.support[1]
    _, d = det_monomial(A.poly)
    r0 = linalg.rank(A.coeff(0), field)
    if N >= 1 and (d < N or (d == N) != (r0 == A.m - 1)):
        raise CertificationError(
            f"order {N}, degree {d}, rank(A_0) {r0} violate the order/degree relations"
        )
    return OrderDegree(N, d, r0)


def normalize_linear(A: WaveletMatrix) -> WaveletMatrix:
    """``A(1)^-1 A(z)``, which satisfies ``A(1) = I``."""
    inv = linalg.inverse(A.at_one(), A.field)
    return WaveletMatrix(A.poly.left_const(inv), A.N, certified=A.certified)


def _is_identity(M, field):
    return linalg.equal(M, linalg.eye(len(M), field), field)


def wm1_failures(A: WaveletMatrix):
    """Violated WM1 conditions (empty list means ``A`` is in WM1)."""
    failures = []
    field = A.field
    if not _is_identity(A.at_one(), field):
        failures.append("A(1) != I")
    od = order_degree(A)
    if od.degree != od.order:
        failures.append(f"degree {od.degree} != order {od.order}")
    last = A.coeff(A.N)[-1]
    if all(field.is_zero(a) for a in last):
        failures.append("last row of A_N is zero")
    return failures


def classify(A: WaveletMatrix):
    """Certification report used by ``wavemat check``."""
    rep = check_paraunitary(A.poly)
    out = {"paraunitary": rep.ok, "residual": rep.residual, "order": A.N}
    if not rep.ok:
        out["class"] = "none"
        return out
    od = order_degree(A)
    out.update(degree=od.degree, rank0=od.rank0)
    cls = "WM"
    field = A.field
    if _is_identity(A.at_one(), field) and od.degree == od.order:
        cls = "WM0"
        if not all(field.is_zero(a) for a in A.coeff(A.N)[-1]):
            cls = "WM1"
    out["class"] = cls
    return out


# -- the WM1 <-> PU1 shuttle ----------------------------------------------------


def to_pu1(A: WaveletMatrix) -> PU1Matrix:
    """``U(z) = diag(1, ..., 1, z^-N) A(z)``."""
    A.certify()
    failures = wm1_failures(A)
    if failures:
        hint = None
        field = A.field
        AN = A.coeff(A.N)
        if all(field.is_zero(a) for a in AN[-1]):
            hint = next(
                (i for i, row in enumerate(AN) if any(not field.is_zero(a) for a in row)), None
            )
        raise NotInWM1(failures, hint)
    return PU1Matrix(A.poly.shift_row(A.m - 1, -A.N), A.N, certified=True)


def certify_pu1(U: PU1Matrix) -> PU1Matrix:
    """Check every PU1 condition; raises :class:`NotPU1` listing failures."""
    if U.certified:
        return U
    P, N, field = U.poly, U.N, U.field
    m = U.m
    failures = []
    if P.shape != (m, m):
        raise DimensionMismatch("PU1 matrices are square")
    if not all(e.in_plus(N) for r in P.rows[:-1] for e in r):
        failures.append("rows 1..m-1 leave P+_N")
    last = U.last_row_polys()
    if not all(e.in_plus(N) for e in last):
        failures.append("last row is not adjoint of P+_N")
    res, exact_zero = _identity_residual(P.adjoint() @ P)
    if not (exact_zero if field.exact else field.residual_ok(res)):
        failures.append(f"U~U != I (residual {res:.3g})")
    D = P.det() - field.one
    det_res = max((abs(complex(c)) for c in D.coeffs), default=0.0)
    if (bool(D.coeffs) if field.exact else not field.residual_ok(det_res)):
        failures.append("det U != 1")
    if not _is_identity(P.evaluate(field.one), field):
        failures.append("U(1) != I")
    if all(field.is_zero(u.coeff(0)) for u in last):
        failures.append("every u_mj vanishes at 0")
    if failures:
        raise NotPU1("; ".join(failures))
    object.__setattr__(U, "certified", True)
    return U


def from_pu1(U: PU1Matrix) -> WaveletMatrix:
    """``A(z) = diag(1, ..., 1, z^N) U(z)``, certified in WM1."""
    certify_pu1(U)
    A = WaveletMatrix(U.poly.shift_row(U.m - 1, U.N), U.N)
    # paraunitarity, A(1) = I and det A = z^N are inherited from U; the
    # nonzero last row of A_N is the constant-term condition on the u_mj
    if all(A.field.is_zero(a) for a in A.coeff(A.N)[-1]):
        raise CertificationError("last row of A_N vanished")
    object.__setattr__(A, "certified", True)
    return A


def is_primitive(V) -> PrimitiveFactor | None:
    """Direction of ``P`` when ``V(z) = (I - P) + P z`` with ``rank P = 1``."""
    P_ = V.poly if isinstance(V, WaveletMatrix) else V
    field = P_.field
    sup = P_.support
    if sup is None or sup[0] < 0 or sup[1] > 1:
        return None
    m = P_.shape[0]
    Q, P = P_.coeff(0), P_.coeff(1)
    I = linalg.eye(m, field)
    if not linalg.equal(linalg.add(P, Q), I, field):
        return None
    if not linalg.equal(linalg.matmul(P, linalg.adjoint(P)), P, field):
        return None
    if linalg.rank(P, field) != 1:
        return None
    col = max(range(m), key=lambda j: sum(abs(complex(P[i][j])) for i in range(m)))
    return PrimitiveFactor(tuple(P[i][col] for i in range(m)), field)
