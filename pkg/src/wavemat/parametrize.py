"""One-to-one map between parameter points and WM1 wavelet matrices.

A parameter point is an ``(m-1) x N`` array ``gamma``; row ``i`` defines
``zeta_i(z) = sum_k gamma[i][k-1] z^-k``.  The forward direction solves
``m`` Hermitian positive definite systems sharing the Gram matrix

    Delta = sum_i Theta_i conj(Theta_i) + I,

where ``Theta_i`` is the Hankel matrix with first row
``(0, gamma_i1, ..., gamma_iN)``.  The inverse direction reads the
parameters off a series division of one column of ``U``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import linalg
from .core import PU1Matrix, WaveletMatrix, certify_pu1, from_pu1, to_pu1
from .errors import (
    CertificationError,
    DimensionMismatch,
    NoNonzeroConstant,
    NotPositiveDefinite,
    NotPU1,
    SingularV1,
    WaveMatError,
)
from .field import C64, QI, Field, GaussianRational
from .laurent import LaurentPoly, PolyMatrix

__all__ = [
    "ParamPoint",
    "build_theta",
    "build_gram",
    "factor_hpd",
    "solve_hpd",
    "assemble_v",
    "f_matrix",
    "forward_map",
    "generate",
    "inverse_map",
    "wavelet_to_params",
]


@dataclass(frozen=True)
class ParamPoint:
    m: int
    N: int
    gamma: tuple
    field: Field = C64

    def __post_init__(self):
        if self.m < 1 or self.N < 0:
            raise DimensionMismatch("need m >= 1 and N >= 0")
        rows = [list(r) for r in self.gamma]
        if len(rows) != self.m - 1 or any(len(r) != self.N for r in rows):
            raise DimensionMismatch(
                f"gamma must be {self.m - 1}x{self.N}, got "
                f"{len(rows)}x{[len(r) for r in rows]}"
            )
        gamma = tuple(tuple(self.field.coerce(g) for g in r) for r in rows)
        object.__setattr__(self, "gamma", gamma)

    @classmethod
    def zeros(cls, m, N, field=C64):
        return cls(m, N, tuple((0,) * N for _ in range(m - 1)), field)

    def zeta(self, i):
        """``zeta_i`` as a Laurent polynomial in ``P-_N`` (0-based ``i``)."""
        return LaurentPoly(list(reversed(self.gamma[i])), -self.N, self.field)

    def max_abs_diff(self, other):
        if (self.m, self.N) != (other.m, other.N):
            raise DimensionMismatch("parameter points of different shape")
        return max(
            (abs(complex(a) - complex(b)) for ra, rb in zip(self.gamma, other.gamma) for a, b in zip(ra, rb)),
            default=0.0,
        )

    def close(self, other, tol=1e-8):
        d = self.max_abs_diff(other)
        return d == 0 if self.field.exact else d <= tol


def build_theta(p: ParamPoint):
    """``Theta_1 .. Theta_{m-1}``: entry ``(r, c)`` is ``gamma_{i, r+c}`` for ``1 <= r+c <= N``."""
    n = p.N + 1
    zero = p.field.zero
    thetas = []
    for g in p.gamma:
        thetas.append(
            [[g[r + c - 1] if 1 <= r + c <= p.N else zero for c in range(n)] for r in range(n)]
        )
    return thetas


def build_gram(thetas, N, field: Field = C64):
    """``Delta = sum_i Theta_i conj(Theta_i) + I_{N+1}``."""
    delta = linalg.eye(N + 1, field)
    for T in thetas:
        delta = linalg.add(delta, linalg.matmul(T, linalg.conj_entries(T)))
    return delta


def _field_of(M):
    return QI if isinstance(M[0][0], GaussianRational) else C64


class _LDLFactor:
    """Square-root-free ``Delta = L D L*`` for the exact backend."""

    def __init__(self, delta, field):
        n = len(delta)
        L = linalg.eye(n, field)
        D = []
        for j in range(n):
            s = delta[j][j]
            for k in range(j):
                s = s - L[j][k] * L[j][k].conjugate() * D[k]
            if s.im or s.re <= 0:
                raise NotPositiveDefinite(f"pivot {j} is {s}")
            D.append(s)
            for i in range(j + 1, n):
                t = delta[i][j]
                for k in range(j):
                    t = t - L[i][k] * L[j][k].conjugate() * D[k]
                L[i][j] = t / s
        self.L, self.D, self.field = L, D, field

    def solve(self, b):
        L, D, n = self.L, self.D, len(self.D)
        y = list(b)
        for i in range(n):
            for k in range(i):
                y[i] = y[i] - L[i][k] * y[k]
        y = [yi / d for yi, d in zip(y, D)]
        for i in reversed(range(n)):
            for k in range(i + 1, n):
                y[i] = y[i] - L[k][i].conjugate() * y[k]
        return y

    def det(self):
        out = self.field.one
        for d in self.D:
            out = out * d
        return out


class _CholeskyFactor:
    def __init__(self, delta):
        self.a = np.array([[complex(x) for x in row] for row in delta])
        try:
            self.cho = scipy.linalg.cho_factor(self.a, lower=True)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite(str(exc)) from None

    def solve(self, b):
        x = scipy.linalg.cho_solve(self.cho, np.array([complex(v) for v in b]))
        return [complex(v) for v in x]

    def det(self):
        return float(np.prod(np.abs(np.diag(self.cho[0])) ** 2))


def factor_hpd(delta, field: Field | None = None):
    """Factor a Hermitian positive definite matrix once for many solves."""
    field = field or _field_of(delta)
    return _LDLFactor(delta, field) if field.exact else _CholeskyFactor(delta)


def solve_hpd(delta, b, field: Field | None = None):
    return factor_hpd(delta, field).solve(b)


def assemble_v(p: ParamPoint, order=None):
    """The matrix ``V(z)`` whose columns solve the defining linear conditions.

    ``order`` permutes which right-hand side is solved for which column;
    it exists so tests can check that ``U`` does not depend on it.
    """
    m, N, field = p.m, p.N, p.field
    thetas = build_theta(p)
    fac = factor_hpd(build_gram(thetas, N, field), field)
    rhs = [[T[r][0] for r in range(N + 1)] for T in thetas]
    rhs.append([field.one] + [field.zero] * N)
    zeta_adj = [p.zeta(i).adjoint() for i in range(m - 1)]
    order = list(range(m)) if order is None else list(order)
    cols = []
    for j in order:
        x = fac.solve(rhs[j])
        v_m = LaurentPoly(list(reversed(x)), -N, field)
        col = []
        for i in range(m - 1):
            e = (zeta_adj[i] * v_m).proj_plus()
            if i == j:
                e = e - field.one
            col.append(e)
        col.append(v_m)
        cols.append(col)
    return PolyMatrix([list(r) for r in zip(*cols)], field)


def f_matrix(p: ParamPoint):
    """Identity with last row ``(zeta_1, ..., zeta_{m-1}, 1)``."""
    field = p.field
    rows = [
        [LaurentPoly.constant(field.one if i == j else field.zero, field) for j in range(p.m)]
        for i in range(p.m - 1)
    ]
    rows.append([p.zeta(i) for i in range(p.m - 1)] + [LaurentPoly.constant(field.one, field)])
    return PolyMatrix(rows, field)


def forward_map(p: ParamPoint) -> PU1Matrix:
    """The unique ``U`` in PU1 with ``F(z) U(z)`` polynomial."""
    if p.N < 1:
        raise WaveMatError("the forward map needs N >= 1")
    field = p.field
    V = assemble_v(p)
    V1inv = linalg.inverse(V.evaluate(field.one), field, error=SingularV1)
    U = PU1Matrix(V.right_const(V1inv), p.N)
    try:
        certify_pu1(U)
    except NotPU1 as exc:
        raise CertificationError(f"forward map output failed certification: {exc}") from None
    neg = (f_matrix(p) @ U.poly).proj_minus()
    neg_res = max((abs(complex(c)) for e in neg.entries() for c in e.coeffs), default=0.0)
    if (not neg.is_zero()) if field.exact else not field.residual_ok(neg_res):
        raise CertificationError("F(z)U(z) has negative powers")
    return U


def generate(p: ParamPoint) -> WaveletMatrix:
    """Wavelet matrix in WM1(m, N, N) for the parameter point ``p``.

    ``N = 0`` yields the identity, the only member of that class.
    """
    if p.N == 0:
        return WaveletMatrix(PolyMatrix.identity(p.m, p.field), 0, certified=True)
    return from_pu1(forward_map(p))


def _pick_column(u_last, field, column):
    consts = [u.coeff(0) for u in u_last]
    if column is not None:
        if field.is_zero(consts[column]):
            raise NoNonzeroConstant(f"u_m{column + 1}(0) is zero")
        return column
    nonzero = [j for j, c in enumerate(consts) if not field.is_zero(c)]
    if not nonzero:
        raise NoNonzeroConstant("every u_mj vanishes at 0; input is not in PU1")
    if field.exact:
        return nonzero[0]
    return max(nonzero, key=lambda j: abs(consts[j]))


def inverse_map(U: PU1Matrix, column=None) -> ParamPoint:
    """Parameters of ``U``: ``zeta_i = [u~_ij / u_mj]^-`` for an admissible ``j``."""
    field, N, m = U.field, U.N, U.m
    if N == 0:
        return ParamPoint.zeros(m, 0, field)
    u_last = U.last_row_polys()
    j = _pick_column(u_last, field, column)
    r = u_last[j].series_reciprocal(N + 1)
    gamma = []
    for i in range(m - 1):
        q = U.poly[i, j].adjoint() * r
        gamma.append([q.coeff(-k) for k in range(1, N + 1)])
    return ParamPoint(m, N, tuple(map(tuple, gamma)), field)


def wavelet_to_params(A: WaveletMatrix) -> ParamPoint:
    return inverse_map(to_pu1(A))
