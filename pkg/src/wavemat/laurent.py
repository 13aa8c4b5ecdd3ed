"""Laurent polynomials and matrices of Laurent polynomials.

A :class:`LaurentPoly` stores a dense coefficient tuple over the exponent
window ``[lo, hi]``.  Both ends of the window are trimmed with the field's
zero test, so float round-off never inflates a reported order or degree.
The zero polynomial has an empty window.
"""

from __future__ import annotations

import cmath

import numpy as np
from gmpy2 import lcm, mpq, mpz

from . import linalg
from .errors import DimensionMismatch, EvalAtZero, WaveMatError, ZeroConstantTerm
from .field import C64, GaussianRational

__all__ = [
    "LaurentPoly",
    "PolyMatrix",
    "adjoint",
    "adjoint_matrix",
    "proj_plus",
    "proj_minus",
    "series_reciprocal",
    "evaluate",
    "mul",
    "det",
]


def _common_denominator(coeffs):
    D = mpz(1)
    for c in coeffs:
        for part in (c.re, c.im):
            d = part.denominator
            if d != 1:
                D = lcm(D, d)
    return D


def _scale_to_ints(coeffs, D):
    make = GaussianRational._make
    return [make(mpz(c.re * D), mpz(c.im * D)) for c in coeffs]


def _unscale(coeffs, D):
    make = GaussianRational._make
    if D == 1:
        return [make(mpq(c.re), mpq(c.im)) for c in coeffs]
    return [make(mpq(c.re, D), mpq(c.im, D)) for c in coeffs]


def _convolve(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = [None] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        for i, ai in enumerate(a):
            t = ai * bj
            k = i + j
            out[k] = t if out[k] is None else out[k] + t
    return out


def _trim(field, lo, coeffs):
    start, stop = 0, len(coeffs)
    while start < stop and field.is_zero(coeffs[start]):
        start += 1
    while stop > start and field.is_zero(coeffs[stop - 1]):
        stop -= 1
    if start == stop:
        return 0, ()
    return lo + start, tuple(coeffs[start:stop])


class LaurentPoly:
    """Finite sum ``c[lo] z^lo + ... + c[hi] z^hi`` over a scalar field."""

    __slots__ = ("field", "lo", "coeffs")

    def __init__(self, coeffs=(), lo=0, field=C64):
        self.field = field
        self.lo, self.coeffs = _trim(field, lo, [field.coerce(c) for c in coeffs])

    @classmethod
    def _raw(cls, field, lo, coeffs):
        obj = object.__new__(cls)
        obj.field = field
        obj.lo, obj.coeffs = _trim(field, lo, coeffs)
        return obj

    @classmethod
    def zero(cls, field=C64):
        return cls._raw(field, 0, ())

    @classmethod
    def constant(cls, c, field=C64):
        return cls((c,), 0, field)

    @classmethod
    def monomial(cls, c, k, field=C64):
        return cls((c,), k, field)

    @classmethod
    def from_dict(cls, terms, field=C64):
        """Build from ``{exponent: coefficient}``."""
        if not terms:
            return cls.zero(field)
        lo, hi = min(terms), max(terms)
        zero = field.zero
        return cls([terms.get(k, zero) for k in range(lo, hi + 1)], lo, field)

    # -- structure -------------------------------------------------------

    @property
    def hi(self):
        return self.lo + len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    @property
    def support(self):
        """``(lo, hi)`` or ``None`` for the zero polynomial."""
        return None if not self.coeffs else (self.lo, self.hi)

    def coeff(self, k):
        i = k - self.lo
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def terms(self):
        return {self.lo + i: c for i, c in enumerate(self.coeffs)}

    def in_plus(self, N=None):
        """Membership in P+ (or P+_N when ``N`` is given)."""
        if not self.coeffs:
            return True
        return self.lo >= 0 and (N is None or self.hi <= N)

    def in_minus(self, N=None):
        if not self.coeffs:
            return True
        return self.hi <= -1 and (N is None or self.lo >= -N)

    def is_constant(self):
        return not self.coeffs or (self.lo == 0 and len(self.coeffs) == 1)

    # -- arithmetic ------------------------------------------------------

    def _coerce_other(self, other):
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.constant(other, self.field)

    def __add__(self, other):
        other = self._coerce_other(other)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = [self.field.zero] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.lo - lo + i] = c
        for i, c in enumerate(other.coeffs):
            j = other.lo - lo + i
            out[j] = out[j] + c
        return LaurentPoly._raw(self.field, lo, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.field, self.lo, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce_other(other))

    def __rsub__(self, other):
        return self._coerce_other(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = self.field.coerce(other)
            return LaurentPoly._raw(self.field, self.lo, [a * c for a in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return LaurentPoly.zero(self.field)
        a, b = self.coeffs, other.coeffs
        if self.field.exact and len(a) * len(b) > 4:
            # integer products avoid a gcd per term
            Da, Db = _common_denominator(a), _common_denominator(b)
            out = _convolve(_scale_to_ints(a, Da), _scale_to_ints(b, Db))
            return LaurentPoly._raw(self.field, self.lo + other.lo, _unscale(out, Da * Db))
        return LaurentPoly._raw(self.field, self.lo + other.lo, _convolve(a, b))

    def __rmul__(self, other):
        return self * other

    def shift(self, k):
        """Multiply by ``z**k``."""
        return LaurentPoly._raw(self.field, self.lo + k, self.coeffs)

    def adjoint(self):
        """``sum conj(c_k) z^-k``."""
        return LaurentPoly._raw(
            self.field, -self.hi if self.coeffs else 0, [c.conjugate() for c in reversed(self.coeffs)]
        )

    def window(self, lo, hi):
        """Keep only the exponents in ``[lo, hi]``."""
        if not self.coeffs:
            return self
        a = max(lo, self.lo)
        b = min(hi, self.hi)
        if a > b:
            return LaurentPoly.zero(self.field)
        return LaurentPoly._raw(self.field, a, self.coeffs[a - self.lo : b - self.lo + 1])

    def proj_plus(self):
        return self.window(0, max(self.hi, 0))

    def proj_minus(self):
        return self.window(min(self.lo, -1), -1)

    def evaluate(self, z0):
        if not self.coeffs:
            return self.field.zero
        z0 = self.field.coerce(z0)
        if self.lo < 0 and self.field.is_zero(z0):
            raise EvalAtZero("Laurent polynomial with negative exponents evaluated at 0")
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * z0 + c
        if self.lo:
            acc = acc * z0**self.lo if self.lo > 0 else acc / z0 ** (-self.lo)
        return acc

    __call__ = evaluate

    def series_reciprocal(self, n_terms):
        """First ``n_terms`` coefficients of the power series ``1/p`` at 0."""
        if n_terms < 1:
            raise ValueError("n_terms must be positive")
        if not self.in_plus():
            raise WaveMatError("series reciprocal needs a polynomial in P+")
        p0 = self.coeff(0)
        if self.field.is_zero(p0):
            raise ZeroConstantTerm("constant coefficient is zero; 1/p has no power series at 0")
        p = [self.coeff(k) for k in range(n_terms)]
        inv0 = self.field.one / p0
        q = [inv0]
        for k in range(1, n_terms):
            s = p[1] * q[k - 1]
            for j in range(2, k + 1):
                s = s + p[j] * q[k - j]
            q.append(-s * inv0)
        return LaurentPoly._raw(self.field, 0, q)

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.field)
        return self.lo == other.lo and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.lo, self.coeffs))

    def max_abs_diff(self, other):
        if other.field != self.field or not self.field.exact:
            # coefficientwise in floating point; subtracting would trim
            # differences below zero_eps
            lo = min(self.lo, other.lo)
            hi = max(self.hi if self.coeffs else lo - 1, other.hi if other.coeffs else lo - 1)
            return max(
                (abs(complex(self.coeff(k)) - complex(other.coeff(k))) for k in range(lo, hi + 1)),
                default=0.0,
            )
        d = self - other
        return max((abs(complex(c)) for c in d.coeffs), default=0.0)

    def __repr__(self):
        if not self.coeffs:
            return "LaurentPoly(0)"
        parts = []
        for k, c in self.terms().items():
            if self.field.is_zero(c):
                continue
            parts.append(f"({c})" if k == 0 else f"({c})*z^{k}")
        return "LaurentPoly(" + " + ".join(parts) + ")"


class PolyMatrix:
    """Rectangular matrix of :class:`LaurentPoly` over one field."""

    __slots__ = ("field", "rows")

    def __init__(self, rows, field=None):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise DimensionMismatch("a PolyMatrix needs at least one row and column")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("ragged rows")
        if field is None:
            field = next((e.field for r in rows for e in r if isinstance(e, LaurentPoly)), C64)
        self.field = field
        self.rows = tuple(
            tuple(e if isinstance(e, LaurentPoly) else LaurentPoly.constant(e, field) for e in r)
            for r in rows
        )
        if any(e.field != field for r in self.rows for e in r):
            raise DimensionMismatch("entries use different scalar fields")

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_coeffs(cls, mats, lo=0, field=C64):
        """``sum_k mats[k] z^(lo+k)`` from a list of constant matrices."""
        r, c = linalg.shape(mats[0])
        rows = [
            [LaurentPoly([M[i][j] for M in mats], lo, field) for j in range(c)] for i in range(r)
        ]
        return cls(rows, field)

    @classmethod
    def constant(cls, M, field=C64):
        return cls.from_coeffs([M], 0, field)

    @classmethod
    def identity(cls, n, field=C64):
        return cls.constant(linalg.eye(n, field), field)

    @classmethod
    def diag(cls, entries, field=C64):
        entries = [e if isinstance(e, LaurentPoly) else LaurentPoly.constant(e, field) for e in entries]
        zero = LaurentPoly.zero(field)
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)], field)

    # -- structure -------------------------------------------------------

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for r in self.rows:
            yield from r

    @property
    def support(self):
        sups = [e.support for e in self.entries() if e.coeffs]
        if not sups:
            return None
        return min(s[0] for s in sups), max(s[1] for s in sups)

    def coeff(self, k):
        """Constant matrix coefficient of ``z**k``."""
        return [[e.coeff(k) for e in r] for r in self.rows]

    def coeff_list(self, lo, hi):
        return [self.coeff(k) for k in range(lo, hi + 1)]

    def is_zero(self):
        return all(e.is_zero() for e in self.entries())

    def in_plus(self, N=None):
        return all(e.in_plus(N) for e in self.entries())

    # -- arithmetic ------------------------------------------------------

    def _map(self, fn):
        return PolyMatrix([[fn(e) for e in r] for r in self.rows], self.field)

    def __add__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return PolyMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.field
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._map(lambda e: -e)

    def __matmul__(self, other):
        return mul(self, other)

    def scale(self, c):
        return self._map(lambda e: e * c)

    def left_const(self, M):
        """``M @ self`` for a constant matrix ``M``."""
        return mul(PolyMatrix.constant(M, self.field), self)

    def right_const(self, M):
        """``self @ M`` for a constant matrix ``M``."""
        return mul(self, PolyMatrix.constant(M, self.field))

    def shift_row(self, i, k):
        """Multiply row ``i`` by ``z**k``."""
        rows = [list(r) for r in self.rows]
        rows[i] = [e.shift(k) for e in rows[i]]
        return PolyMatrix(rows, self.field)

    def transpose(self):
        return PolyMatrix([list(c) for c in zip(*self.rows)], self.field)

    def adjoint(self):
        return PolyMatrix([[e.adjoint() for e in c] for c in zip(*self.rows)], self.field)

    def proj_plus(self):
        return self._map(LaurentPoly.proj_plus)

    def proj_minus(self):
        return self._map(LaurentPoly.proj_minus)

    def permute_columns(self, perm):
        """Column ``j`` of the result is column ``perm[j]`` of ``self``."""
        return PolyMatrix([[r[p] for p in perm] for r in self.rows], self.field)

    def permute_rows(self, perm):
        return PolyMatrix([self.rows[p] for p in perm], self.field)

    def evaluate(self, z0):
        return evaluate(self, z0)

    def det(self):
        return det(self)

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def max_abs_diff(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")
        return max(
            (a.max_abs_diff(b) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)),
            default=0.0,
        )

    def close(self, other, tol=None):
        d = self.max_abs_diff(other)
        if self.field.exact and tol is None:
            return d == 0
        return d <= (self.field.policy.residual_eps if tol is None else tol)

    def __repr__(self):
        body = ",\n ".join("[" + ", ".join(map(repr, r)) + "]" for r in self.rows)
        return f"PolyMatrix([{body}])"


# -- module-level operations -------------------------------------------------


def adjoint(p):
    return p.adjoint()


def adjoint_matrix(P):
    return P.adjoint()


def proj_plus(p):
    return p.proj_plus()


def proj_minus(p):
    return p.proj_minus()


def series_reciprocal(p, n_terms):
    return p.series_reciprocal(n_terms)


def evaluate(P, z0):
    """Entrywise evaluation; a :class:`LaurentPoly` gives a scalar."""
    if isinstance(P, LaurentPoly):
        return P.evaluate(z0)
    return [[e.evaluate(z0) for e in r] for r in P.rows]


def _dot(xs, ys, field):
    acc = None
    for x, y in zip(xs, ys):
        if x.coeffs and y.coeffs:
            t = x * y
            acc = t if acc is None else acc + t
    return LaurentPoly.zero(field) if acc is None else acc


def _cleared(P):
    """``(W, D)`` with ``P = W / D``, ``W`` over the Gaussian integers."""
    D = _common_denominator(c for e in P.entries() for c in e.coeffs)
    rows = [
        [LaurentPoly._raw(P.field, e.lo, _scale_to_ints(e.coeffs, D)) for e in r] for r in P.rows
    ]
    return rows, D


def _int_dot(xs, ys):
    acc = None
    for x, y in zip(xs, ys):
        if x.coeffs and y.coeffs:
            lo = x.lo + y.lo
            t = _convolve(x.coeffs, y.coeffs)
            if acc is None:
                acc = (lo, t)
            else:
                alo, a = acc
                new_lo = min(alo, lo)
                hi = max(alo + len(a), lo + len(t))
                out = [0] * (hi - new_lo)
                for i, c in enumerate(a):
                    out[alo - new_lo + i] = c
                for i, c in enumerate(t):
                    out[lo - new_lo + i] = out[lo - new_lo + i] + c
                acc = (new_lo, out)
    return acc


def mul(P, Q):
    if P.shape[1] != Q.shape[0]:
        raise DimensionMismatch(f"cannot multiply {P.shape} by {Q.shape}")
    if P.field != Q.field:
        raise DimensionMismatch("operands use different scalar fields")
    field = P.field
    if field.exact:
        WP, DP = _cleared(P)
        WQ, DQ = _cleared(Q)
        D = DP * DQ
        cols = list(zip(*WQ))
        rows = []
        for r in WP:
            row = []
            for c in cols:
                acc = _int_dot(r, c)
                if acc is None:
                    row.append(LaurentPoly.zero(field))
                else:
                    coeffs = [GaussianRational._make(mpz(0), mpz(0)) if x == 0 else x for x in acc[1]]
                    row.append(LaurentPoly._raw(field, acc[0], _unscale(coeffs, D)))
            rows.append(row)
        return PolyMatrix(rows, field)
    cols = list(zip(*Q.rows))
    return PolyMatrix([[_dot(r, c, field) for c in cols] for r in P.rows], field)


def det(P, method="expand"):
    """Determinant of a square polynomial matrix.

    ``method="expand"`` is cofactor expansion along rows with memoised
    minors (``n 2^n`` polynomial products, exact on the rational backend).
    ``method="interpolate"`` (float backend only) samples ``det P(z)`` at
    roots of unity and recovers the coefficients with an FFT; it is meant
    as an independent cross-check.
    """
    n, c = P.shape
    if n != c:
        raise DimensionMismatch(f"determinant of a {n}x{c} matrix")
    if method == "interpolate":
        return _det_interpolate(P)
    if method != "expand":
        raise ValueError(f"unknown determinant method {method!r}")
    field = P.field
    rows = P.rows
    scale = None
    if field.exact:
        rows, D = _cleared(P)
        scale = D**n
    memo = {}

    def minor(k, cols):
        # determinant of rows k.. restricted to the column bitmask
        if k == n:
            return LaurentPoly.constant(field.one, field)
        key = (k, cols)
        if key in memo:
            return memo[key]
        acc = None
        sign = 1
        for j in range(n):
            if not cols >> j & 1:
                continue
            e = rows[k][j]
            if e.coeffs:
                t = e * minor(k + 1, cols & ~(1 << j))
                if sign < 0:
                    t = -t
                acc = t if acc is None else acc + t
            sign = -sign
        acc = LaurentPoly.zero(field) if acc is None else acc
        memo[key] = acc
        return acc

    out = minor(0, (1 << n) - 1)
    if scale is not None:
        out = LaurentPoly._raw(field, out.lo, _unscale(out.coeffs, scale))
    return out


def _det_interpolate(P):
    field = P.field
    if field.exact:
        raise ValueError("interpolated determinant is only available on the float backend")
    n = P.shape[0]
    sup = P.support
    if sup is None:
        return LaurentPoly.zero(field)
    lo, hi = sup
    npts = n * (hi - lo) + 1
    pts = [cmath.exp(2j * cmath.pi * k / npts) for k in range(npts)]
    vals = []
    for z in pts:
        M = np.array([[complex(e.evaluate(z)) for e in r] for r in P.rows])
        # remove the z^(n*lo) factor so the samples come from a polynomial
        vals.append(np.linalg.det(M) * z ** (-n * lo))
    coeffs = np.fft.fft(vals) / npts
    # samples at exp(+2 pi i k/M): c_j = (1/M) sum_k v_k exp(-2 pi i jk/M)
    return LaurentPoly([complex(c) for c in coeffs], n * lo, field)
