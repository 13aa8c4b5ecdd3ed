"""Scalar fields closed under complex conjugation.

Two backends are provided:

``c64``
    IEEE double complex numbers (Python ``complex``), compared with a
    :class:`TolerancePolicy`.
``qi``
    Exact Gaussian rationals Q(i), stored as pairs of ``gmpy2.mpq``.

The rest of the library only touches scalars through ordinary arithmetic
operators, ``.conjugate()`` and the methods of a :class:`Field`, so a new
conjugation-closed field can be plugged in by subclassing :class:`Field`.
"""

from __future__ import annotations

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "TolerancePolicy",
    "EXACT_POLICY",
    "DEFAULT_POLICY",
    "GaussianRational",
    "Field",
    "ComplexField",
    "GaussianRationalField",
    "C64",
    "QI",
    "get_field",
    "conj",
    "is_zero",
]


@dataclass(frozen=True)
class TolerancePolicy:
    zero_eps: float = 1e-10
    residual_eps: float = 1e-9

    def __post_init__(self):
        if self.zero_eps < 0 or self.residual_eps < 0:
            raise ValueError("tolerances must be nonnegative")

    @property
    def exact(self):
        return self.zero_eps == 0 and self.residual_eps == 0


EXACT_POLICY = TolerancePolicy(0.0, 0.0)
DEFAULT_POLICY = TolerancePolicy()

_MPQ_ZERO = mpq(0)


def _to_mpq(x):
    if isinstance(x, (int, Fraction)) or type(x) is type(_MPQ_ZERO):
        return mpq(x)
    if isinstance(x, Rational):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_mpq(re)
        self.im = _to_mpq(im)

    @classmethod
    def _make(cls, re, im):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls._make(mpq(x.real), mpq(x.imag))
        if isinstance(x, str):
            return parse_gaussian(x)
        return cls._make(_to_mpq(x), _MPQ_ZERO)

    @staticmethod
    def _other(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)) or type(x) is type(_MPQ_ZERO):
            return GaussianRational._make(mpq(x), _MPQ_ZERO)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational._make(a * c, _MPQ_ZERO)
        return GaussianRational._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        c, d = o.re, o.im
        if not d:
            if not c:
                raise ZeroDivisionError("Gaussian rational division by zero")
            return GaussianRational._make(self.re / c, self.im / c)
        n = c * c + d * d
        a, b = self.re, self.im
        return GaussianRational._make((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / self**-n
        out = GaussianRational._make(mpq(1), _MPQ_ZERO)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussianRational._make(self.re, -self.im)

    def abs2(self):
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return abs(complex(self))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, complex):
            return complex(self) == other
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = f"{self.im}*i"
        if not self.re:
            return im
        sign = "" if self.im < 0 else "+"
        return f"{self.re}{sign}{im}"

    def __repr__(self):
        return f"GaussianRational('{self}')"


_RAT = r"\d+(?:/\d+)?"
_REAL_RE = re.compile(rf"^[+-]?{_RAT}$")
_IMAG_RE = re.compile(rf"^(?P<sign>[+-]?)(?P<mag>{_RAT})?\*?i$")
_FULL_RE = re.compile(rf"^(?P<re>[+-]?{_RAT})(?P<sign>[+-])(?P<mag>{_RAT})?\*?i$")


def parse_gaussian(text):
    """Parse ``"p/q+r/s*i"`` (and the shorthands ``"p/q"``, ``"r/s*i"``, ``"-i"``)."""
    s = text.replace(" ", "")
    if _REAL_RE.match(s):
        return GaussianRational(mpq(s), 0)
    m = _FULL_RE.match(s) or _IMAG_RE.match(s)
    if m is None:
        raise ValueError(f"malformed Gaussian rational: {text!r}")
    im = mpq(m.group("mag")) if m.group("mag") else mpq(1)
    if m.group("sign") == "-":
        im = -im
    re_val = mpq(m.groupdict().get("re") or 0)
    return GaussianRational(re_val, im)


def conj(a):
    """Complex conjugate of a scalar from either backend."""
    return a.conjugate()


def is_zero(a, pol=DEFAULT_POLICY):
    """Zero test: exact for Gaussian rationals, ``|a| <= zero_eps`` otherwise."""
    if isinstance(a, GaussianRational):
        return not a
    return abs(a) <= pol.zero_eps


class Field(ABC):
    """A subfield of C closed under conjugation, plus its comparison policy."""

    tag: str
    exact: bool

    def __init__(self, policy):
        self.policy = policy

    @abstractmethod
    def coerce(self, x):
        """Convert ``x`` into an element of this field."""

    @abstractmethod
    def to_json(self, a):
        """JSON-compatible encoding of a scalar."""

    @abstractmethod
    def from_json(self, obj):
        """Inverse of :meth:`to_json`."""

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def is_zero(self, a):
        return is_zero(a, self.policy)

    def magnitude(self, a):
        return abs(complex(a))

    def residual_ok(self, residual):
        """True when a residual magnitude counts as zero under the policy."""
        return residual <= self.policy.residual_eps

    def __eq__(self, other):
        return (
            type(self) is type(other) and self.policy == other.policy
        )

    def __hash__(self):
        return hash((self.tag, self.policy))

    def __repr__(self):
        return f"{type(self).__name__}({self.policy})"


class ComplexField(Field):
    tag = "c64"
    exact = False

    def __init__(self, policy=DEFAULT_POLICY):
        super().__init__(policy)

    def coerce(self, x):
        if isinstance(x, complex):
            return x
        if isinstance(x, GaussianRational):
            return complex(x)
        if isinstance(x, str):
            return complex(parse_gaussian(x))
        return complex(x)

    def to_json(self, a):
        a = complex(a)
        return [a.real, a.imag]

    def from_json(self, obj):
        if isinstance(obj, (int, float)) and not isinstance(obj, bool):
            return complex(obj)
        if (
            isinstance(obj, list)
            and len(obj) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
        ):
            return complex(obj[0], obj[1])
        raise ValueError(f"malformed c64 scalar: {obj!r}")


class GaussianRationalField(Field):
    tag = "qi"
    exact = True

    def __init__(self, policy=EXACT_POLICY):
        if not policy.exact:
            raise ValueError("the exact field only admits zero tolerances")
        super().__init__(policy)

    def coerce(self, x):
        return GaussianRational.coerce(x)

    def residual_ok(self, residual):
        return residual == 0

    def to_json(self, a):
        return str(a)

    def from_json(self, obj):
        if isinstance(obj, int) and not isinstance(obj, bool):
            return GaussianRational(obj)
        if isinstance(obj, str):
            return parse_gaussian(obj)
        raise ValueError(f"malformed qi scalar: {obj!r}")


C64 = ComplexField()
QI = GaussianRationalField()


def get_field(tag, policy=None):
    if tag == "c64":
        return C64 if policy is None else ComplexField(policy)
    if tag == "qi":
        return QI
    raise ValueError(f"unknown field tag {tag!r} (expected 'c64' or 'qi')")
