"""Exact rational approximation of floating point wavelet matrices.

Rounding the filter coefficients directly destroys the shifted
orthogonality.  Rounding the parameters instead and regenerating on the
exact backend keeps it, and the parametrization is continuous, so the
result is close whenever the rounding is fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import WaveletMatrix, check_paraunitary
from .errors import NotInWM1, WaveMatError
from .field import QI, GaussianRational
from .parametrize import ParamPoint, generate, wavelet_to_params

__all__ = ["ApproxReport", "round_gaussian", "rational_approximate"]


@dataclass(frozen=True)
class ApproxReport:
    distance: float  # max |a - a_q| over all coefficients
    param_distance: float
    max_denominator: int
    exact_orthogonality: bool

    def to_json(self):
        return {
            "distance": self.distance,
            "param_distance": self.param_distance,
            "max_denominator": self.max_denominator,
            "exact_orthogonality": self.exact_orthogonality,
        }


def round_gaussian(x, max_denominator: int) -> GaussianRational:
    """Best rational approximation of the real and imaginary parts separately."""
    x = complex(x)
    re = Fraction(x.real).limit_denominator(max_denominator)
    im = Fraction(x.imag).limit_denominator(max_denominator)
    return GaussianRational(re, im)


def rational_approximate(A: WaveletMatrix, max_denominator: int):
    """Nearby matrix over Q(i) with exactly orthogonal shifted rows.

    Returns ``(A_q, report)``.  ``A`` must be in WM1 on the float backend.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be a positive integer")
    if A.field.exact:
        raise WaveMatError("rational_approximate expects a float-backend matrix")
    try:
        p = wavelet_to_params(A)
    except NotInWM1 as exc:
        exc.failures.append("reduce with normalize_linear and a row interchange first")
        raise
    gamma = tuple(tuple(round_gaussian(g, max_denominator) for g in row) for row in p.gamma)
    pq = ParamPoint(p.m, p.N, gamma, QI)
    Aq = generate(pq)
    report = ApproxReport(
        distance=A.poly.max_abs_diff(Aq.poly),
        param_distance=p.max_abs_diff(pq),
        max_denominator=max_denominator,
        exact_orthogonality=check_paraunitary(Aq.poly).ok,
    )
    return Aq, report
