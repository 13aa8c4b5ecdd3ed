"""Wavelet matrices: parametrization, factorization, completion and exact approximation."""

from .approx import ApproxReport, rational_approximate
from .complete import RowVector, complete_from_row
from .core import (
    WaveletMatrix,
    PU1Matrix,
    check_paraunitary,
    classify,
    from_flat,
    from_pu1,
    normalize_linear,
    order_degree,
    to_flat,
    to_pu1,
)
from .errors import WaveMatError
from .factorize import FactorChain, PrimitiveFactor, factorize, product_chain
from .field import C64, QI, GaussianRational, TolerancePolicy, get_field
from .laurent import LaurentPoly, PolyMatrix
from .parametrize import ParamPoint, forward_map, generate, inverse_map, wavelet_to_params

__version__ = "0.1.0"
