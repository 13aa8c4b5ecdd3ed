import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg

from wavemat import linalg
from wavemat.core import WaveletMatrix, certify_pu1, to_pu1
from wavemat.errors import DimensionMismatch, NoNonzeroConstant, NotPositiveDefinite, WaveMatError
from wavemat.field import C64, QI
from wavemat.laurent import LaurentPoly, PolyMatrix
from wavemat.parametrize import (
    ParamPoint,
    assemble_v,
    build_gram,
    build_theta,
    f_matrix,
    forward_map,
    generate,
    inverse_map,
    solve_hpd,
    wavelet_to_params,
)

from conftest import rand_params


def q(x):
    return QI.coerce(x)


def p2(g, field=QI, N=1):
    return ParamPoint(2, N, ((g,) if N == 1 else tuple(g),), field)


def closed_form(g):
    """Hand-derived generate(m=2, N=1, gamma=g) for real g."""
    g = Fraction(g)
    s = 1 / (1 + g * g)
    A0 = [[s, -g * s], [-g * s, g * g * s]]
    A1 = [[g * g * s, g * s], [g * s, s]]
    return WaveletMatrix.from_coeffs([A0, A1], QI)


@pytest.mark.parametrize("g", [0, 1, Fraction(1, 2), -2, Fraction(3, 7)])
def test_generate_closed_form(g):
    assert generate(p2(g)) == closed_form(g)


def test_haar():
    A = generate(p2(1))
    assert A.coeffs() == [[[q("1/2"), q("-1/2")], [q("-1/2"), q("1/2")]], [[q("1/2")] * 2] * 2]
    assert wavelet_to_params(A).gamma == ((q(1),),)


def test_hankel_layout_matches_scipy():
    g = [q(3), q(-1), q("2/3")]
    T = build_theta(p2(g, N=3))[0]
    ref = scipy.linalg.hankel([0] + [complex(x) for x in g])
    assert np.allclose(np.array([[complex(a) for a in r] for r in T]), ref)
    assert build_theta(p2([5, 7], N=2))[0] == [
        [q(0), q(5), q(7)], [q(5), q(7), q(0)], [q(7), q(0), q(0)]
    ]
    assert build_theta(p2(4))[0] == [[q(0), q(4)], [q(4), q(0)]]


def test_gram_examples():
    assert build_gram(build_theta(ParamPoint.zeros(3, 2, QI)), 2, QI) == [
        [q(1), q(0), q(0)], [q(0), q(1), q(0)], [q(0), q(0), q(1)]
    ]
    d = build_gram(build_theta(p2("1/2+i")), 1, QI)
    assert d == [[q("9/4"), q(0)], [q(0), q("9/4")]]
    p = ParamPoint(3, 1, ((q(2),), (q("1/3"),)), QI)
    assert build_gram(build_theta(p), 1, QI) == [[q("46/9"), q(0)], [q(0), q("46/9")]]


@pytest.mark.parametrize("field", [QI, C64], ids=["qi", "c64"])
def test_solve_hpd_examples(field):
    c = field.coerce
    x = solve_hpd([[c(2), c(1)], [c(1), c(2)]], [c(1), c(0)], field)
    if field.exact:
        assert x == [c("2/3"), c("-1/3")]
    else:
        assert x == pytest.approx([2 / 3, -1 / 3], abs=1e-15)
    assert solve_hpd(build_gram([], 1, field), [c(1), c(0)], field) == [c(1), c(0)]
    with pytest.raises(NotPositiveDefinite):
        solve_hpd([[c(1), c(2)], [c(2), c(1)]], [c(1), c(0)], field)


def test_solve_hpd_random_exact(rng):
    p = rand_params(rng, 3, 4, QI)
    delta = build_gram(build_theta(p), 4, QI)
    b = [q(rng.randint(-5, 5)) for _ in range(5)]
    x = solve_hpd(delta, b, QI)
    assert [sum((a * y for a, y in zip(row, x)), start=q(0)) for row in delta] == b


def test_forward_map_examples():
    assert forward_map(p2(0)).poly == PolyMatrix.identity(2, QI)
    U = forward_map(p2(1)).poly
    h = q("1/2")
    assert U[1, 0] == LaurentPoly([-h, h], -1, QI)
    assert U[1, 1] == LaurentPoly([h, h], -1, QI)
    with pytest.raises(WaveMatError):
        forward_map(ParamPoint.zeros(2, 0, QI))


def test_zero_params_give_diagonal():
    for m, N in [(2, 3), (4, 2)]:
        A = generate(ParamPoint.zeros(m, N, QI))
        assert A.poly == PolyMatrix.diag(
            [LaurentPoly.constant(1, QI)] * (m - 1) + [LaurentPoly.monomial(1, N, QI)], QI
        )
        assert wavelet_to_params(A) == ParamPoint.zeros(m, N, QI)


def test_n_zero_convention():
    A = generate(ParamPoint.zeros(3, 0, QI))
    assert A.N == 0 and A.poly == PolyMatrix.identity(3, QI)


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        ParamPoint(3, 2, ((1, 2),), QI)
    with pytest.raises(DimensionMismatch):
        ParamPoint(2, 2, ((1,),), QI)


@pytest.mark.parametrize("m, N", [(2, 1), (3, 3), (4, 2)])
def test_round_trip(field, rng, m, N):
    for _ in range(5):
        p = rand_params(rng, m, N, field)
        back = wavelet_to_params(generate(p))
        assert back == p if field.exact else back.close(p, 1e-8)


def test_float_and_exact_backends_agree(rng):
    p = rand_params(rng, 3, 3, QI, max_den=30)
    pf = ParamPoint(3, 3, p.gamma, C64)
    assert generate(pf).max_abs_diff(generate(p)) < 1e-12


def test_column_products_are_constant(rng):
    U = forward_map(rand_params(rng, 3, 3, QI)).poly
    assert U.adjoint() @ U == PolyMatrix.identity(3, QI)
    V = assemble_v(rand_params(rng, 3, 3, QI))
    D = V.det()
    assert D.is_constant() and not D.is_zero()


def test_assembly_order_is_irrelevant(rng):
    p = rand_params(rng, 3, 2, QI)
    V = assemble_v(p)
    W = assemble_v(p, order=[2, 0, 1])
    # a permuted right-hand side order permutes the columns of V ...
    assert W == V.permute_columns([2, 0, 1])
    # ... which V(1)^-1 undoes
    def normalized(X):
        return X.right_const(linalg.inverse(X.evaluate(QI.one), QI))

    assert normalized(V) == normalized(W)


def test_f_times_u_is_polynomial(rng):
    p = rand_params(rng, 4, 2, QI)
    FU = f_matrix(p) @ forward_map(p).poly
    assert FU.proj_minus().is_zero()


def test_inverse_map_any_admissible_column(rng):
    U = certify_pu1(forward_map(rand_params(rng, 3, 3, QI)))
    cols = [j for j, u in enumerate(U.last_row_polys()) if u.coeff(0)]
    assert len(cols) >= 2
    ref = inverse_map(U)
    assert all(inverse_map(U, column=j) == ref for j in cols)


def test_inverse_map_rejects_inadmissible_column():
    U = to_pu1(generate(ParamPoint.zeros(2, 2, QI)))
    with pytest.raises(NoNonzeroConstant):
        inverse_map(U, column=0)
