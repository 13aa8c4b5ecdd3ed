import random

import pytest

from wavemat.core import (
    FlatWaveletRows,
    PU1Matrix,
    WaveletMatrix,
    check_paraunitary,
    classify,
    from_flat,
    from_pu1,
    is_primitive,
    normalize_linear,
    order_degree,
    shifted_orthogonality_residual,
    to_flat,
    to_pu1,
)
from wavemat.errors import NotInWM1, NotParaunitary, OrderMismatch
from wavemat.field import C64, QI
from wavemat.laurent import LaurentPoly, PolyMatrix
from wavemat.parametrize import generate

from conftest import rand_params

H = "1/2"


def poly(terms, field=QI):
    return LaurentPoly.from_dict({k: field.coerce(v) for k, v in terms.items()}, field)


def haar(field=QI):
    return WaveletMatrix.from_coeffs(
        [[[H, "-1/2"], ["-1/2", H]], [[H, H], [H, H]]], field
    )


def diag_z(m, powers, field=QI):
    return PolyMatrix.diag([LaurentPoly.monomial(1, k, field) for k in powers], field)


def test_paraunitary_examples():
    assert check_paraunitary(diag_z(2, [0, 5])) == (True, 0.0)
    assert check_paraunitary(haar().poly).ok
    bad = PolyMatrix([[poly({0: 1}), poly({})], [poly({}), poly({0: 1, 1: 1})]], QI)
    rep = check_paraunitary(bad)
    assert not rep.ok and rep.residual > 0


def test_paraunitary_report_agrees_with_flat_oracle(rng):
    for field in (QI, C64):
        A = generate(rand_params(rng, 3, 3, field))
        res, exact_zero = shifted_orthogonality_residual(to_flat(A).rows, 3, field)
        assert check_paraunitary(A).ok
        assert exact_zero if field.exact else res < 1e-10


def test_flat_round_trip():
    rows = [[H, "-1/2", H, H], ["-1/2", H, H, H]]
    A = from_flat(rows, QI)
    assert A == haar()
    assert [list(r) for r in to_flat(A).rows] == [[QI.coerce(a) for a in r] for r in rows]
    assert from_flat(FlatWaveletRows(((1, 0), (0, 1)), 2), QI).N == 0
    # leading zero blocks are stripped
    assert from_flat([[0, 0] + r for r in rows], QI) == haar()


def test_flat_rejects_duplicate_rows():
    with pytest.raises(NotParaunitary):
        from_flat([[1, 0], [1, 0]], QI)


@pytest.mark.parametrize(
    "A, expected",
    [
        (diag_z(2, [0, 1]), (1, 1, 1)),
        (diag_z(2, [1, 1]), (1, 2, 0)),
        (haar().poly, (1, 1, 1)),
        (diag_z(3, [0, 0, 0]), (0, 0, 3)),
    ],
)
def test_order_degree(A, expected):
    sup = A.support
    assert tuple(order_degree(WaveletMatrix(A, sup[1]))) == expected


def test_declared_order_is_checked():
    with pytest.raises(OrderMismatch):
        WaveletMatrix(diag_z(2, [0, 1]), 2)


def test_a0_times_an_adjoint_vanishes(rng):
    A = generate(rand_params(rng, 4, 3, QI))
    A0, AN = A.coeff(0), A.coeff(A.N)
    prod = [[sum((a * b.conjugate() for a, b in zip(r, s)), start=QI.zero) for s in AN] for r in A0]
    assert all(not x for row in prod for x in row)


def test_normalize_linear():
    A = WaveletMatrix(PolyMatrix([[poly({}), poly({1: 1})], [poly({0: 1}), poly({})]], QI), 1)
    B = normalize_linear(A)
    assert B.poly == diag_z(2, [0, 1])
    assert normalize_linear(haar()) == haar()
    U = WaveletMatrix.from_coeffs([[[0, 1], [1, 0]]], QI)
    assert normalize_linear(U).poly == PolyMatrix.identity(2, QI)


def test_unitary_left_multiple_keeps_order_and_degree(rng):
    A = generate(rand_params(rng, 2, 2, QI))
    W = [[QI.coerce("3/5"), QI.coerce("4/5*i")], [QI.coerce("4/5*i"), QI.coerce("3/5")]]
    B = WaveletMatrix(A.poly.left_const(W), A.N)
    assert check_paraunitary(B).ok
    assert order_degree(B)[:2] == order_degree(A)[:2]


def test_pu1_shuttle_haar():
    U = to_pu1(haar())
    expected = PolyMatrix(
        [[poly({0: H, 1: H}), poly({0: "-1/2", 1: H})], [poly({0: H, -1: "-1/2"}), poly({0: H, -1: H})]],
        QI,
    )
    assert U.poly == expected
    assert from_pu1(U) == haar()
    assert from_pu1(PU1Matrix(PolyMatrix.identity(3, QI), 0)) == WaveletMatrix(PolyMatrix.identity(3, QI), 0)


def test_pu1_shuttle_zero_params():
    A = WaveletMatrix(diag_z(2, [0, 4]), 4)
    assert to_pu1(A).poly == PolyMatrix.identity(2, QI)


def test_to_pu1_failure_reports_conditions():
    A = WaveletMatrix(diag_z(2, [1, 0]), 1)
    with pytest.raises(NotInWM1) as info:
        to_pu1(A)
    assert info.value.failures == ["last row of A_N is zero"]
    assert info.value.payload()["swap_row"] == 0
    with pytest.raises(NotInWM1) as info:
        to_pu1(WaveletMatrix(diag_z(2, [1, 1]), 1))
    assert any("degree" in f for f in info.value.failures)


def test_classify():
    assert classify(haar()) == {
        "paraunitary": True, "residual": 0.0, "order": 1, "degree": 1, "rank0": 1, "class": "WM1"
    }
    assert classify(WaveletMatrix(diag_z(2, [1, 0]), 1))["class"] == "WM0"
    assert classify(WaveletMatrix(diag_z(2, [1, 1]), 1))["class"] == "WM"


def test_is_primitive():
    P = is_primitive(WaveletMatrix(diag_z(2, [0, 1]), 1))
    assert P is not None and P.v == (QI.zero, QI.one)
    f = is_primitive(haar())
    assert f is not None and f.v == (QI.one, QI.one)
    assert f.projection() == [[QI.coerce(H)] * 2] * 2
    assert is_primitive(WaveletMatrix(diag_z(2, [1, 1]), 1)) is None
    assert is_primitive(generate(rand_params(random.Random(1), 2, 2, QI))) is None
