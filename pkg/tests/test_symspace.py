import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from raagembed.builders import SL3_T1, SL3_T2, SO32_T0, SO32_T1, sl5z_generator
from raagembed.errors import NotCommuting
from raagembed.exactfield import ExactMatrix, FieldElement
from raagembed.symspace import (
    INFINITE,
    FlatSpan,
    GroupForm,
    Transvection,
    adjacent,
    char_poly,
    common_eigenbasis,
    displacement_numeric,
    eigenvalues,
    flat_span,
    flat_uniqueness,
    is_isometry,
    regular_direction,
    same_geodesic,
    singular_directions,
    singular_isometries,
)

S3 = FieldElement.sqrt(3)
SO32 = GroupForm.orthogonal(3, 2)
A = {i: sl5z_generator(i, 2) for i in range(1, 6)}
SL5_PATTERN = FlatSpan(((1, 0), (-1, 0), (0, 1), (0, -1), (0, 0)))


def test_form_convention_from_lie_algebra():
    # the infinitesimal generators of T0 and T1 must be J-skew: X^T J + J X = 0
    j = SO32.form_matrix
    y0 = ExactMatrix([[0, 0, 0, 1, 0], [0] * 5, [0] * 5, [1, 0, 0, 0, 0], [0] * 5])
    y1 = ExactMatrix([[0] * 5, [0, 0, 0, 0, 1], [0] * 5, [0] * 5, [0, 1, 0, 0, 0]])
    for y in (y0, y1):
        assert (y.T @ j + j @ y).is_zero()
    assert j == ExactMatrix.diag([1, 1, 1, -1, -1])


def test_is_isometry_examples():
    assert is_isometry(SO32_T0, SO32) and is_isometry(SO32_T1, SO32)
    assert is_isometry(ExactMatrix.identity(5), SO32)
    assert not is_isometry(ExactMatrix.diag([2, 1, 1, 1, 1]), SO32)
    assert not is_isometry(ExactMatrix.diag([2, Fraction(1, 2), 1, 1, -1]), SO32)


def test_transvection_validates():
    t = Transvection(SL3_T1, GroupForm.special_linear(3))
    assert t.at_basepoint
    assert not Transvection(A[1], GroupForm.special_linear(5)).at_basepoint
    with pytest.raises(ValueError):
        Transvection(ExactMatrix.diag([2, 2, 2]), GroupForm.special_linear(3))


def test_adjacent_examples():
    assert adjacent(SL3_T1, SL3_T2)
    assert adjacent(A[1], A[2])
    assert not adjacent(A[1], A[4])


def test_common_eigenbasis_sl5z():
    p = common_eigenbasis(A[1], A[2])
    pinv = p.inverse()
    d1, d2 = pinv @ A[1] @ p, pinv @ A[2] @ p
    assert d1.is_diagonal() and d2.is_diagonal()
    assert sorted(d1[i, i] for i in range(5)) == [2 - S3, 1, 1, 1, 2 + S3]
    assert sorted(d2[i, i] for i in range(5)) == [2 - S3, 1, 1, 1, 2 + S3]


def test_common_eigenbasis_diagonal_is_trivial():
    p = common_eigenbasis(SL3_T1, SL3_T2)
    assert p.is_diagonal()


def test_common_eigenbasis_rejects_noncommuting():
    with pytest.raises(NotCommuting):
        common_eigenbasis(A[1], A[3])


def test_singular_directions_examples():
    assert singular_directions(SL5_PATTERN) == [(0, 1), (1, -1), (1, 0), (1, 1)]
    assert singular_directions(FlatSpan(((1, 0), (-1, 0), (0, 0)))) == [(0, 1)]
    assert singular_directions(FlatSpan(((1, 0), (1, 0), (0, 1)))) is INFINITE


def test_sl3_span_has_three_lines():
    span = flat_span(SL3_T1, SL3_T2)
    assert span.is_trace_free()
    # oracle: the diagonal entries as functions of (a, b) are a*log T1 + b*log T2
    logs = [(-2, 1), (1, -2), (1, 1)]
    lines = set()
    for i in range(3):
        for k in range(i + 1, 3):
            da, db = logs[i][0] - logs[k][0], logs[i][1] - logs[k][1]
            g = math.gcd(da, db)
            d = (db // g, -da // g)
            lines.add(d if d > (0, 0) else (-d[0], -d[1]))
    assert len(singular_directions(span)) == len(lines) == 3
    assert flat_uniqueness(span)


def test_flat_uniqueness_examples():
    assert flat_uniqueness(SL5_PATTERN)
    assert regular_direction(SL5_PATTERN) == (1, 2)
    assert SL5_PATTERN.values(1, 2) == [1, -1, 2, -2, 0]
    assert not flat_uniqueness(FlatSpan(((1, 0), (1, 0), (0, 1))))


def test_char_poly_examples():
    x = sympy.symbols("x")
    got = char_poly(A[1])
    expected = sympy.Poly(sympy.expand((x**2 - 4 * x + 1) * (x - 1) ** 3), x).all_coeffs()
    assert got == [int(c) for c in expected]
    assert char_poly(ExactMatrix.identity(3)) == [1, -3, 3, -1]
    quarter = Fraction(1, 4)
    expected = sympy.Poly(sympy.expand((x - sympy.Rational(1, 4)) * (x - 2) ** 2), x).all_coeffs()
    assert char_poly(SL3_T1) == [Fraction(str(c)) for c in expected]
    assert eigenvalues(SL3_T1) == [(quarter, 1), (2, 2)]


def test_so32_span_and_singulars():
    span = flat_span(SO32_T0, SO32_T1)
    assert singular_directions(span) == [(0, 1), (1, -1), (1, 0), (1, 1)]
    sing = singular_isometries(SO32_T0, SO32_T1)
    mats = [m for _, m in sing]
    assert any(same_geodesic(m, SO32_T0 @ SO32_T1) for m in mats)
    assert any(same_geodesic(m, SO32_T0 @ SO32_T1.inverse()) for m in mats)
    assert any(same_geodesic(m, SO32_T0) for m in mats)


def test_same_geodesic():
    assert same_geodesic(A[1], A[1] ** 3)
    assert same_geodesic(A[1], A[1].inverse())
    assert not same_geodesic(A[1], A[2])
    assert not same_geodesic(A[1], A[3])


def test_displacement_examples():
    assert displacement_numeric(ExactMatrix.identity(3)) == 0.0
    assert abs(displacement_numeric(ExactMatrix.diag([2, Fraction(1, 2), 1])) - math.sqrt(2) * math.log(2)) < 1e-9
    expected = math.sqrt(math.log(4) ** 2 + 2 * math.log(2) ** 2)
    assert abs(displacement_numeric(SL3_T1) - expected) < 1e-9
    assert abs(expected - 1.698) < 1e-3


@pytest.mark.parametrize("m", [SL3_T1, SO32_T0, A[1], A[3] @ A[4]])
def test_displacement_increases_with_power(m):
    d = [displacement_numeric(m**k) for k in range(1, 6)]
    assert all(b > a + 1e-9 for a, b in zip(d, d[1:]))


def test_displacement_matches_numpy_svd():
    m = A[1] @ A[3]
    s = np.linalg.svd(m.to_float(), compute_uv=False)
    assert abs(displacement_numeric(m) - float(np.sqrt(np.sum(np.log(s) ** 2)))) < 1e-9


@st.composite
def unimodular(draw):
    # product of elementary integer matrices
    p = ExactMatrix.identity(3)
    for _ in range(draw(st.integers(1, 4))):
        i, j = draw(st.permutations(range(3)))[:2]
        k = draw(st.integers(-3, 3))
        rows = [[int(a == b) for b in range(3)] for a in range(3)]
        rows[i][j] = k
        p = p @ ExactMatrix(rows)
    return p


@st.composite
def rational_invertible(draw):
    # L @ U with nonzero diagonal on L, unit diagonal on U
    q = lambda: Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 3)))
    nz = lambda: Fraction(draw(st.sampled_from([1, -1, 2, -3])), draw(st.integers(1, 3)))
    low = ExactMatrix([[nz() if i == j else (q() if j < i else 0) for j in range(3)] for i in range(3)])
    up = ExactMatrix([[1 if i == j else (q() if j > i else 0) for j in range(3)] for i in range(3)])
    return low @ up


@given(rational_invertible())
@settings(max_examples=40, deadline=None)
def test_char_poly_conjugation_invariant(p):
    m = ExactMatrix([[2, S3, 0], [1, Fraction(1, 2), 3], [0, -1, 1]])
    assert char_poly(p @ m @ p.inverse()) == char_poly(m)


@given(unimodular(), unimodular())
@settings(max_examples=30, deadline=None)
def test_adjacent_symmetric(p, q):
    a, b = p @ SL3_T1 @ p.inverse(), q @ SL3_T2 @ q.inverse()
    assert adjacent(a, b) == adjacent(b, a)
    assert adjacent(a, a)


@given(st.integers(2, 6), st.sampled_from([(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]))
@settings(max_examples=25, deadline=None)
def test_common_eigenbasis_diagonalizes(n, ij):
    a, b = sl5z_generator(ij[0], n), sl5z_generator(ij[1], n)
    p = common_eigenbasis(a, b)
    pinv = p.inverse()
    assert (pinv @ a @ p).is_diagonal() and (pinv @ b @ p).is_diagonal()
    assert len(singular_directions(flat_span(a, b))) == 4
