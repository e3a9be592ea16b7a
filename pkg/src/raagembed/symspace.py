"""Geodesics and flats through the basepoint, decided by exact linear algebra.

Two geodesics through the basepoint are adjacent when their axial
isometries commute.  A pair of commuting isometries spans a 2-plane of a
maximal flat; after simultaneous diagonalisation each common eigenvector
contributes one linear form ``a*e + b*f`` in the plane coordinates, and a
direction is singular exactly when two of these forms agree on it.

Plane coordinates are scaled per generator: ``e`` and ``f`` are the
integer exponent vectors of each generator's eigenvalues relative to its
own multiplicative base.  Positive rescaling of each axis changes neither
the number of singular lines nor the existence of a regular direction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np
import sympy

from .errors import DimensionMismatch, NotCommuting, UnsupportedExtension
from .exactfield import ONE, ExactMatrix, FieldElement, fe_sqrt_rational, nullspace


@dataclass(frozen=True)
class GroupForm:
    """Ambient group: SL(n) (form = identity) or SO(p, q) (form = diag(1^p, -1^q))."""

    kind: str
    dim: int
    signature: tuple[int, int] | None = None
    form_matrix: ExactMatrix = field(default=None, compare=False, repr=False)

    @classmethod
    def special_linear(cls, n: int) -> "GroupForm":
        return cls("SL", n, None, ExactMatrix.identity(n))

    @classmethod
    def orthogonal(cls, p: int, q: int) -> "GroupForm":
        return cls("SO", p + q, (p, q), ExactMatrix.diag([1] * p + [-1] * q))

    def to_json(self) -> dict:
        out = {"kind": self.kind, "dim": self.dim}
        if self.signature is not None:
            out["signature"] = list(self.signature)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GroupForm":
        if data["kind"] == "SO":
            return cls.orthogonal(*data["signature"])
        return cls.special_linear(data["dim"])


def is_isometry(m: ExactMatrix, form: GroupForm) -> bool:
    """det = 1, and for orthogonal groups M^T J M = J."""
    if m.dim != form.dim:
        raise DimensionMismatch(f"matrix of size {m.dim} in a group of size {form.dim}")
    if m.det() != 1:
        return False
    if form.kind == "SO":
        j = form.form_matrix
        return m.T @ j @ m == j
    return True


@dataclass(frozen=True)
class Transvection:
    """An axial isometry whose axis passes through the basepoint."""

    matrix: ExactMatrix
    form: GroupForm

    def __post_init__(self):
        if not is_isometry(self.matrix, self.form):
            raise ValueError("matrix is not in the ambient group")

    @property
    def at_basepoint(self) -> bool:
        """Symmetric positive definite, i.e. a pure translation at the identity coset."""
        return self.matrix.is_symmetric() and all(m.sign() > 0 for m in self.matrix.leading_minors())


Isometry = Union[ExactMatrix, Transvection]


def _mat(x: Isometry) -> ExactMatrix:
    return x.matrix if isinstance(x, Transvection) else x


def adjacent(a: Isometry, b: Isometry) -> bool:
    """Whether the axes share a maximal flat: the isometries commute."""
    a, b = _mat(a), _mat(b)
    return a.commutator(b).is_zero()


def char_poly(a: Isometry) -> list[FieldElement]:
    """Monic characteristic polynomial, highest degree first (Faddeev-LeVerrier)."""
    a = _mat(a)
    n = a.dim
    coeffs = [ONE]
    m = ExactMatrix.identity(n)
    for k in range(1, n + 1):
        am = a @ m
        c = -am.trace() / k
        coeffs.append(c)
        m = am + ExactMatrix.identity(n).scale(c)
    return coeffs


def eigenvalues(a: Isometry) -> list[tuple[FieldElement, int]]:
    """Exact eigenvalues with algebraic multiplicity.

    Supported when the characteristic polynomial has rational coefficients
    and splits into real linear and quadratic factors over Q.
    """
    return list(_eigenvalues(_mat(a)))


# matrices are immutable, so decompositions are memoised; certification asks
# for the same spans many times
@lru_cache(maxsize=2048)
def _eigenvalues(a: ExactMatrix) -> tuple[tuple[FieldElement, int], ...]:
    coeffs = char_poly(a)
    if not all(c.is_rational() for c in coeffs):
        raise UnsupportedExtension("characteristic polynomial has irrational coefficients")
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.to_fraction().numerator, c.to_fraction().denominator) for c in coeffs], x, domain="QQ")
    _, factors = poly.factor_list()
    out: list[tuple[FieldElement, int]] = []
    for f, mult in factors:
        cs = [Fraction(int(c.p), int(c.q)) for c in f.all_coeffs()]
        if len(cs) == 2:
            out.append((FieldElement(-cs[1] / cs[0]), mult))
        elif len(cs) == 3:
            p, q = cs[1] / cs[0], cs[2] / cs[0]
            disc = p * p - 4 * q
            if disc <= 0:
                raise UnsupportedExtension(f"non-real eigenvalues of factor {f.as_expr()}")
            r = fe_sqrt_rational(disc)
            out.append(((-p + r) / 2, mult))
            out.append(((-p - r) / 2, mult))
        else:
            raise UnsupportedExtension(f"irreducible factor of degree {f.degree()}: {f.as_expr()}")
    return tuple(sorted(out, key=lambda t: float(t[0])))


def _joint_eigenspaces(a: ExactMatrix, b: ExactMatrix):
    n = a.dim
    eye = ExactMatrix.identity(n)
    spaces = []
    for mu, _ in eigenvalues(a):
        am = a - eye.scale(mu)
        for nu, _ in eigenvalues(b):
            bm = b - eye.scale(nu)
            vecs = nullspace(list(am.rows) + list(bm.rows), n)
            if vecs:
                spaces.append((mu, nu, vecs))
    return spaces


def common_eigenbasis(a: Isometry, b: Isometry) -> ExactMatrix:
    """Matrix whose columns are simultaneous eigenvectors of ``a`` and ``b``."""
    return _common_eigendata(_mat(a), _mat(b))[0]


def _common_eigendata(a: ExactMatrix, b: ExactMatrix):
    if a.dim != b.dim:
        raise DimensionMismatch("isometries of different sizes")
    if not adjacent(a, b):
        raise NotCommuting("isometries do not commute")
    spaces = _joint_eigenspaces(a, b)
    cols, pairs = [], []
    for mu, nu, vecs in spaces:
        for v in vecs:
            cols.append(v)
            pairs.append((mu, nu))
    if len(cols) != a.dim:
        raise UnsupportedExtension("isometries are not simultaneously diagonalisable over the field")
    return ExactMatrix.from_columns(cols), pairs


_EUCLID_STEPS = 256


def _mgcd(x: FieldElement, y: FieldElement) -> FieldElement:
    # multiplicative Euclid on values > 1; diverges for incommensurable logs
    for _ in range(_EUCLID_STEPS):
        if x < y:
            x, y = y, x
        steps = 0
        while x >= y:
            x = x / y
            steps += 1
            if steps > _EUCLID_STEPS:
                raise UnsupportedExtension("eigenvalue logarithms are incommensurable")
        if x == 1:
            return y
        x, y = y, x
    raise UnsupportedExtension("eigenvalue logarithms are incommensurable")


def multiplicative_base(values) -> FieldElement | None:
    """Largest ``beta > 1`` with every value an integer power of ``beta``; None if all are 1."""
    big = []
    for v in values:
        if v.sign() <= 0:
            raise UnsupportedExtension(f"non-positive eigenvalue {v}")
        if v != 1:
            big.append(v if v > 1 else 1 / v)
    if not big:
        return None
    base = big[0]
    for v in big[1:]:
        if v != base:
            base = _mgcd(base, v)
    return base


def log_exponent(value: FieldElement, base: FieldElement | None) -> int:
    """Integer ``e`` with ``value == base**e``."""
    if value == 1:
        return 0
    if base is None:
        raise UnsupportedExtension(f"{value} is not a power of the base")
    inv = value < 1
    target = 1 / value if inv else value
    cur, e = base, 1
    while cur < target:
        cur = cur * base
        e += 1
    if cur != target:
        raise UnsupportedExtension(f"{value} is not an integer power of {base}")
    return -e if inv else e


@dataclass(frozen=True)
class FlatSpan:
    """Eigen-pattern of the plane ``a*H1 + b*H2``: one (e_i, f_i) form per eigenvector."""

    forms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        forms = tuple((int(e), int(f)) for e, f in self.forms)
        object.__setattr__(self, "forms", forms)

    @property
    def dim(self) -> int:
        return len(self.forms)

    def is_trace_free(self) -> bool:
        return sum(e for e, _ in self.forms) == 0 and sum(f for _, f in self.forms) == 0

    def values(self, a: int, b: int) -> list[int]:
        return [a * e + b * f for e, f in self.forms]


def flat_span(a: Isometry, b: Isometry) -> FlatSpan:
    return _span_data(_mat(a), _mat(b))[0]


@lru_cache(maxsize=2048)
def _span_data(a: ExactMatrix, b: ExactMatrix):
    p, pairs = _common_eigendata(a, b)
    base_a = multiplicative_base([mu for mu, _ in pairs])
    base_b = multiplicative_base([nu for _, nu in pairs])
    forms = tuple((log_exponent(mu, base_a), log_exponent(nu, base_b)) for mu, nu in pairs)
    return FlatSpan(forms), p, base_a, base_b


class _Infinite:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"


INFINITE = _Infinite()


def _normalize_direction(a: int, b: int) -> tuple[int, int]:
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return a, b


def singular_directions(span: FlatSpan):
    """Singular lines of the plane as primitive direction pairs (a, b), or INFINITE.

    A line is singular when two eigen-pattern forms coincide along it.
    """
    lines = set()
    forms = span.forms
    for i in range(len(forms)):
        for j in range(i + 1, len(forms)):
            da = forms[i][0] - forms[j][0]
            db = forms[i][1] - forms[j][1]
            if da == 0 and db == 0:
                return INFINITE
            lines.add(_normalize_direction(db, -da))
    return sorted(lines)


def regular_direction(span: FlatSpan) -> tuple[int, int] | None:
    """Smallest (1, t), t >= 1, along which all forms take distinct values."""
    forms = span.forms
    if len(set(forms)) < len(forms):
        return None
    bad = set()
    for i in range(len(forms)):
        for j in range(i + 1, len(forms)):
            da = forms[i][0] - forms[j][0]
            db = forms[i][1] - forms[j][1]
            # da + t*db == 0
            if db != 0 and da % db == 0:
                bad.add(-da // db)
    t = 1
    while t in bad:
        t += 1
    return (1, t)


def flat_uniqueness(span: FlatSpan) -> bool:
    """A regular direction exists, so exactly one maximal flat holds the plane."""
    return regular_direction(span) is not None


def singular_isometries(a: Isometry, b: Isometry) -> list[tuple[tuple[int, int], ExactMatrix]]:
    """One axial isometry per singular line of the plane spanned by ``a`` and ``b``.

    Along direction (s, t) the isometry is ``P diag(beta^(s*e_i + t*f_i)) P^-1``,
    with ``beta`` the multiplicative base of ``a``.  The direction (1, 0)
    returns ``a`` itself.
    """
    a, b = _mat(a), _mat(b)
    span, p, base_a, base_b = _span_data(a, b)
    dirs = singular_directions(span)
    if dirs is INFINITE:
        raise ValueError("plane has infinitely many singular directions")
    beta = base_a or base_b
    if beta is None:
        raise ValueError("both isometries are trivial")
    p_inv = p.inverse()
    out = []
    for s, t in dirs:
        d = ExactMatrix.diag([beta ** (s * e + t * f) for e, f in span.forms])
        out.append(((s, t), p @ d @ p_inv))
    return out


def same_geodesic(a: Isometry, b: Isometry) -> bool:
    """Commuting isometries with proportional log-eigen patterns share their axis."""
    a, b = _mat(a), _mat(b)
    if not adjacent(a, b):
        return False
    span = flat_span(a, b)
    return all(e * f2 == f * e2 for (e, f) in span.forms for (e2, f2) in span.forms)


def displacement_numeric(a: Isometry) -> float:
    """Distance from the basepoint to its image, ``sqrt(sum(log s_i)^2)``.

    Floating point; good to about 1e-9 for the matrices built here.
    """
    m = _mat(a).to_float()
    sq = np.linalg.eigvalsh(m.T @ m)
    logs = 0.5 * np.log(np.clip(sq, np.finfo(float).tiny, None))
    return float(np.sqrt(np.sum(logs**2)))
