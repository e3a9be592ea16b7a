"""Exact arithmetic in multiquadratic fields Q(sqrt p1, ..., sqrt pk).

An element is stored as a finite sum of rational multiples of square roots
of squarefree integers, ``sum_r c_r * sqrt(r)``.  Each squarefree ``r`` is
the product of a subset of the adjoined primes, so the monomials
``sqrt(r)`` are linearly independent over Q and equality is a plain
comparison of the coefficient maps.

Matrices are dense, immutable and square.  Nothing here touches floating
point except :meth:`FieldElement.__float__`.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    NegativeRadicand,
    NonIntegralEntry,
    Singular,
)

__all__ = [
    "FieldElement",
    "ExactMatrix",
    "fe_sqrt_rational",
    "prime_factors",
    "ZERO",
    "ONE",
]


@lru_cache(maxsize=4096)
def prime_factors(n: int) -> tuple[tuple[int, int], ...]:
    """Factor a positive integer by trial division, as ((p, e), ...)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def _primes_of(radicand: int) -> tuple[int, ...]:
    return tuple(p for p, _ in prime_factors(radicand))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as a rational number")


class FieldElement:
    """An element of Q(sqrt p : p in basis).

    ``terms`` maps a squarefree radicand to its nonzero rational coefficient;
    radicand 1 is the rational part.  ``basis`` is the sorted tuple of
    adjoined primes; arithmetic merges bases by union.
    """

    __slots__ = ("_terms", "_basis", "_hash")

    def __init__(self, value=0, basis: Iterable[int] = ()):
        if isinstance(value, FieldElement):
            self._terms = value._terms
            basis = set(basis) | set(value._basis)
        else:
            q = _as_fraction(value)
            self._terms = {1: q} if q else {}
        self._basis = tuple(sorted(set(basis)))
        self._hash = None

    @classmethod
    def _make(cls, terms: dict[int, Fraction], basis: Iterable[int]) -> "FieldElement":
        obj = cls.__new__(cls)
        obj._terms = {r: c for r, c in terms.items() if c}
        primes = set(basis)
        for r in obj._terms:
            if r != 1:
                primes.update(_primes_of(r))
        obj._basis = tuple(sorted(primes))
        obj._hash = None
        return obj

    @classmethod
    def from_terms(cls, terms: dict[int, object], basis: Iterable[int] = ()) -> "FieldElement":
        """Build ``sum c * sqrt(r)``; any positive integer ``r`` is accepted."""
        acc: dict[int, Fraction] = {}
        for r, c in terms.items():
            if r < 1:
                raise NegativeRadicand(f"radicand {r} must be positive")
            square, free = _split_square(r)
            acc[free] = acc.get(free, Fraction(0)) + _as_fraction(c) * square
        return cls._make(acc, basis)

    @classmethod
    def sqrt(cls, n: int) -> "FieldElement":
        """Exact square root of a positive integer."""
        return fe_sqrt_rational(Fraction(n))

    # -- structure ---------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    @property
    def basis(self) -> tuple[int, ...]:
        return self._basis

    def with_basis(self, primes: Iterable[int]) -> "FieldElement":
        return FieldElement._make(self._terms, set(primes) | set(self._basis))

    def subsets(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Canonical (prime subset, coefficient) list, sorted by radicand."""
        return [(_primes_of(r) if r != 1 else (), c) for r, c in sorted(self._terms.items())]

    def is_rational(self) -> bool:
        return all(r == 1 for r in self._terms)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    def is_integer(self) -> bool:
        return self.is_rational() and self.to_fraction().denominator == 1

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "FieldElement":
        if isinstance(x, FieldElement):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            return FieldElement(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for r, c in other._terms.items():
            terms[r] = terms.get(r, 0) + c
        return FieldElement._make(terms, self._basis + other._basis)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._make({r: -c for r, c in self._terms.items()}, self._basis)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[int, Fraction] = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in other._terms.items():
                if r1 == 1:
                    r, c = r2, c1 * c2
                elif r2 == 1:
                    r, c = r1, c1 * c2
                else:
                    g = gcd(r1, r2)
                    r, c = (r1 // g) * (r2 // g), c1 * c2 * g
                terms[r] = terms.get(r, 0) + c
        return FieldElement._make(terms, self._basis + other._basis)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse by successive conjugation.

        Writing ``a = x + y*sqrt(p)`` for the largest prime ``p`` present,
        ``1/a = (x - y*sqrt(p)) / (x^2 - p*y^2)`` and the denominator no
        longer involves ``p``.
        """
        if not self._terms:
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return FieldElement._make({1: 1 / self._terms[1]}, self._basis)
        p = max(q for r in self._terms for q in _primes_of(r) if r != 1)
        x, y = self._split(p)
        conj = x - y * FieldElement._make({p: Fraction(1)}, ())
        norm = x * x - y * y * p
        return (conj * norm.inverse()).with_basis(self._basis)

    def _split(self, p: int) -> tuple["FieldElement", "FieldElement"]:
        """Return (x, y) with self = x + y*sqrt(p), x and y free of p."""
        x: dict[int, Fraction] = {}
        y: dict[int, Fraction] = {}
        for r, c in self._terms.items():
            if r % p == 0:
                y[r // p] = c
            else:
                x[r] = c
        return FieldElement._make(x, ()), FieldElement._make(y, ())

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = FieldElement(1, self._basis)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- order -------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign in {-1, 0, 1} of the real number represented."""
        if not self._terms:
            return 0
        if self.is_rational():
            c = self._terms[1]
            return (c > 0) - (c < 0)
        p = max(q for r in self._terms for q in _primes_of(r) if r != 1)
        x, y = self._split(p)
        sx, sy = x.sign(), y.sign()
        if sy == 0:
            return sx
        if sx == 0 or sx == sy:
            return sy
        # opposite signs: compare x^2 with p*y^2
        d = (x * x - y * y * p).sign()
        return sx if d > 0 else sy

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() < 0

    def __le__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self._terms.get(1, Fraction(0)))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __float__(self):
        return float(sum(float(c) * r**0.5 for r, c in self._terms.items()))

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for r, c in sorted(self._terms.items()):
            if r == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({r})")
            elif c == -1:
                parts.append(f"-sqrt({r})")
            else:
                parts.append(f"{c}*sqrt({r})")
        return " + ".join(parts).replace("+ -", "- ")


def _split_square(n: int) -> tuple[int, int]:
    """n = s^2 * f with f squarefree; return (s, f)."""
    s, f = 1, 1
    for p, e in prime_factors(n):
        s *= p ** (e // 2)
        if e % 2:
            f *= p
    return s, f


def fe_sqrt_rational(q) -> FieldElement:
    """Exact square root of a positive rational as a field element.

    >>> str(fe_sqrt_rational(Fraction(2, 5)))
    '1/5*sqrt(10)'
    """
    if isinstance(q, FieldElement):
        q = q.to_fraction()
    q = _as_fraction(q)
    if q <= 0:
        raise NegativeRadicand(f"square root of non-positive {q}")
    num, den = q.numerator, q.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    s, f = _split_square(num * den)
    if f == 1:
        return FieldElement(Fraction(s, den))
    return FieldElement._make({f: Fraction(s, den)}, ())


ZERO = FieldElement(0)
ONE = FieldElement(1)


def _fe(x) -> FieldElement:
    return x if isinstance(x, FieldElement) else FieldElement(x)


class ExactMatrix:
    """Square matrix over :class:`FieldElement`, immutable.

    Entries are lifted to one common prime basis at construction time.
    """

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Sequence[Sequence[object]]):
        rows = [[_fe(x) for x in row] for row in rows]
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise DimensionMismatch("ExactMatrix must be square and non-empty")
        primes = set()
        for row in rows:
            for x in row:
                primes.update(x.basis)
        if primes:
            rows = [[x if set(x.basis) == primes else x.with_basis(primes) for x in row] for row in rows]
        self._rows = tuple(tuple(row) for row in rows)
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> "ExactMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def diag(cls, values: Sequence[object]) -> "ExactMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]]) -> "ExactMatrix":
        n = len(columns)
        return cls([[columns[j][i] for j in range(n)] for i in range(n)])

    # -- access ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[FieldElement, ...], ...]:
        return self._rows

    @property
    def basis(self) -> tuple[int, ...]:
        return self._rows[0][0].basis

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        return self._rows[i][j]

    def column(self, j: int) -> tuple[FieldElement, ...]:
        return tuple(row[j] for row in self._rows)

    def __iter__(self):
        return iter(self._rows)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "ExactMatrix") -> None:
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"expected ExactMatrix, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-a for a in r] for r in self._rows])

    def scale(self, c) -> "ExactMatrix":
        c = _fe(c)
        return ExactMatrix([[c * a for a in r] for r in self._rows])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        cols = [other.column(j) for j in range(self.dim)]
        out = []
        for row in self._rows:
            out_row = []
            for col in cols:
                acc = ZERO
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return ExactMatrix(out)

    def __pow__(self, k: int) -> "ExactMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = ExactMatrix.identity(self.dim)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(col) for col in zip(*self._rows)])

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def trace(self) -> FieldElement:
        acc = ZERO
        for i in range(self.dim):
            acc = acc + self._rows[i][i]
        return acc

    def det(self) -> FieldElement:
        """Determinant: cofactor expansion up to 3x3, Bareiss elimination above."""
        n = self.dim
        m = self._rows
        if n == 1:
            return m[0][0]
        if n == 2:
            return m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if n == 3:
            return (
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            )
        a = [list(r) for r in m]
        sign = 1
        prev = ONE
        for k in range(n - 1):
            if not a[k][k]:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return ZERO
            inv_prev = prev.inverse()
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) * inv_prev
            prev = a[k][k]
        d = a[n - 1][n - 1]
        return d if sign > 0 else -d

    def inverse(self) -> "ExactMatrix":
        n = self.dim
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self._rows)]
        for col in range(n):
            pivot = next((i for i in range(col, n) if aug[i][col]), None)
            if pivot is None:
                raise Singular("matrix is not invertible")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [x * inv for x in aug[col]]
            for i in range(n):
                if i != col and aug[i][col]:
                    f = aug[i][col]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
        return ExactMatrix([row[n:] for row in aug])

    def commutator(self, other: "ExactMatrix") -> "ExactMatrix":
        """Additive commutator ``AB - BA``."""
        self._check(other)
        return self @ other - other @ self

    def commutes_with(self, other: "ExactMatrix") -> bool:
        return self.commutator(other).is_zero()

    def conjugate_by(self, p: "ExactMatrix", p_inv: "ExactMatrix | None" = None) -> "ExactMatrix":
        """Return ``P A P^-1``."""
        if p_inv is None:
            p_inv = p.inverse()
        return p @ self @ p_inv

    def is_zero(self) -> bool:
        return not any(x for row in self._rows for x in row)

    def is_identity(self) -> bool:
        return all((x == 1) if i == j else not x for i, row in enumerate(self._rows) for j, x in enumerate(row))

    def is_symmetric(self) -> bool:
        n = self.dim
        return all(self._rows[i][j] == self._rows[j][i] for i in range(n) for j in range(i + 1, n))

    def is_diagonal(self) -> bool:
        return all(not x for i, row in enumerate(self._rows) for j, x in enumerate(row) if i != j)

    def is_integral(self) -> bool:
        return all(x.is_integer() for row in self._rows for x in row)

    def leading_minors(self) -> list[FieldElement]:
        return [ExactMatrix([r[:k] for r in self._rows[:k]]).det() for k in range(1, self.dim + 1)]

    def mod_p(self, p: int) -> tuple[tuple[int, ...], ...]:
        """Reduce an integer matrix entrywise into {0, ..., p-1}."""
        out = []
        for row in self._rows:
            r = []
            for x in row:
                if not x.is_integer():
                    raise NonIntegralEntry(f"entry {x} is not an integer")
                r.append(int(x.to_fraction()) % p)
            out.append(tuple(r))
        return tuple(out)

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in row] for row in self._rows], dtype=float)

    def nonzero_entry(self) -> tuple[int, int, FieldElement] | None:
        """First nonzero entry in row-major order, or None."""
        for i, row in enumerate(self._rows):
            for j, x in enumerate(row):
                if x:
                    return i, j, x
        return None

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self):
        body = ",\n ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._rows)
        return f"ExactMatrix([{body}])"


def block_diag(*blocks: ExactMatrix) -> ExactMatrix:
    n = sum(b.dim for b in blocks)
    rows = [[ZERO] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.dim):
            for j in range(b.dim):
                rows[off + i][off + j] = b[i, j]
        off += b.dim
    return ExactMatrix(rows)


def nullspace(rows: Sequence[Sequence[FieldElement]], ncols: int) -> list[list[FieldElement]]:
    """Basis of the right null space of a (possibly rectangular) matrix."""
    a = [list(map(_fe, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for row_idx, pc in enumerate(pivots):
            v[pc] = -a[row_idx][fc]
        basis.append(v)
    return basis
