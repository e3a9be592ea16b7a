"""Explicit geodesic configurations for A(C5) -> SL(3,R), A(C6) -> SO(3,2)
and A(C5) -> SL(5,Z), including the closure solvers for the last rotations.

Rotation convention: a rotation fixing coordinate axis ``k`` acts on the
remaining coordinates ``i < j`` by ``[[c, s], [-s, c]]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping

from .errors import ClosureFailed, NotUnit, TooSmall, UnsupportedExtension
from .exactfield import ONE, ZERO, ExactMatrix, FieldElement, block_diag, fe_sqrt_rational
from .raag import SimpleGraph, cycle_graph
from .symspace import (
    FlatSpan,
    GroupForm,
    adjacent,
    flat_span,
    singular_isometries,
)

AXES = {"x": 0, "y": 1, "z": 2}


def _fe(x) -> FieldElement:
    return x if isinstance(x, FieldElement) else FieldElement(x)


@dataclass(frozen=True)
class RotationParam:
    axis: str
    cos: FieldElement
    sin: FieldElement

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of x, y, z, got {self.axis!r}")
        object.__setattr__(self, "cos", _fe(self.cos))
        object.__setattr__(self, "sin", _fe(self.sin))
        if self.cos * self.cos + self.sin * self.sin != 1:
            raise NotUnit(f"cos^2 + sin^2 != 1 for ({self.cos}, {self.sin})")

    @classmethod
    def identity(cls, axis: str) -> "RotationParam":
        return cls(axis, ONE, ZERO)


def rotation_about_axis(p: RotationParam) -> ExactMatrix:
    k = AXES[p.axis]
    i, j = [a for a in range(3) if a != k]
    rows = [[ONE if r == c else ZERO for c in range(3)] for r in range(3)]
    rows[i][i] = p.cos
    rows[i][j] = p.sin
    rows[j][i] = -p.sin
    rows[j][j] = p.cos
    return ExactMatrix(rows)


def tau_embed(i: int, cos, sin) -> ExactMatrix:
    """The embedding of SO(2) into the stabiliser of the i-th axis in SO(3,2).

    tau_0 rotates coordinates (1, 2), tau_1 rotates (0, 2); both act only
    on the SO(3) factor.
    """
    if i not in (0, 1):
        raise ValueError("tau index must be 0 or 1")
    rot = rotation_about_axis(RotationParam("xy"[i], cos, sin))
    return block_diag(rot, ExactMatrix.identity(2))


def _sqrt_of_norm(sq: FieldElement, what: str) -> FieldElement:
    if not sq.is_rational():
        raise UnsupportedExtension(f"{what} has irrational squared norm {sq}")
    return fe_sqrt_rational(sq)


def _apply(m: ExactMatrix, v):
    return [sum((m[i, j] * v[j] for j in range(m.dim)), ZERO) for i in range(m.dim)]


def _zeroing_rotation(axis: str, keep: FieldElement, kill: FieldElement) -> RotationParam:
    """Rotation about ``axis`` zeroing the first in-plane coordinate of
    (kill, keep), picking cos >= 0."""
    r2 = keep * keep + kill * kill
    if not r2:
        return RotationParam.identity(axis)
    r = _sqrt_of_norm(r2, "intermediate vector")
    # c*kill + s*keep = 0
    c, s = keep / r, -kill / r
    if c.sign() < 0 or (not c and s.sign() < 0):
        c, s = -c, -s
    return RotationParam(axis, c, s)


def solve_sl3_closure(r1: RotationParam, r2: RotationParam) -> tuple[RotationParam, RotationParam]:
    """Find R3 (about z) and R4 (about x) with R4 R3 R2 R1 fixing the y-axis.

    R3 zeroes the first coordinate of ``Y = R2 R1 e_y``; R4 then carries the
    result onto ``e_y``.  The product lies in the stabiliser of the y-axis
    and so commutes with ``T2``.
    """
    if r1.axis != "x" or r2.axis != "y":
        raise ValueError("R1 must rotate about x and R2 about y")
    y = _apply(rotation_about_axis(r2) @ rotation_about_axis(r1), [ZERO, ONE, ZERO])
    r3 = _zeroing_rotation("z", y[1], y[0])
    w = _apply(rotation_about_axis(r3), y)
    # (0, w1, w2) -> (0, 1, 0): c*w1 + s*w2 = 1, -s*w1 + c*w2 = 0
    r4 = RotationParam("x", w[1], w[2])
    product = rotation_about_axis(r4) @ rotation_about_axis(r3) @ rotation_about_axis(r2) @ rotation_about_axis(r1)
    if _apply(product, [ZERO, ONE, ZERO]) != [ZERO, ONE, ZERO]:
        raise ClosureFailed("R4 R3 R2 R1 does not fix the y-axis")
    return r3, r4


def solve_so32_closure(
    r1: RotationParam, r2: RotationParam, r3: RotationParam
) -> tuple[RotationParam, RotationParam]:
    """Find R4 (about x) and R5 (about y) with R5 R4 R3 R2 R1 fixing the x-axis.

    R1, R3, R5 are tau_1 rotations (about y); R2, R4 are tau_0 rotations
    (about x).  With ``u = R3 R2 R1 e_x``, R4 zeroes the y-coordinate of
    ``u`` and R5 brings the result back to ``e_x``.
    """
    if (r1.axis, r2.axis, r3.axis) != ("y", "x", "y"):
        raise ValueError("expected R1, R3 about y and R2 about x")
    q = rotation_about_axis(r3) @ rotation_about_axis(r2) @ rotation_about_axis(r1)
    u = _apply(q, [ONE, ZERO, ZERO])
    r4 = _zeroing_rotation("x", u[2], u[1])
    v = _apply(rotation_about_axis(r4), u)
    # (v0, 0, v2) -> e_x under [[c, 0, s], [0, 1, 0], [-s, 0, c]]
    r5 = RotationParam("y", v[0], v[2])
    full = [rotation_about_axis(r) for r in (r5, r4, r3, r2, r1)]
    product = full[0] @ full[1] @ full[2] @ full[3] @ full[4]
    if _apply(product, [ONE, ZERO, ZERO]) != [ONE, ZERO, ZERO]:
        raise ClosureFailed("R5 R4 R3 R2 R1 does not fix the x-axis")
    return r4, r5


@dataclass(frozen=True)
class EdgeData:
    """A flat through the basepoint holding the axes of both endpoint generators.

    ``extras`` are named axial isometries of the other singular geodesics in
    the plane; the singular set is the two endpoint generators plus extras.
    """

    pair: tuple[int, int]
    flat_span: FlatSpan
    extras: tuple[tuple[str, ExactMatrix], ...]


@dataclass(frozen=True)
class Configuration:
    graph: SimpleGraph
    form: GroupForm
    generators: tuple[ExactMatrix, ...]
    edges: tuple[EdgeData, ...]
    provenance: Mapping = field(default_factory=dict, compare=False)

    def edge(self, v: int, w: int) -> EdgeData:
        key = (min(v, w), max(v, w))
        for e in self.edges:
            if (min(e.pair), max(e.pair)) == key:
                return e
        raise KeyError(f"no edge {v}{w}")

    def singular_set(self, e: EdgeData) -> list[ExactMatrix]:
        v, w = e.pair
        return [self.generators[v], self.generators[w]] + [m for _, m in e.extras]

    def all_matrices(self) -> list[ExactMatrix]:
        out = list(self.generators)
        for e in self.edges:
            out.extend(m for _, m in e.extras)
        return out

    def with_generator(self, v: int, m: ExactMatrix) -> "Configuration":
        gens = list(self.generators)
        gens[v] = m
        return Configuration(self.graph, self.form, tuple(gens), self.edges, dict(self.provenance))


def _conj(p: ExactMatrix, m: ExactMatrix) -> ExactMatrix:
    # p is orthogonal in every call site, so p^-1 = p^T
    return p @ m @ p.T


def _make_edges(graph: SimpleGraph, gens, extras_by_edge) -> tuple[EdgeData, ...]:
    out = []
    for (v, w), extras in extras_by_edge:
        span = flat_span(gens[v], gens[w])
        out.append(EdgeData((v, w), span, tuple(extras)))
    return tuple(out)


def _check_pattern(graph: SimpleGraph, gens) -> None:
    for v in graph.vertices:
        for w in range(v + 1, graph.vertex_count):
            if adjacent(gens[v], gens[w]) != graph.adjacent(v, w):
                raise ClosureFailed(f"generators {v}, {w} break the commutation pattern")


SQRT2 = FieldElement.sqrt(2)
SQRT3 = FieldElement.sqrt(3)
DEFAULT_SL3_R1 = RotationParam("x", Fraction(1, 2), SQRT3 / 2)
DEFAULT_SL3_R2 = RotationParam("y", SQRT2 / 2, SQRT2 / 2)

SL3_T1 = ExactMatrix.diag([Fraction(1, 4), 2, 2])
SL3_T2 = ExactMatrix.diag([2, Fraction(1, 4), 2])
SL3_T3 = ExactMatrix.diag([2, 2, Fraction(1, 4)])


def build_sl3(r1: RotationParam = DEFAULT_SL3_R1, r2: RotationParam = DEFAULT_SL3_R2) -> Configuration:
    """Five-cycle of singular geodesics in SL(3,R)/SO(3).

    Vertex i carries gamma_i; edge (i, i+1) carries eta_i as its only extra
    singular geodesic.
    """
    r3, r4 = solve_sl3_closure(r1, r2)
    R1, R2, R3, R4 = (rotation_about_axis(r) for r in (r1, r2, r3, r4))
    p1 = R4
    p2 = R4 @ R3
    p3 = p2 @ R2
    p4 = p3 @ R1
    gens = (SL3_T2, SL3_T1, _conj(p1, SL3_T3), _conj(p2, SL3_T2), _conj(p3, SL3_T1))
    etas = (SL3_T3, _conj(p1, SL3_T2), _conj(p2, SL3_T1), _conj(p3, SL3_T3), _conj(p4, SL3_T3))
    graph = cycle_graph(5)
    _check_pattern(graph, gens)
    if not adjacent(gens[4], gens[0]):
        raise ClosureFailed("gamma_4 and gamma_0 do not share a flat")
    extras = [((i, (i + 1) % 5), [(f"eta{i}", etas[i])]) for i in range(5)]
    prov = {
        "construction": "sl3",
        "R1": rotation_to_json(r1),
        "R2": rotation_to_json(r2),
        "R3": rotation_to_json(r3),
        "R4": rotation_to_json(r4),
    }
    return Configuration(graph, GroupForm.special_linear(3), gens, _make_edges(graph, gens, extras), prov)


SO32_T0 = ExactMatrix(
    [
        [2, 0, 0, SQRT3, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [SQRT3, 0, 0, 2, 0],
        [0, 0, 0, 0, 1],
    ]
)
SO32_T1 = ExactMatrix(
    [
        [1, 0, 0, 0, 0],
        [0, 2, 0, 0, SQRT3],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, SQRT3, 0, 0, 2],
    ]
)
DEFAULT_SO32_R1 = RotationParam("y", Fraction(3, 5), Fraction(4, 5))
DEFAULT_SO32_R2 = RotationParam("x", Fraction(4, 5), Fraction(3, 5))
DEFAULT_SO32_R3 = RotationParam("y", Fraction(-31, 481), Fraction(-480, 481))


def _tau(p: RotationParam) -> ExactMatrix:
    return tau_embed(0 if p.axis == "x" else 1, p.cos, p.sin)


def build_so32(
    r1: RotationParam = DEFAULT_SO32_R1,
    r2: RotationParam = DEFAULT_SO32_R2,
    r3: RotationParam = DEFAULT_SO32_R3,
) -> Configuration:
    """Six-cycle of singular geodesics in SO(3,2)/SO(3)xSO(2).

    Each flat F_{i,i+1} = P_i F_01 also holds the two bisector geodesics,
    with axial isometries ``P_i T0 T1 P_i^-1`` and ``P_i T0 T1^-1 P_i^-1``.
    """
    r4, r5 = solve_so32_closure(r1, r2, r3)
    R1, R2, R3, R4, R5 = (_tau(r) for r in (r1, r2, r3, r4, r5))
    prods = [ExactMatrix.identity(5)]
    for r in (R5, R4, R3, R2, R1):
        prods.append(prods[-1] @ r)
    # prods[i] = R5 R4 ... (i factors)
    base = (SO32_T0, SO32_T1)
    gens = tuple(_conj(prods[i], base[i % 2]) for i in range(6))
    t0t1 = SO32_T0 @ SO32_T1
    t0t1i = SO32_T0 @ SO32_T1.inverse()
    graph = cycle_graph(6)
    _check_pattern(graph, gens)
    extras = []
    for i in range(6):
        j = (i + 1) % 6
        name = f"F{i}{j}"
        extras.append(((i, j), [(f"{name}:T0T1", _conj(prods[i], t0t1)), (f"{name}:T0T1^-1", _conj(prods[i], t0t1i))]))
    prov = {"construction": "so32"}
    for k, r in enumerate((r1, r2, r3, r4, r5), start=1):
        prov[f"R{k}"] = rotation_to_json(r)
    return Configuration(graph, GroupForm.orthogonal(3, 2), gens, _make_edges(graph, gens, extras), prov)


# block positions of A_1..A_5: (row of n, other index)
_SL5Z_BLOCKS = ((0, 1), (2, 3), (4, 0), (1, 2), (3, 4))


def sl5z_generator(i: int, n: int) -> ExactMatrix:
    """A_i (1-based) for parameter n: the block [[n, n-1], [n+1, n]] placed at _SL5Z_BLOCKS."""
    r, c = _SL5Z_BLOCKS[i - 1]
    rows = [[1 if a == b else 0 for b in range(5)] for a in range(5)]
    rows[r][r] = n
    rows[r][c] = n - 1
    rows[c][r] = n + 1
    rows[c][c] = n
    return ExactMatrix(rows)


def build_sl5z(n: int = 2) -> Configuration:
    """Five-cycle in SL(5,Z): vertex i carries A_{i+1}; each edge's extra
    singular geodesics are the axes of ``A_i A_j`` and ``A_i A_j^-1``."""
    if n < 2:
        raise TooSmall(f"n must be at least 2, got {n}")
    gens = tuple(sl5z_generator(i, n) for i in range(1, 6))
    graph = cycle_graph(5)
    _check_pattern(graph, gens)
    extras = []
    for v in range(5):
        w = (v + 1) % 5
        a, b = gens[v], gens[w]
        extras.append(((v, w), [(f"A{v + 1}A{w + 1}", a @ b), (f"A{v + 1}A{w + 1}^-1", a @ b.inverse())]))
    prov = {"construction": "sl5z", "n": n}
    return Configuration(graph, GroupForm.special_linear(5), gens, _make_edges(graph, gens, extras), prov)


def power_scale(c: Configuration, exps: Mapping[int, int] | int) -> Configuration:
    """Replace each generator by a positive power of itself.

    The extra singular isometries of every flat are recomputed from the
    powered endpoints, and the commutation pattern is re-verified.
    """
    if isinstance(exps, int):
        exps = {v: exps for v in c.graph.vertices}
    if any(exps.get(v, 1) < 1 for v in c.graph.vertices):
        raise ValueError("exponents must be positive")
    if all(exps.get(v, 1) == 1 for v in c.graph.vertices):
        return c
    gens = tuple(g ** exps.get(v, 1) for v, g in enumerate(c.generators))
    _check_pattern(c.graph, gens)
    extras = []
    for e in c.edges:
        v, w = e.pair
        members = []
        for direction, m in singular_isometries(gens[v], gens[w]):
            # (1, 0) and (0, 1) are the axes of the endpoints themselves
            if direction in ((1, 0), (0, 1)):
                continue
            members.append((f"{v}{w}:{direction[0]},{direction[1]}", m))
        extras.append(((v, w), members))
    prov = dict(c.provenance)
    prov["exps"] = [exps.get(v, 1) for v in c.graph.vertices]
    return Configuration(c.graph, c.form, gens, _make_edges(c.graph, gens, extras), prov)


def _modmul(a, b, p):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) % p for j in range(n)] for i in range(n)]


def congruence_order(a: ExactMatrix, p: int) -> int:
    """Smallest e >= 1 with a^e = I mod p, by repeated multiplication."""
    from .errors import NotInvertibleModP

    m = [list(r) for r in a.mod_p(p)]
    if ExactMatrix(m).det().to_fraction() % p == 0:
        raise NotInvertibleModP(f"matrix is singular mod {p}")
    n = a.dim
    eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    cur = m
    bound = p ** (n * n)
    e = 1
    while cur != eye:
        cur = _modmul(cur, m, p)
        e += 1
        if e > bound:
            raise ArithmeticError("order search exceeded p^(n^2)")
    return e


def rotation_to_json(r: RotationParam) -> dict:
    from .serialize import fe_to_json

    return {"axis": r.axis, "cos": fe_to_json(r.cos), "sin": fe_to_json(r.sin)}


def rotation_from_json(data: dict) -> RotationParam:
    from .serialize import fe_from_json

    return RotationParam(data["axis"], fe_from_json(data["cos"]), fe_from_json(data["sin"]))


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out
