"""Certification of geodesic configurations.

A configuration is checked against the finitely verifiable hypotheses of
the ping-pong embedding theorem:

* generators of adjacent vertices commute and no others do;
* each edge's plane lies in a unique maximal flat and carries finitely many
  singular geodesics, all of which are listed;
* geodesics from two disjoint flats, or from two flats sharing a vertex
  (other than that vertex's own geodesic), are pairwise non-adjacent.

Non-adjacency is witnessed by a nonzero entry of the additive commutator.
Failures are recorded in the certificate, never raised.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import sympy

from .builders import Configuration
from .errors import RaagEmbedError
from .exactfield import ExactMatrix, FieldElement
from .raag import Word, successor_mask
from .serialize import fe_to_json
from .symspace import (
    INFINITE,
    adjacent,
    char_poly,
    flat_span,
    flat_uniqueness,
    regular_direction,
    same_geodesic,
    singular_directions,
)

log = logging.getLogger(__name__)

NON_EDGE = "non_edge_vertices"
DISJOINT = "disjoint_edges"
SHARED = "shared_endpoint"


@dataclass(frozen=True)
class PairRequirement:
    left: str
    right: str
    reason: str


def gen_id(v: int) -> str:
    return f"g{v}"


def geodesics(c: Configuration) -> dict[str, ExactMatrix]:
    """Geodesic id -> axial isometry, generators first."""
    out = {gen_id(v): g for v, g in enumerate(c.generators)}
    for e in c.edges:
        for name, m in e.extras:
            if name in out:
                raise ValueError(f"duplicate geodesic name {name!r}")
            out[name] = m
    return out


def _members(c: Configuration) -> dict[tuple[int, int], list[str]]:
    return {e.pair: [gen_id(e.pair[0]), gen_id(e.pair[1])] + [n for n, _ in e.extras] for e in c.edges}


def _rule_pairs(c: Configuration):
    """Yield (left, right, reason) for every literal instance of each rule."""
    g = c.graph
    for v, w in g.non_edges():
        yield gen_id(v), gen_id(w), NON_EDGE
    members = _members(c)
    edges = list(members)
    for e, f in combinations(edges, 2):
        shared = set(e) & set(f)
        if not shared:
            for x in members[e]:
                for y in members[f]:
                    if x[0] == "g" and y[0] == "g" and g.adjacent(int(x[1:]), int(y[1:])):
                        continue
                    yield x, y, DISJOINT
        elif len(shared) == 1:
            hub = gen_id(shared.pop())
            for x in members[e]:
                if x == hub:
                    continue
                for y in members[f]:
                    if y != hub:
                        yield x, y, SHARED


def required_pairs(c: Configuration) -> list[PairRequirement]:
    """Deduplicated unordered pairs that must be non-adjacent, each tagged
    with the first rule that demands it."""
    seen: dict[frozenset, PairRequirement] = {}
    for x, y, reason in _rule_pairs(c):
        if x == y:
            continue
        key = frozenset((x, y))
        if key not in seen:
            seen[key] = PairRequirement(x, y, reason)
    return list(seen.values())


def rule_incidences(c: Configuration) -> dict[str, int]:
    """Raw tally of rule instances before deduplication, per rule and in total.

    A pair demanded by several flat pairs is counted once per demand.
    """
    out = {NON_EDGE: 0, DISJOINT: 0, SHARED: 0}
    for x, y, reason in _rule_pairs(c):
        if x != y:
            out[reason] += 1
    out["total"] = sum(out.values())
    return out


@dataclass
class EdgeCheck:
    pair: tuple[int, int]
    unique_flat: bool = False
    regular_direction: tuple[int, int] | None = None
    singular_count: object = None
    singular_directions: list = field(default_factory=list)
    singular_set_size: int = 0
    flat_consistent: bool = False
    error: str | None = None

    @property
    def ok(self) -> bool:
        return (
            self.error is None
            and self.unique_flat
            and self.singular_count is not INFINITE
            and self.flat_consistent
            and self.singular_set_size == self.singular_count
        )

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "unique_flat": self.unique_flat,
            "regular_direction": list(self.regular_direction) if self.regular_direction else None,
            "singular_count": "infinite" if self.singular_count is INFINITE else self.singular_count,
            "singular_directions": [list(d) for d in self.singular_directions],
            "singular_set_size": self.singular_set_size,
            "flat_consistent": self.flat_consistent,
            "error": self.error,
        }


@dataclass
class Witness:
    row: int
    col: int
    value: FieldElement


@dataclass
class Certificate:
    construction: str
    requirements: list[PairRequirement]
    witnesses: list[Witness | None]
    edge_checks: list[EdgeCheck]
    adjacency_matrix_ok: bool
    triangle_free: bool
    rule_incidences: dict[str, int]
    failures: list[str]

    @property
    def verdict(self) -> str:
        return "fail" if self.failures else "pass"

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> str | None:
        return self.failures[0] if self.failures else None

    def to_json(self) -> dict:
        pairs = []
        for req, wit in zip(self.requirements, self.witnesses):
            pairs.append(
                {
                    "left": req.left,
                    "right": req.right,
                    "reason": req.reason,
                    "witness": None if wit is None else {"row": wit.row, "col": wit.col, "value": fe_to_json(wit.value)},
                }
            )
        return {
            "construction": self.construction,
            "pairs": pairs,
            "pair_count": len(pairs),
            "rule_incidences": self.rule_incidences,
            "edges": [e.to_json() for e in self.edge_checks],
            "adjacency_matrix_ok": self.adjacency_matrix_ok,
            "triangle_free": self.triangle_free,
            "verdict": self.verdict,
            "first_failure": self.first_failure,
        }


def _check_edge(c: Configuration, e) -> EdgeCheck:
    v, w = e.pair
    chk = EdgeCheck((v, w))
    members = c.singular_set(e)
    chk.flat_consistent = all(adjacent(a, b) for a, b in combinations(members, 2))
    try:
        span = flat_span(c.generators[v], c.generators[w])
    except RaagEmbedError as exc:
        chk.error = f"{type(exc).__name__}: {exc}"
        return chk
    chk.regular_direction = regular_direction(span)
    chk.unique_flat = flat_uniqueness(span)
    dirs = singular_directions(span)
    if dirs is INFINITE:
        chk.singular_count = INFINITE
    else:
        chk.singular_count = len(dirs)
        chk.singular_directions = dirs
    distinct: list[ExactMatrix] = []
    for m in members:
        if not any(same_geodesic(m, d) for d in distinct):
            distinct.append(m)
    chk.singular_set_size = len(distinct)
    return chk


def certify_configuration(c: Configuration) -> Certificate:
    failures: list[str] = []
    g = c.graph
    tri = g.is_triangle_free()
    if not tri:
        failures.append("graph has a triangle")

    adj_ok = True
    for v, w in combinations(g.vertices, 2):
        if adjacent(c.generators[v], c.generators[w]) != g.adjacent(v, w):
            adj_ok = False
            what = "do not commute" if g.adjacent(v, w) else "commute"
            failures.append(f"generators {v} and {w} {what}")

    edge_checks = []
    for e in c.edges:
        chk = _check_edge(c, e)
        edge_checks.append(chk)
        if not chk.ok:
            failures.append(f"edge {e.pair}: {chk.error or _edge_problem(chk)}")
    covered = {(min(e.pair), max(e.pair)) for e in c.edges}
    for e in g.sorted_edges():
        if e not in covered:
            failures.append(f"edge {e} has no flat data")

    geo = geodesics(c)
    reqs = required_pairs(c)
    witnesses: list[Witness | None] = []
    for req in reqs:
        entry = geo[req.left].commutator(geo[req.right]).nonzero_entry()
        if entry is None:
            witnesses.append(None)
            failures.append(f"{req.left} and {req.right} commute ({req.reason})")
        else:
            witnesses.append(Witness(*entry))
    return Certificate(
        construction=str(c.provenance.get("construction", "custom")),
        requirements=reqs,
        witnesses=witnesses,
        edge_checks=edge_checks,
        adjacency_matrix_ok=adj_ok,
        triangle_free=tri,
        rule_incidences=rule_incidences(c),
        failures=failures,
    )


def _edge_problem(chk: EdgeCheck) -> str:
    if not chk.unique_flat:
        return "no regular direction, flat not unique"
    if chk.singular_count is INFINITE:
        return "infinitely many singular directions"
    if not chk.flat_consistent:
        return "singular set members do not commute"
    return f"singular set lists {chk.singular_set_size} geodesics, plane has {chk.singular_count}"


# -- faithfulness smoke test ------------------------------------------------


@dataclass
class SmokeReport:
    words_checked: int
    all_nonidentity: bool
    counterexample: Word | None = None
    prime: int = 0
    exact_rechecks: int = 0

    def to_json(self) -> dict:
        return {
            "words_checked": self.words_checked,
            "all_nonidentity": self.all_nonidentity,
            "counterexample": None if self.counterexample is None else str(self.counterexample),
            "prime": self.prime,
            "exact_rechecks": self.exact_rechecks,
        }


class ModularImage:
    """Ring map from Z[1/d][sqrt q : q in primes] to F_p.

    Each sqrt(q) goes to a fixed square root of q mod p.  A matrix whose
    image is not the identity cannot be the identity.
    """

    def __init__(self, matrices, below: int = 1 << 29):
        primes, dens = set(), set()
        for m in matrices:
            for row in m.rows:
                for x in row:
                    primes.update(x.basis)
                    dens.update(c.denominator for c in x.terms.values())
        p = below
        while True:
            p = int(sympy.prevprime(p))
            if any(d % p == 0 for d in dens) or p in primes:
                continue
            roots = {}
            for q in sorted(primes):
                r = sympy.sqrt_mod(q, p)
                if r is None:
                    break
                roots[q] = int(r)
            else:
                break
        self.p = p
        self.roots = roots

    def scalar(self, x: FieldElement) -> int:
        p = self.p
        acc = 0
        for subset, c in x.subsets():
            v = c.numerator % p * pow(c.denominator, -1, p) % p
            for q in subset:
                v = v * self.roots[q] % p
            acc += v
        return acc % p

    def matrix(self, m: ExactMatrix) -> np.ndarray:
        return np.array([[self.scalar(x) for x in row] for row in m.rows], dtype=np.int64)


def _word_matrix(c: Configuration, w: Word) -> ExactMatrix:
    out = ExactMatrix.identity(c.form.dim)
    for v, k in w.syllables:
        out = out @ (c.generators[v] ** k)
    return out


def faithfulness_smoke(c: Configuration, max_syllables: int, exponent_bound: int) -> SmokeReport:
    """Check that no nontrivial reduced word maps to the identity matrix.

    Words are enumerated in canonical reduced form (one per group element).
    Each image is first evaluated in F_p; only images that reduce to the
    identity there are recomputed exactly.
    """
    g = c.graph
    exps = [k for k in range(-exponent_bound, exponent_bound + 1) if k]
    letters = [(v, k) for v in g.vertices for k in exps]
    bits = len(letters).bit_length()
    if bits * max_syllables > 62:
        raise ValueError("word too long for the packed encoding")
    powers = {(v, k): c.generators[v] ** k for v, k in letters}
    image = ModularImage(powers.values())
    p = image.p
    mod = {lk: image.matrix(m) for lk, m in powers.items()}
    n = c.form.dim
    eye = np.eye(n, dtype=np.int64)
    report = SmokeReport(0, True, None, p)

    def decode(code: int, length: int) -> Word:
        syl = []
        for _ in range(length):
            syl.append(letters[(code & ((1 << bits) - 1)) - 1])
            code >>= bits
        return Word(tuple(reversed(syl)))

    full = (1 << g.vertex_count) - 1
    for first in letters:
        v0 = first[0]
        mats = mod[first][None, :, :]
        codes = np.array([letters.index(first) + 1], dtype=np.int64)
        report.words_checked += 1
        if np.array_equal(mats[0], eye) and _exact_identity(c, decode(int(codes[0]), 1), report):
            return report
        frontier = {successor_mask(full, v0, g): (mats, codes)}
        for depth in range(2, max_syllables + 1):
            nxt: dict[int, list] = {}
            for mask, (mats, codes) in frontier.items():
                for v in g.vertices:
                    if not mask >> v & 1:
                        continue
                    nmask = successor_mask(mask, v, g)
                    for k in exps:
                        idx = letters.index((v, k)) + 1
                        prod = np.matmul(mats, mod[(v, k)]) % p
                        new_codes = (codes << bits) | idx
                        report.words_checked += len(prod)
                        hits = np.nonzero(np.all(prod == eye, axis=(1, 2)))[0]
                        for h in hits:
                            if _exact_identity(c, decode(int(new_codes[h]), depth), report):
                                return report
                        if depth < max_syllables:
                            nxt.setdefault(nmask, []).append((prod, new_codes))
            frontier = {
                m: (np.concatenate([a for a, _ in parts]), np.concatenate([b for _, b in parts]))
                for m, parts in nxt.items()
            }
    return report


def _exact_identity(c: Configuration, w: Word, report: SmokeReport) -> bool:
    report.exact_rechecks += 1
    log.info("image of %s is the identity mod %d; rechecking exactly", w, report.prime)
    if _word_matrix(c, w).is_identity():
        report.all_nonidentity = False
        report.counterexample = w
        return True
    return False


# -- conjugacy invariants ---------------------------------------------------


def conjugacy_fingerprint(c: Configuration) -> list[tuple[FieldElement, ...]]:
    """Characteristic polynomial of every generator, in vertex order."""
    return [tuple(char_poly(g)) for g in c.generators]


def fingerprint_multiset(fp) -> list[tuple[str, ...]]:
    return sorted(tuple(str(x) for x in poly) for poly in fp)


def fingerprints_differ(a, b) -> bool:
    """Different multisets of characteristic polynomials rule out conjugacy."""
    return fingerprint_multiset(a) != fingerprint_multiset(b)
