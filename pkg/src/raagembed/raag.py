"""Right-angled Artin groups: defining graphs, words, and the word problem.

Words are sequences of syllables ``s_v^k``.  Reduction merges two syllables
on the same vertex whenever every syllable between them commutes with that
vertex, then shuffles the survivors into the lexicographically least
arrangement of their commutation class.  The result is length-minimal and
canonical: two words represent the same element iff they reduce to equal
words.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .errors import TooSmall


@dataclass(frozen=True)
class SimpleGraph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("graph needs at least one vertex")
        normalized = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {e} out of range")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, vertex_count: int, edges) -> "SimpleGraph":
        return cls(vertex_count, frozenset(tuple(e) for e in edges))

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v: int) -> list[int]:
        return [u for u in self.vertices if self.adjacent(u, v)]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def non_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in combinations(self.vertices, 2) if not self.adjacent(u, v)]

    def is_triangle_free(self) -> bool:
        for u, v in self.edges:
            for w in self.vertices:
                if w != u and w != v and self.adjacent(u, w) and self.adjacent(v, w):
                    return False
        return True


def cycle_graph(n: int) -> SimpleGraph:
    """The cycle C_n on vertices 0..n-1."""
    if n < 3:
        raise TooSmall(f"a cycle needs at least 3 vertices, got {n}")
    return SimpleGraph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def cycle_surface_genus(n: int) -> int:
    """Genus of the closed surface whose group embeds in A(C_n), n >= 5."""
    if n < 5:
        raise TooSmall(f"genus formula needs n >= 5, got {n}")
    return 1 + (n - 4) * 2 ** (n - 3)


_TOKEN = re.compile(r"^s(\d+)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class Word:
    """A word ``s_{v1}^{k1} ... s_{vn}^{kn}``; exponents are nonzero."""

    syllables: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        syl = tuple((int(v), int(k)) for v, k in self.syllables)
        if any(k == 0 for _, k in syl):
            raise ValueError("syllable exponents must be nonzero")
        object.__setattr__(self, "syllables", syl)

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Read the ``"s0 s1^-2 s4^3"`` token format; ``""`` or ``"1"`` is empty."""
        text = text.strip()
        if text in ("", "1", "e"):
            return cls(())
        syl = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if m is None:
                raise ValueError(f"bad word token {tok!r}")
            k = int(m.group(2)) if m.group(2) is not None else 1
            if k:
                syl.append((int(m.group(1)), k))
        return cls(tuple(syl))

    @classmethod
    def from_letters(cls, letters: Sequence[tuple[int, int]]) -> "Word":
        return cls(tuple((v, e) for v, e in letters if e))

    def letters(self) -> list[tuple[int, int]]:
        """Expand to single letters (v, +-1)."""
        out = []
        for v, k in self.syllables:
            s = 1 if k > 0 else -1
            out.extend([(v, s)] * abs(k))
        return out

    def inverse(self) -> "Word":
        return Word(tuple((v, -k) for v, k in reversed(self.syllables)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def __len__(self) -> int:
        return len(self.syllables)

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return " ".join(f"s{v}" if k == 1 else f"s{v}^{k}" for v, k in self.syllables)


def commutator(a: Word, b: Word) -> Word:
    """``a b a^-1 b^-1``"""
    return a * b * a.inverse() * b.inverse()


def _merge_pass(syl: list[list[int]], g: SimpleGraph) -> bool:
    """Merge the leftmost cancellable pair; report whether anything changed."""
    for i in range(len(syl)):
        v = syl[i][0]
        for j in range(i + 1, len(syl)):
            u = syl[j][0]
            if u == v:
                syl[i][1] += syl[j][1]
                del syl[j]
                if syl[i][1] == 0:
                    del syl[i]
                return True
            if not g.adjacent(u, v):
                break
    return False


def _lex_shuffle(syl: list[tuple[int, int]], g: SimpleGraph) -> list[tuple[int, int]]:
    out = []
    rest = list(syl)
    while rest:
        best = None
        for k, (v, _) in enumerate(rest):
            if all(g.adjacent(u, v) for u, _ in rest[:k]):
                if best is None or v < rest[best][0]:
                    best = k
        out.append(rest.pop(best))
    return out


def word_reduce(w: Word, g: SimpleGraph) -> Word:
    """Shortest canonical spelling of ``w`` in A(g); empty iff ``w`` is trivial."""
    syl: list[list[int]] = []
    for v, k in w.syllables:
        if not 0 <= v < g.vertex_count:
            raise ValueError(f"vertex {v} not in graph")
        if syl and syl[-1][0] == v:
            syl[-1][1] += k
            if syl[-1][1] == 0:
                syl.pop()
        else:
            syl.append([v, k])
    while _merge_pass(syl, g):
        pass
    return Word(tuple(_lex_shuffle([tuple(s) for s in syl], g)))


def word_is_trivial(w: Word, g: SimpleGraph) -> bool:
    return len(word_reduce(w, g)) == 0


def successor_mask(mask: int, v: int, g: SimpleGraph) -> int:
    """Vertices that may follow, in canonical reduced form, after appending ``v``.

    ``mask`` is the allowed set before the append.  A vertex ``x`` stays
    allowed only if ``v`` does not commute with it, or if ``v`` commutes
    with it, precedes it, and ``x`` was already allowed.
    """
    out = 0
    for x in g.vertices:
        if x == v:
            continue
        if g.adjacent(x, v):
            if v < x and mask >> x & 1:
                out |= 1 << x
        else:
            out |= 1 << x
    return out


def enumerate_words(g: SimpleGraph, max_syllables: int, exponent_bound: int) -> Iterator[Word]:
    """Every nontrivial element with at most ``max_syllables`` syllables and
    exponents bounded by ``exponent_bound``, each exactly once, in reduced
    canonical form.  Shorter words come first."""
    if max_syllables < 1 or exponent_bound < 1:
        raise ValueError("max_syllables and exponent_bound must be positive")
    exps = [k for k in range(-exponent_bound, exponent_bound + 1) if k]
    full = (1 << g.vertex_count) - 1

    def extend(prefix: list[tuple[int, int]], mask: int, depth: int):
        if depth == 0:
            yield Word(tuple(prefix))
            return
        for v in g.vertices:
            if mask >> v & 1:
                nxt = successor_mask(mask, v, g)
                for k in exps:
                    prefix.append((v, k))
                    yield from extend(prefix, nxt, depth - 1)
                    prefix.pop()

    for length in range(1, max_syllables + 1):
        yield from extend([], full, length)
