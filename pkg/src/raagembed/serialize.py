"""JSON wire formats for field elements, matrices and configurations.

Integers travel as decimal strings so nothing is lost to JSON number limits.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import prod

from .exactfield import ExactMatrix, FieldElement
from .raag import SimpleGraph
from .symspace import FlatSpan, GroupForm


def fe_to_json(x: FieldElement) -> dict:
    return {
        "basis": list(x.basis),
        "terms": [
            {"subset": list(subset), "num": str(c.numerator), "den": str(c.denominator)}
            for subset, c in x.subsets()
        ],
    }


def fe_from_json(data: dict) -> FieldElement:
    terms = {}
    for t in data["terms"]:
        r = prod(t["subset"]) if t["subset"] else 1
        terms[r] = terms.get(r, 0) + Fraction(int(t["num"]), int(t["den"]))
    return FieldElement.from_terms(terms, data.get("basis", ()))


def matrix_to_json(m: ExactMatrix) -> list:
    return [[fe_to_json(x) for x in row] for row in m.rows]


def matrix_from_json(data: list) -> ExactMatrix:
    return ExactMatrix([[fe_from_json(x) for x in row] for row in data])


def config_to_json(c) -> dict:
    return {
        "graph": {"vertex_count": c.graph.vertex_count, "edges": [list(e) for e in c.graph.sorted_edges()]},
        "form": c.form.to_json(),
        "generators": [matrix_to_json(g) for g in c.generators],
        "edges": [
            {
                "pair": list(e.pair),
                "flat_span": [list(f) for f in e.flat_span.forms],
                "extras": [{"name": name, "matrix": matrix_to_json(m)} for name, m in e.extras],
                "singular_set": [matrix_to_json(m) for m in c.singular_set(e)],
            }
            for e in c.edges
        ],
        "provenance": c.provenance,
    }


def config_from_json(data: dict):
    from .builders import Configuration, EdgeData

    graph = SimpleGraph.from_edges(data["graph"]["vertex_count"], data["graph"]["edges"])
    gens = tuple(matrix_from_json(g) for g in data["generators"])
    edges = tuple(
        EdgeData(
            tuple(e["pair"]),
            FlatSpan(tuple(tuple(f) for f in e["flat_span"])),
            tuple((x["name"], matrix_from_json(x["matrix"])) for x in e["extras"]),
        )
        for e in data["edges"]
    )
    return Configuration(graph, GroupForm.from_json(data["form"]), gens, edges, data.get("provenance", {}))


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
