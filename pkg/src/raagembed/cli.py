"""Command-line front end.

Exit status: 0 on success or a passing certificate, 1 on a failing
certificate, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import builders
from .builders import RotationParam, build_sl3, build_sl5z, build_so32, congruence_order, lcm, power_scale
from .certify import certify_configuration, conjugacy_fingerprint, faithfulness_smoke
from .errors import RaagEmbedError
from .exactfield import FieldElement
from .raag import Word, cycle_graph, enumerate_words, word_reduce
from .serialize import config_from_json, config_to_json, dumps, fe_to_json

_TERM = re.compile(r"([+-]?[0-9]+(?:/[0-9]+)?)(?:@([0-9]+))?")


def parse_field_element(text: str) -> FieldElement:
    """``"1/2"``, ``"1/2@3"`` (= sqrt(3)/2), ``"2-1@3"`` (= 2 - sqrt(3))."""
    text = text.replace(" ", "")
    pos, terms = 0, {}
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse field element {text!r}")
        r = int(m.group(2)) if m.group(2) else 1
        terms[r] = terms.get(r, 0) + Fraction(m.group(1))
        pos = m.end()
    return FieldElement.from_terms(terms)


def parse_rotation(token: str, axis: str, default: RotationParam) -> RotationParam:
    """``default`` or ``c:<value>,s:<value>[,rad:<p>]``; ``rad`` scales both by sqrt(p)."""
    if token == "default":
        return default
    fields = {}
    for part in token.split(","):
        key, sep, value = part.partition(":")
        if not sep or key not in ("c", "s", "rad") or key in fields:
            raise ValueError(f"bad rotation token {token!r}")
        fields[key] = value
    if "c" not in fields or "s" not in fields:
        raise ValueError(f"rotation token {token!r} needs c: and s:")
    c = parse_field_element(fields["c"])
    s = parse_field_element(fields["s"])
    if "rad" in fields:
        root = FieldElement.sqrt(int(fields["rad"]))
        c, s = c * root, s * root
    return RotationParam(axis, c, s)


def parse_exps(text: str | None, vertex_count: int):
    if text is None:
        return None
    parts = [int(x) for x in text.split(",")]
    if len(parts) == 1:
        return {v: parts[0] for v in range(vertex_count)}
    if len(parts) != vertex_count:
        raise ValueError(f"--exps needs 1 or {vertex_count} values")
    return dict(enumerate(parts))


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str):
    return config_from_json(json.loads(Path(path).read_text()))


def _finish_build(config, args) -> int:
    exps = parse_exps(args.exps, config.graph.vertex_count)
    if exps:
        config = power_scale(config, exps)
    if args.emit:
        _write(dumps(config_to_json(config)), args.emit)
    if args.certify:
        cert = certify_configuration(config)
        _write(dumps(cert.to_json()), args.certificate)
        return 0 if cert.passed else 1
    if not args.emit:
        _write(dumps(config_to_json(config)), None)
    return 0


def cmd_build_sl3(args) -> int:
    r1 = parse_rotation(args.r1, "x", builders.DEFAULT_SL3_R1)
    r2 = parse_rotation(args.r2, "y", builders.DEFAULT_SL3_R2)
    return _finish_build(build_sl3(r1, r2), args)


def cmd_build_so32(args) -> int:
    r1 = parse_rotation(args.r1, "y", builders.DEFAULT_SO32_R1)
    r2 = parse_rotation(args.r2, "x", builders.DEFAULT_SO32_R2)
    r3 = parse_rotation(args.r3, "y", builders.DEFAULT_SO32_R3)
    return _finish_build(build_so32(r1, r2, r3), args)


def cmd_build_sl5z(args) -> int:
    return _finish_build(build_sl5z(args.n), args)


def cmd_certify(args) -> int:
    cert = certify_configuration(_load(args.config))
    _write(dumps(cert.to_json()), args.output)
    return 0 if cert.passed else 1


def cmd_smoke(args) -> int:
    report = faithfulness_smoke(_load(args.config), args.max_syllables, args.exponent_bound)
    _write(dumps(report.to_json()), args.output)
    return 0 if report.all_nonidentity else 1


def cmd_fingerprint(args) -> int:
    fp = conjugacy_fingerprint(_load(args.config))
    _write(dumps({"char_polys": [[fe_to_json(x) for x in poly] for poly in fp],
                  "readable": [[str(x) for x in poly] for poly in fp]}), args.output)
    return 0


def cmd_congruence(args) -> int:
    config = build_sl5z(args.n)
    exps = parse_exps(args.exps, 5)
    if exps:
        config = power_scale(config, exps)
    orders = [congruence_order(g, args.p) for g in config.generators]
    table = {"n": args.n, "p": args.p, "orders": {f"A{i + 1}": e for i, e in enumerate(orders)}, "lcm": lcm(*orders)}
    _write(dumps(table), args.output)
    return 0


def cmd_emit(args) -> int:
    if args.construction == "sl3":
        config = build_sl3()
    elif args.construction == "so32":
        config = build_so32()
    else:
        config = build_sl5z(args.n)
    _write(dumps(config_to_json(config)), args.output)
    return 0


def cmd_reduce(args) -> int:
    w = word_reduce(Word.parse(args.word), cycle_graph(args.cycle))
    print(w)
    return 0


def cmd_words(args) -> int:
    g = cycle_graph(args.cycle)
    for w in enumerate_words(g, args.max_syllables, args.exponent_bound):
        print(w)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="raagembed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def build_opts(p):
        p.add_argument("--exps", help="power scaling: one integer, or one per vertex, comma separated")
        p.add_argument("--certify", action="store_true", help="certify and print the certificate")
        p.add_argument("--emit", metavar="PATH", help="write the configuration JSON here")
        p.add_argument("--certificate", metavar="PATH", help="write the certificate here instead of stdout")

    p = sub.add_parser("build-sl3", help="A(C5) -> SL(3,R)")
    p.add_argument("--r1", default="default", help="rotation about x: default or c:..,s:..[,rad:p]")
    p.add_argument("--r2", default="default", help="rotation about y")
    build_opts(p)
    p.set_defaults(func=cmd_build_sl3)

    p = sub.add_parser("build-so32", help="A(C6) -> SO(3,2)")
    p.add_argument("--r1", default="default", help="tau_1 rotation")
    p.add_argument("--r2", default="default", help="tau_0 rotation")
    p.add_argument("--r3", default="default", help="tau_1 rotation")
    build_opts(p)
    p.set_defaults(func=cmd_build_so32)

    p = sub.add_parser("build-sl5z", help="A(C5) -> SL(5,Z)")
    p.add_argument("--n", type=int, default=2)
    build_opts(p)
    p.set_defaults(func=cmd_build_sl5z)

    p = sub.add_parser("certify", help="certify a configuration JSON file")
    p.add_argument("config")
    p.add_argument("--output")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("smoke", help="faithfulness smoke test on short words")
    p.add_argument("config")
    p.add_argument("--max-syllables", type=int, default=4)
    p.add_argument("--exponent-bound", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_smoke)

    p = sub.add_parser("fingerprint", help="characteristic polynomials of the generators")
    p.add_argument("config")
    p.add_argument("--output")
    p.set_defaults(func=cmd_fingerprint)

    p = sub.add_parser("congruence", help="orders of the SL(5,Z) generators mod p")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--exps")
    p.add_argument("--output")
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("emit", help="write a configuration JSON with default parameters")
    p.add_argument("construction", choices=["sl3", "so32", "sl5z"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--output")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("reduce", help="reduce a word in A(C_n)")
    p.add_argument("word", help='e.g. "s0 s1 s0^-1"')
    p.add_argument("--cycle", type=int, default=5)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("words", help="list reduced words in A(C_n)")
    p.add_argument("--cycle", type=int, default=5)
    p.add_argument("--max-syllables", type=int, default=2)
    p.add_argument("--exponent-bound", type=int, default=1)
    p.set_defaults(func=cmd_words)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RaagEmbedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
