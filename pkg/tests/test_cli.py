import json
from fractions import Fraction

import pytest

from raagembed.cli import main, parse_field_element, parse_rotation
from raagembed.builders import DEFAULT_SL3_R1
from raagembed.exactfield import FieldElement, fe_sqrt_rational
from raagembed.serialize import fe_from_json, matrix_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_field_element():
    s3 = FieldElement.sqrt(3)
    assert parse_field_element("1/2@3") == s3 / 2
    assert parse_field_element("2-1@3") == 2 - s3
    assert parse_field_element("-31/481") == FieldElement(-31) / 481
    with pytest.raises(ValueError):
        parse_field_element("sqrt3")


def test_parse_rotation():
    r = parse_rotation("c:1/2,s:1/2@3", "x", DEFAULT_SL3_R1)
    assert (r.cos, r.sin) == (DEFAULT_SL3_R1.cos, DEFAULT_SL3_R1.sin)
    r = parse_rotation("c:1/2,s:1/2,rad:2", "y", DEFAULT_SL3_R1)
    assert r.cos == r.sin == FieldElement.sqrt(2) / 2
    assert parse_rotation("default", "x", DEFAULT_SL3_R1) is DEFAULT_SL3_R1
    with pytest.raises(ValueError):
        parse_rotation("c:1", "x", DEFAULT_SL3_R1)


def test_build_sl5z_certify(capsys):
    code, out, _ = run(capsys, "build-sl5z", "--n", "2", "--certify")
    assert code == 0
    assert json.loads(out)["verdict"] == "pass"


def test_congruence_table(capsys):
    code, out, _ = run(capsys, "congruence", "--n", "2", "--p", "3")
    data = json.loads(out)
    assert code == 0 and data["orders"]["A1"] == 6 and data["lcm"] == 6


def test_emit_sl3_has_closure_rotations(tmp_path, capsys):
    path = tmp_path / "config.json"
    code, out, _ = run(capsys, "build-sl3", "--r1", "default", "--r2", "default", "--emit", str(path))
    assert code == 0 and out == ""
    data = json.loads(path.read_text())
    r3, r4 = data["provenance"]["R3"], data["provenance"]["R4"]
    assert fe_from_json(r3["cos"]) == fe_sqrt_rational(Fraction(2, 5))
    assert fe_from_json(r4["sin"]) == -fe_sqrt_rational(Fraction(3, 8))
    assert matrix_from_json(data["generators"][1]).is_diagonal()


def test_emit_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "build-so32", "--emit", str(a))
    run(capsys, "build-so32", "--emit", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_certify_and_smoke_from_file(tmp_path, capsys):
    path = tmp_path / "c.json"
    run(capsys, "emit", "sl5z", "--n", "3", "--output", str(path))
    code, out, _ = run(capsys, "certify", str(path))
    assert code == 0 and json.loads(out)["pair_count"] == 75
    code, out, _ = run(capsys, "smoke", str(path), "--max-syllables", "3")
    assert code == 0 and json.loads(out)["all_nonidentity"]
    code, out, _ = run(capsys, "fingerprint", str(path))
    assert code == 0 and json.loads(out)["readable"][0][:2] == ["1", "-9"]


def test_failing_certificate_exit_code(tmp_path, capsys):
    path = tmp_path / "c.json"
    run(capsys, "emit", "sl5z", "--output", str(path))
    data = json.loads(path.read_text())
    data["generators"][2] = data["generators"][0]
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "certify", str(path))
    assert code == 1 and json.loads(out)["verdict"] == "fail"


def test_exps_flag(capsys):
    code, out, _ = run(capsys, "build-sl5z", "--exps", "2")
    gen = matrix_from_json(json.loads(out)["generators"][0])
    assert gen[0, 1] == 4
    code, _, err = run(capsys, "build-sl5z", "--exps", "1,2")
    assert code == 2 and "--exps" in err


def test_usage_errors(capsys):
    code, _, err = run(capsys, "build-sl3", "--r1", "c:1/2,s:1/2")
    assert code == 2 and "error" in err
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "build-sl5z", "--n", "1")
    assert code == 2


def test_reduce_and_words(capsys):
    code, out, _ = run(capsys, "reduce", "s0 s1 s0^-1")
    assert code == 0 and out.strip() == "s1"
    code, out, _ = run(capsys, "words", "--max-syllables", "1")
    assert len(out.split("\n")) - 1 == 10
