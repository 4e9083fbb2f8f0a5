import json
import subprocess
import sys

import pytest

from charlat import cli
from charlat.families import abelian_table, c4c4_c3_group, dihedral_table, direct_product_table
from charlat.groups import dixon_table


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table_dihedral(capsys, tmp_path):
    path = tmp_path / "d16.json"
    code, out, _ = run(capsys, "table", "dihedral:8", "--json", str(path))
    assert code == 0 and "7 classes" in out
    doc = json.loads(path.read_text())
    assert doc["group_order"] == 16 and len(doc["values"]) == 7


def test_table_from_perm_file(capsys, tmp_path):
    f = tmp_path / "s3.json"
    f.write_text(json.dumps({"degree": 3, "generators": ["(0,1)", [1, 2, 0]], "name": "S3"}))
    code, out, _ = run(capsys, "table", f"perm:{f}")
    assert code == 0 and "3 classes" in out
    g = tmp_path / "s3b.json"
    g.write_text(json.dumps({"degree": 3, "base": 1, "generators": ["(1,2)", "(1,2,3)"]}))
    assert run(capsys, "table", f"perm:{g}")[0] == 0


def test_invalid_table_document(capsys, tmp_path):
    doc = cli.table_to_document(dihedral_table(4))
    doc["values"][4][1] = "3"
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(doc))
    code, _, err = run(capsys, "table", f"json:{f}")
    assert code == 2 and "validation" in err
    doc["values"][0][0] = "E(4"
    f.write_text(json.dumps(doc))
    code, _, err = run(capsys, "table", f"json:{f}")
    assert code == 2 and "values[0][0]" in err


@pytest.mark.parametrize("T", [dihedral_table(8), abelian_table([2, 3]), dixon_table(c4c4_c3_group()),
                               direct_product_table(dihedral_table(5), abelian_table([3]))])
def test_document_round_trip(T):
    doc = cli.table_to_document(T)
    back = cli.document_to_table(json.loads(json.dumps(doc)))
    assert back.values == T.values
    assert back.classes.sizes == T.classes.sizes
    assert back.classes.power_maps == T.classes.power_maps
    assert cli.table_to_document(back) == doc


@pytest.mark.parametrize("source,expected", [("family:c4c4xc3", "C_2^2"), ("family:extraspecial:3:1", "C_3^4"),
                                             ("family:abelian:2,4", "trivial")])
def test_quotient_examples(capsys, source, expected):
    code, out, _ = run(capsys, "quotient", source)
    lines = out.splitlines()
    assert code == 0 and lines[0] == expected
    doc = json.loads(lines[1])
    assert doc["theorem_A"] and doc["structure"] == expected


def test_quotient_deterministic(capsys):
    a = run(capsys, "quotient", "family:c15xd16")
    b = run(capsys, "quotient", "family:c15xd16")
    assert a == b and a[1].startswith("C_120^2 x C_60^2 x C_12^4 x C_4^4 x C_2^14")


def test_an_rows(capsys):
    assert run(capsys, "an", "12")[:2] == (0, "3^4\n")
    assert run(capsys, "an", "11")[:2] == (0, "1\n")
    code, out, _ = run(capsys, "an", "15", "--paper-table")
    assert code == 0
    assert out.splitlines()[1:] == ["<= 11     1", "12,13,14  3^4", "15        3^4 x 15^4 x 45^4"]


def test_an_regression_mismatch(capsys, monkeypatch):
    from charlat import multiquad

    rows = dict(multiquad._reference_rows())
    rows[12] = [3, 3]
    monkeypatch.setattr(multiquad, "_reference_rows", lambda: rows)
    code, _, err = run(capsys, "an", "12")
    assert code == 1 and "mismatch" in err


def test_an_limits(capsys):
    assert run(capsys, "an", "1")[0] == 2
    assert run(capsys, "an", "40")[0] == 2
    code, _, err = run(capsys, "an", "20", "--hnf-ceiling", "64")
    assert code == 3 and "ceiling" in err


def test_input_errors(capsys):
    assert run(capsys, "quotient", "family:nonsense")[0] == 2
    assert run(capsys, "quotient", "dihedral:x")[0] == 2
    assert run(capsys, "table", "json:/nonexistent.json")[0] == 2
    assert run(capsys, "table", "family:extraspecial:3:1")[0] == 2


def test_resource_ceiling(capsys, monkeypatch):
    monkeypatch.setenv("CHARLAT_ENUM_BOUND", "100")
    code, _, err = run(capsys, "table", "psl33")
    assert code == 3


def test_scan_qg_on_s3(capsys, tmp_path):
    corpus = tmp_path / "corpus.json"
    corpus.write_text(json.dumps({"entries": ["symmetric:3"]}))
    code, out, _ = run(capsys, "scan", "--corpus", str(corpus), "--check", "qg")
    entry = json.loads(out.splitlines()[0])
    assert code == 0 and entry["qg"] == {"classes": 3, "failed": []} and "navarro" not in entry


def test_scan_isolates_bad_entry(capsys, tmp_path):
    doc = cli.table_to_document(dihedral_table(4))
    doc["values"][4][1] = "3"
    (tmp_path / "bad.json").write_text(json.dumps(doc))
    corpus = tmp_path / "corpus.json"
    corpus.write_text(json.dumps(["symmetric:3", "json:bad.json", "abelian:2,2"]))
    code, out, _ = run(capsys, "scan", "--corpus", str(corpus), "--threads", "2")
    lines = [json.loads(l) for l in out.splitlines()]
    assert code == 0
    assert "error" in lines[1] and "error" not in lines[0] and "error" not in lines[2]
    assert lines[0]["qg"]["failed"] == [] and lines[0]["navarro"]["failed"] == []
    assert lines[-1]["summary"] == {"checks": ["A", "C", "qg", "navarro"], "conjecture_C_counterexamples": 0,
                                    "entries": 3, "errors": 1, "violations": 0}


def test_scan_flags_violation():
    entry = {"theorem_A": False}
    assert cli.scan_violations(entry) == ["A"]
    assert cli.scan_violations({"conjecture_C": False, "nilpotent": True}) == ["B"]
    assert cli.scan_violations({"conjecture_C": False, "nilpotent": False}) == []


def test_entry_point():
    out = subprocess.run([sys.executable, "-m", "charlat.cli", "quotient", "family:c4c4xc3"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.splitlines()[0] == "C_2^2"
