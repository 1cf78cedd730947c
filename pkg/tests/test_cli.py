import io
import json

import pytest

from l3col.cli import main, run_bench
from l3col.branch import BranchConfig
from l3col.fileio import ParseError, emit_instance, parse_certificate, parse_instance
from l3col.gen import MIXED_LISTS, gen_diameter3, gen_lists
from l3col.instance import Instance
from conftest import complete, cycle


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


@pytest.fixture
def planted_file(tmp_path):
    code, text = run(["gen", "--family", "planted", "--n", "12", "--seed", "3", "--profile", "mixed"])
    assert code == 0
    p = tmp_path / "inst.l3c"
    p.write_text(text)
    return p


def test_round_trip():
    inst = gen_lists(gen_diameter3(11, 4), MIXED_LISTS, 4)
    assert parse_instance(emit_instance(inst, ["hello"])) == inst


@pytest.mark.parametrize("text,line,col", [
    ("e 1 2\n", 1, 1),
    ("p l3c 2 1\ne 1 3\n", 2, 5),
    ("p l3c 2 2\ne 1 2\ne 2 1\n", 3, 1),
    ("p l3c 2 1\ne 1 2\nl 1 4\n", 3, 5),
    ("p l3c 2 1\ne 1 2\nl 1 1\nl 1 2\n", 4, 1),
    ("p l3c 3 2\ne 1 2\n", 1, 1),
    ("p l3c 2 0\nx 1\n", 2, 1),
])
def test_parse_errors_locate_problem(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_instance(text)
    assert (exc.value.line, exc.value.column) == (line, col)


def test_solve_and_verify(planted_file, tmp_path):
    code, out = run(["solve", str(planted_file), "--verify-certificate"])
    assert code == 0 and out.startswith("s YES")
    cert = tmp_path / "cert"
    cert.write_text(out)
    assert run(["verify", str(planted_file), str(cert)])[0] == 0
    answer, col = parse_certificate(out)
    assert answer == "YES" and len(col) == 12


def test_verify_rejects_bad_certificate(planted_file, tmp_path):
    cert = tmp_path / "cert"
    cert.write_text("s YES\n" + "".join(f"v {i} 1\n" for i in range(1, 13)))
    code, out = run(["verify", str(planted_file), str(cert)])
    assert code == 1 and "INVALID" in out


def test_exit_codes(tmp_path):
    k4 = tmp_path / "k4.l3c"
    k4.write_text(emit_instance(Instance(complete(4))))
    assert run(["solve", str(k4)])[0] == 1
    assert run(["oracle", str(k4)])[0] == 1
    assert run(["oracle", str(k4), "--budget", "2"])[0] == 3
    bad = tmp_path / "bad.l3c"
    bad.write_text("p l3c 2 1\n")
    assert run(["solve", str(bad)])[0] == 2
    assert run(["frobnicate"])[0] == 2


def test_strict_diameter_error_mentions_measurement(tmp_path, capsys):
    p = tmp_path / "c9.l3c"
    p.write_text(emit_instance(Instance(cycle(9))))
    code, _ = run(["solve", str(p)])
    assert code == 2
    assert "4" in capsys.readouterr().err
    assert run(["solve", str(p), "--diameter-policy", "fallback"])[0] == 0


def test_reports_are_byte_identical(planted_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["solve", str(planted_file), "--stats-out", str(a), "--seed", "5"])
    run(["solve", str(planted_file), "--stats-out", str(b), "--seed", "5"])
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["answer"] == "YES" and rep["invariants"]["total_violations"] == 0


def test_gen_writes_files(tmp_path):
    code, _ = run(["gen", "--family", "random", "--n", "8", "--count", "3", "--out-dir", str(tmp_path)])
    assert code == 0 and len(list(tmp_path.glob("*.l3c"))) == 3


def test_lemma_lab_command(tmp_path):
    out = tmp_path / "lab.json"
    code, table = run(["lemma-lab", "--mu", "30", "--trials", "20", "--graphs", "1", "--out", str(out)])
    assert code == 0 and table.startswith("mu\t")
    assert json.loads(out.read_text())["structural_violations"] == 0


def test_bench_small():
    rep = run_bench([12, 16], 2, "planted", BranchConfig())
    assert len(rep["rows"]) == 4
    assert set(rep["mean_total_nodes"]) == {"12", "16"}
