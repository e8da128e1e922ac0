import subprocess
import sys

import pytest

from sukit.cli import run
from sukit.semantics import load_model


@pytest.fixture
def files(tmp_path):
    chain2 = tmp_path / "chain2.kf"
    chain2.write_text("frame chain2\npoints 2\nedge 0 1\nclosure\nend\n")
    fork4 = tmp_path / "fork4.kf"
    fork4.write_text("frame f\npoints 4\nedge 0 1\nedge 0 2\nedge 0 3\nclosure\nend\n")
    bad = tmp_path / "bad.kf"
    bad.write_text("frame b\npoints 2\nedge 0 7\nend\n")
    return tmp_path


def call(capsys, *argv):
    status = run(list(map(str, argv)))
    out, err = capsys.readouterr()
    return status, out, err


def test_su2_on_medvedev(files, capsys):
    m3 = files / "medvedev3.kf"
    assert call(capsys, "medvedev", "--size", 3, "--output", m3)[0] == 0
    status, out, _ = call(capsys, "su2", m3)
    assert (status, out) == (0, "true\n")


def test_validate_refutes_excluded_middle(files, capsys):
    status, out, _ = call(capsys, "validate", files / "chain2.kf", "p | ~p")
    assert status == 1
    assert out == "false\nval p = {1}\nrefuted at {0}\n"
    assert call(capsys, "validate", files / "chain2.kf", "~p | ~~p")[:2] == (0, "true\n")


def test_correspondence_enumerate(capsys):
    status, out, _ = call(capsys, "correspondence", "--enumerate", 3)
    assert (status, out) == (0, "29 frames, 29 agree\n")


def test_correspondence_random_report_is_deterministic(capsys):
    a = call(capsys, "correspondence", "--random", 10, "--points", 5, "--seed", 4, "--report")
    b = call(capsys, "correspondence", "--random", 10, "--points", 5, "--seed", 4, "--report")
    assert a == b and a[0] == 0
    lines = a[1].splitlines()
    assert len(lines) == 11 and lines[-1] == "10 frames, 10 agree"
    assert lines[0].startswith("seed4-0 su2=")


def test_su2_and_uni_failures(files, capsys):
    status, out, _ = call(capsys, "su2", files / "fork4.kf")
    assert status == 1 and out.startswith("false\n")
    assert call(capsys, "uni", files / "chain2.kf")[:2] == (0, "true\n")


def test_star_and_product(files, capsys):
    assert call(capsys, "star", "--size", 4)[:2] == (0, "true\n")
    status, out, _ = call(capsys, "product", files / "chain2.kf", files / "chain2.kf")
    assert status == 0 and "points 8" in out and "# pointmap 4 = pair 0 0" in out


def test_prove(capsys):
    status, out, _ = call(capsys, "prove", "p, p -> q |- q")
    assert status == 0 and out.startswith("provable: p, p -> q |- q\n")
    assert call(capsys, "prove", "--quiet", "p | ~p")[:2] == (1, "not provable\n")
    assert call(capsys, "prove", "--logic", "su", "--quiet", "p | ~p")[:2] == (2, "inconclusive\n")
    status, out, _ = call(capsys, "prove", "--logic", "su", "--depth", 0,
                          "(~p -> q | r) -> (~p -> q) | (~p -> r)")
    assert status == 0 and "su instance:" in out


def test_countermodel(files, capsys):
    out_path = files / "cm.km"
    status, _, _ = call(capsys, "countermodel", "--max-points", 2, "--output", out_path, "p | ~p")
    assert status == 1
    _, M = load_model(out_path)
    assert M.frame.size == 2
    status, out, _ = call(capsys, "countermodel", "--max-points", 3, "p -> p")
    assert (status, out) == (2, "no countermodel up to 3 points\n")


def test_dp_witness(files, capsys):
    m = files / "m.km"
    call(capsys, "countermodel", "--max-points", 2, "--output", m, "p | ~p")
    status, _, err = call(capsys, "dp-witness", m, m, "p | ~p", "p | ~p")
    assert status == 3 and "rename-apart" in err
    status, out, _ = call(capsys, "dp-witness", m, m, "p | ~p", "p | ~p", "--rename-apart")
    assert status == 0 and "points 8" in out and "val p_2 3" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["parse", "p & q | r"],
        ["validate", "missing.kf", "p"],
        ["medvedev", "--size", "0"],
        ["correspondence", "--random", "3"],
        ["nonsense"],
        [],
    ],
)
def test_input_errors(capsys, argv):
    status, out, err = call(capsys, *argv)
    assert status == 3
    assert err.startswith("error: ")


def test_malformed_frame(files, capsys):
    status, _, err = call(capsys, "su2", files / "bad.kf")
    assert status == 3 and "line 3" in err


def test_parse_prints_canonical(capsys):
    assert call(capsys, "parse", "(p)->((q))")[:2] == (0, "p -> q\n")


def test_upset_cap_reports_inconclusive(capsys):
    status, out, _ = call(capsys, "--upset-cap", 2, "correspondence", "--enumerate", 2)
    assert status == 2 and out.startswith("inconclusive")


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "sukit.cli", "parse", "~~p"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "~~p\n"


@pytest.mark.slow
def test_verify_lemmas(capsys):
    status, out, _ = call(capsys, "verify-lemmas", "--max-points", 4, "--product-points", 2)
    assert status == 0 and out.rstrip().endswith("all lemma checks pass")
