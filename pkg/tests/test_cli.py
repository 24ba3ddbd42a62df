import io
import json
import subprocess
import sys

from polarbrauer.cli import dotted_counts, main, run_suite


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rank_ptl(capsys):
    assert run(capsys, "rank", "--ptl", "2", "2") == (0, "6\n", "")
    code, out, _ = run(capsys, "--json", "rank", "--ptl", "0", "8")
    assert json.loads(out) == {"r": 0, "s": 8, "ptl_rank": 70}


def test_rank_dotted(capsys):
    code, out, _ = run(capsys, "rank", "2", "2", "--max-dots", "2", "--json")
    assert json.loads(out)["dotted_by_degree"] == [3, 6, 9]
    assert dotted_counts(0, 0, 2) == [1, 0, 0]
    assert run(capsys, "rank", "1", "2")[1] == "0\n"


def test_normalize(capsys):
    code, out, _ = run(capsys, "--json", "normalize", "E1@2 * E1@2", "--delta", "3")
    term, = json.loads(out)["terms"]
    assert code == 0 and term["coeff"] == "3" and term["diagram"]["pairs"] == [[1, 2], [3, 4]]
    code, out, _ = run(capsys, "normalize", "D@1 * D@1")
    assert out.splitlines()[1].endswith('dots {"1-2": 2}')


def test_normalize_zero(capsys):
    code, out, _ = run(capsys, "normalize", "E1@2 * E1@2", "--delta", "0")
    assert out.splitlines() == ["2 -> 2", "  0"]


def test_errors(capsys):
    code, _, err = run(capsys, "normalize", "S1@2 * D@1")
    assert code == 2 and "column" in err
    code, _, err = run(capsys, "normalize", "S1@2 +")
    assert code == 2
    code, _, err = run(capsys, "normalize", "--budget", "1", "S1@3 * S2@3 * S1@3 * D@3 * S1@3")
    assert code == 3 and "budget" in err


def test_eval(capsys):
    code, out, _ = run(capsys, "--json", "eval", "--rep", "3,0", "S1@2")
    got = json.loads(out)
    assert (got["rows"], got["cols"]) == (27, 27)  # pole module V x V x V
    assert got["matrix"][1][3] == "1"
    code, out, _ = run(capsys, "eval", "--json", "--rep", "0,2", "--verma", "1/2", "--cutoff", "4", "D@1")
    got = json.loads(out)
    assert (got["rows"], got["cols"]) == (10, 6)
    assert got["matrix"][0][0] == "-1/2"


def test_run_suite_text_and_json():
    buf = io.StringIO()
    assert run_suite("coupon", out=buf) == 0
    assert all(line.startswith("PASS ") for line in buf.getvalue().splitlines())
    buf = io.StringIO()
    assert run_suite("brauer", as_json=True, out=buf) == 0
    assert all(json.loads(line)["ok"] for line in buf.getvalue().splitlines())


def test_ptl_suite_lines():
    buf = io.StringIO()
    assert run_suite("ptl", out=buf) == 0
    text = buf.getvalue()
    assert "PASS ptl: rank(r, 8 - r) = 70" in text


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polarbrauer.cli", "rank", "--ptl", "1", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "2\n"
