import subprocess
import sys

import pytest

from kron_tan import deck_path
from kron_tan.cli import main


def test_tree_report(capsys):
    assert main(["tree", str(deck_path("figure1"))]) == 0
    out = capsys.readouterr().out
    assert "M = B - N + R = 5 - 3 + 1 = 3" in out
    assert "tree edges: 1 3" in out
    assert "closing edges: 2 4 5" in out
    assert "C = [[Q, L], [0, I]]" in out


def test_check(capsys):
    assert main(["check", str(deck_path("transformer"))]) == 0
    assert ": ok" in capsys.readouterr().out


def test_check_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.net"
    bad.write_text("vertex 1\nbogus\n")
    assert main(["check", str(bad)]) == 1
    assert "line 2: unknown stanza" in capsys.readouterr().err


def test_solve_with_oracle_and_svg(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    out, svg = tmp_path / "t.csv", tmp_path / "t.svg"
    args = ["solve", "--netlist", str(deck_path("transformer")), "--fmin", "100", "--fmax", "1e5",
            "--points", "30", "--log", "--out", str(out), "--svg", str(svg), "--oracle"]
    assert main(args) == 0
    text = capsys.readouterr().out
    assert "meshes 2:[+2 +1] 4:[+4 +3]" in text
    dev = float(text.split("oracle max relative deviation:")[1])
    assert dev <= 1e-9
    assert len(out.read_text().splitlines()) == 31
    assert svg.exists()


def test_solve_workers_byte_identical(tmp_path):
    base = ["solve", "--netlist", str(deck_path("cavity_aperture")), "--fmin", "1e8", "--fmax", "1e9", "--points", "50"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--out", str(b), "--workers", "4"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_script_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "kron_tan.cli", "tree", str(deck_path("antenna_wall"))],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "10:[+10 -9]" in res.stdout


def test_missing_file(capsys):
    assert main(["check", "/nonexistent/deck.net"]) == 1
    assert "deck.net" in capsys.readouterr().err
