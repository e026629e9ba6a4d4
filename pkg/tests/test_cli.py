import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from drawdensity import load
from drawdensity.cli import main

from conftest import fixture_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_k4_passes(capsys):
    code, out, _ = run(capsys, "check", fixture_path("k4.drw"), "--class", "quasiplanar", "--simple")
    assert code == 0
    assert "PASS class quasiplanar" in out and "PASS simple" in out


def test_check_bigon_fails_with_witness(capsys):
    code, out, _ = run(capsys, "check", fixture_path("bigon.drw"), "--non-homotopic")
    assert code == 1
    assert "FAIL non-homotopic" in out and "witness" in out


def test_check_broken_input(capsys):
    code, _, err = run(capsys, "check", fixture_path("broken.drw"))
    assert code == 2 and "error" in err


def test_check_parse_error_has_position(tmp_path, capsys):
    bad = tmp_path / "bad.drw"
    bad.write_text("surface sphere\nvertex a\nedge e a\n")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "line 3, column 1" in err


def test_check_rac_needs_geo(capsys):
    code, _, _ = run(capsys, "check", fixture_path("k4.drw"), "--class", "rac", "--k", "0")
    assert code == 2
    code, out, _ = run(capsys, "check", fixture_path("rac1_ell.geo"), "--class", "rac", "--k", "0")
    assert code == 1
    code, out, _ = run(capsys, "check", fixture_path("rac1_ell.geo"), "--class", "rac", "--k", "1")
    assert code == 0


def test_check_json(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, _, _ = run(capsys, "check", fixture_path("k4.drw"), "--simple", "--json", target)
    doc = json.loads(target.read_text())
    assert code == 0 and doc["stats"]["n_edges"] == 6 and doc["classes"]["real_face_level"] == 2


def test_density_k4(capsys):
    code, out, _ = run(capsys, "density", fixture_path("k4.drw"), "--t", "5")
    assert code == 0
    assert "t=5/1: |E|=6 rhs=6/1 residual=0/1" in out


def test_density_t_one(capsys):
    code, out, _ = run(capsys, "density", fixture_path("twoedges.drw"), "--t", "1")
    assert code == 0 and "residual=0/1" in out


def test_density_rational_t(capsys):
    code, out, _ = run(capsys, "density", fixture_path("k4.drw"), "--t", "3/2", "--t", "4")
    assert code == 0 and "t=3/2:" in out and "t=4/1:" in out


def test_density_catalog_flags_tight_bound(capsys):
    code, out, _ = run(capsys, "density", fixture_path("g10.drw"), "--lemmas")
    assert code == 0
    line = next(l for l in out.splitlines() if "BOUND(quasiplanar,non-homotopic)" in l)
    assert "60 vs 60" in line and "(tight)" in line


def test_generate_then_check(tmp_path, capsys):
    target = tmp_path / "g12.drw"
    code, out, _ = run(capsys, "generate", "quasi8", "--n", 12, "-o", target)
    assert code == 0 and "76 edges" in out
    assert len(load(target).paths) == 76
    code, out, _ = run(capsys, "check", target, "--class", "quasiplanar", "--non-homotopic")
    assert code == 0


def test_generate_bad_n(capsys):
    code, _, err = run(capsys, "generate", "quasi65", "--n", 7)
    assert code == 2


def test_export_svg(tmp_path, capsys):
    target = tmp_path / "k4.svg"
    code, _, _ = run(capsys, "export", fixture_path("k4.drw"), "--svg", target)
    assert code == 0
    root = ET.parse(target).getroot()
    ns = "{http://www.w3.org/2000/svg}"
    cells = [p for p in root.iter(f"{ns}polygon") if p.get("class") == "cell"]
    assert len(cells) == 5
    assert len([p for p in root.iter(f"{ns}polyline")]) == 8


def test_export_geo_uses_coordinates(tmp_path, capsys):
    target = tmp_path / "ell.svg"
    assert run(capsys, "export", fixture_path("rac1_ell.geo"), "--svg", target)[0] == 0
    ET.parse(target)


def test_fuzz_small(tmp_path, capsys):
    report = tmp_path / "out.txt"
    code, out, _ = run(capsys, "fuzz", "--seeds", "1..12", "--n", 7, "--report", report)
    assert code == 0
    assert "violations: 0" in report.read_text()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "drawdensity.cli", "density", str(fixture_path("triangle.drw"))],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "residual=0/1" in proc.stdout


@pytest.mark.parametrize("argv", [["check"], ["nope"], ["fuzz", "--seeds", "3"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
