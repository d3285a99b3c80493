"""The batch driver: determinism, exit codes, and report content."""

from __future__ import annotations

import subprocess
import sys

from jetpairs.cli import main
from jetpairs.fields import prime_field
from jetpairs.pairio import format_pair, parse_matpoly, parse_pair
from jetpairs.sampling import derive_rng, rand_u_pair

F = prime_field(32003)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_red_table_reports_first_reducible_29(capsys):
    code, out = _run(capsys, ["red", "table", "--k", "1", "--n-max", "60"])
    assert code == 0
    assert "first-reducible n=29" in out
    assert "n=  29  witness=(a=8, b=5)  reducible" in out


def test_red_bounds_headline_values(capsys):
    code, out = _run(capsys, ["red", "bounds", "--a", "8", "--b", "5", "--k", "1"])
    assert code == 0
    assert "dimV_bound=1740" in out and "expected_dim=1740" in out
    assert "inequality=0" in out and "reducible=True" in out


def test_lift_demo_non_liftable_exits_zero(capsys):
    code, out = _run(capsys, ["lift", "--demo", "non-liftable"])
    assert code == 0
    assert "infeasible as predicted" in out


def test_verify_equivalence_small_sweep(capsys):
    code, out = _run(capsys, ["verify", "equivalence", "--n", "2", "--k", "1", "--samples", "6"])
    assert code == 0
    assert "failures=0" in out


def test_verify_coeff_formula_small_sweep(capsys):
    code, out = _run(capsys, ["verify", "coeff-formula", "--n", "2", "--k", "1", "--samples", "4"])
    assert code == 0
    assert "failures=0" in out


def test_output_bytes_deterministic(capsys):
    argv = ["irr3", "certify", "--k", "1", "--samples", "5", "--seed", "7"]
    code1, out1 = _run(capsys, argv)
    code2, out2 = _run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_structured_records_emitted(capsys):
    code, out = _run(
        capsys,
        ["red", "bounds", "--a", "1", "--b", "0", "--k", "1", "--structured"],
    )
    assert code == 0
    assert any(line.startswith("#rec red-bounds") for line in out.splitlines())


def test_jetideal_export_streams_text(capsys):
    code, out = _run(capsys, ["jetideal", "export", "--n", "2", "--k", "0"])
    assert code == 0
    assert out.startswith("jetideal n=2 k=0 char=32003")


def test_commutant_with_input_file(tmp_path, capsys):
    rng = derive_rng(31, "clifile")
    a, _ = rand_u_pair(F, 2, 1, rng)
    path = tmp_path / "a.matpoly"
    from jetpairs.pairio import format_matpoly

    path.write_text(format_matpoly(a))
    code, out = _run(capsys, ["commutant", "--input", str(path)])
    assert code == 0
    assert "dim=4" in out  # n(k+1) = 4 for a 1-regular constant


def test_irr3_certify_with_input_file(tmp_path, capsys):
    rng = derive_rng(31, "clipair")
    a, b = rand_u_pair(F, 3, 1, rng)
    path = tmp_path / "pair.txt"
    path.write_text(format_pair(a, b))
    code, out = _run(capsys, ["irr3", "certify", "--input", str(path)])
    assert code == 0
    assert "terminal in_U" in out and "replay ok" in out


def test_bad_input_file_exit_code(tmp_path, capsys):
    path = tmp_path / "junk.txt"
    path.write_text("not a matpoly at all\n")
    code, _ = _run(capsys, ["commutant", "--input", str(path)])
    assert code == 2


def test_pairio_roundtrip():
    rng = derive_rng(31, "pairio")
    a, b = rand_u_pair(F, 3, 2, rng)
    text = format_pair(a, b)
    a2, b2 = parse_pair(text)
    assert (a2, b2) == (a, b)
    from jetpairs.pairio import format_matpoly

    assert parse_matpoly(format_matpoly(a)) == a


def test_module_entrypoint_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "jetpairs.cli", "red", "bounds", "--a", "8", "--b", "5", "--k", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "reducible=True" in proc.stdout
