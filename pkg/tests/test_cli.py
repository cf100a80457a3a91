import json

import pytest

from orbitspace.cli import main
from orbitspace.pmatrix import parse_p_matrix
from orbitspace.strata import read_section_csv


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_pmatrix_build_i2_3(capsys):
    code, out, _ = run(capsys, "pmatrix", "build", "--builtin", "I2", "--m", "3")
    assert code == 0
    matrix = parse_p_matrix(out)
    assert str(matrix.entries[0][0]) == "9*p2^2"
    assert matrix.degrees == (3, 2)


def test_pmatrix_build_deterministic(capsys):
    _, first, _ = run(capsys, "pmatrix", "build", "--builtin", "B3")
    _, second, _ = run(capsys, "pmatrix", "build", "--builtin", "B3")
    assert first == second


def test_pmatrix_build_json(capsys):
    code, out, _ = run(capsys, "pmatrix", "build", "--builtin", "I2", "--m", "2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["degrees"] == [2, 2]
    assert payload["entries"]["P[1][2]"] == "4*p1"


def test_pmatrix_ibt(capsys):
    code, out, _ = run(
        capsys, "pmatrix", "ibt", "--builtin", "I2", "--m", "2", "--map", "p1: p1 + 3*p2"
    )
    assert code == 0
    matrix = parse_p_matrix(out)
    assert str(matrix.entries[0][1]) == "4*p1"  # last-column law survives


def test_boundary_residual(capsys):
    code, out, _ = run(
        capsys, "boundary", "residual", "--builtin", "I2", "--m", "3", "--poly", "p2^3 - p1^2"
    )
    assert code == 0
    assert out.splitlines() == ["r[1]: 0", "r[2]: 12*p2^3 - 12*p1^2"]


def test_boundary_find_active_weight(capsys):
    code, out, _ = run(
        capsys, "boundary", "find-active", "--builtin", "I2", "--m", "3", "--weight", "6"
    )
    assert code == 0
    assert out == "w=6 A[1]: p2^3 - p1^2\n"


def test_boundary_find_active_scan(capsys):
    code, out, _ = run(capsys, "boundary", "find-active", "--builtin", "I2", "--m", "3", "--scan")
    assert code == 0
    assert "w=6 A[1]: p2^3 - p1^2" in out.splitlines()


def test_boundary_split_b3(capsys):
    code, out, _ = run(capsys, "boundary", "split", "--builtin", "B3", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["wA"] == 18
    assert payload["activity"] in ("StrictlyActive", "ActiveWithLambda")


def test_boundary_split_text_round_trips(capsys):
    from orbitspace.basisreg import builtin_basis
    from orbitspace.pmatrix import build_p_matrix
    from orbitspace.polyring import parse_poly

    code, out, _ = run(capsys, "boundary", "split", "--builtin", "I2", "--m", "3")
    assert code == 0
    fields = dict(line.split(": ", 1) for line in out.splitlines())
    matrix = build_p_matrix(builtin_basis("I2", 3))
    a_poly = parse_poly(fields["A"], matrix.space)
    b_poly = parse_poly(fields["B"], matrix.space)
    assert a_poly * b_poly == matrix.det()
    assert int(fields["wA"]) == a_poly.weight()


def test_boundary_initial_conditions(capsys):
    code, out, _ = run(capsys, "boundary", "initial-conditions", "--builtin", "I2", "--m", "3")
    assert code == 0
    lines = dict(line.split(": ", 1) for line in out.splitlines())
    assert lines["positive_at_p0"] == "true"
    assert lines["hessian_diagonal_at_p0"] == "-2 6"
    assert lines["p_diagonal_at_p0"] == "9 4"


def test_strata_classify(capsys):
    code, out, _ = run(
        capsys, "strata", "classify", "--builtin", "I2", "--m", "2", "--point", "1,1"
    )
    assert code == 0
    assert out == "status: InS\nrank: 1\n"


def test_strata_section_csv_and_summary(tmp_path, capsys):
    out_path = tmp_path / "section.csv"
    code, out, _ = run(
        capsys,
        "strata", "section", "--builtin", "I2", "--m", "3",
        "--box", "-2:2", "--resolution", "401", "--out", str(out_path),
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["principal_components"] == 1
    assert summary["in_s_bounds"] == [["-1", "1"]]
    grid = read_section_csv(out_path.read_text())
    assert grid.resolution == 401
    boundary_nodes = [i for i in grid.indices() if grid.label(i).rank == 1]
    assert [grid.node(i)[0] for i in boundary_nodes] == [-1, 1]


def test_strata_section_plot(tmp_path, capsys):
    plot_path = tmp_path / "section.png"
    code, _, _ = run(
        capsys,
        "strata", "section", "--builtin", "I2", "--m", "3",
        "--box", "-2:2", "--resolution", "41",
        "--out", str(tmp_path / "s.csv"), "--plot", str(plot_path),
    )
    assert code == 0
    assert plot_path.exists() and plot_path.stat().st_size > 0


def test_strata_section_threads_identical_output(tmp_path, capsys):
    serial = tmp_path / "serial.csv"
    threaded = tmp_path / "threaded.csv"
    run(
        capsys,
        "strata", "section", "--builtin", "I2", "--m", "3",
        "--box", "-2:2", "--resolution", "81", "--out", str(serial),
    )
    run(
        capsys,
        "strata", "section", "--builtin", "I2", "--m", "3",
        "--box", "-2:2", "--resolution", "81", "--out", str(threaded),
        "--threads", "4",
    )
    assert serial.read_bytes() == threaded.read_bytes()


def test_catalog_degrees(capsys):
    code, out, _ = run(capsys, "catalog", "degrees", "--label", "A8", "--params", "3,2")
    assert code == 0
    assert out == "label: A8\ndegrees: 4 3 2 2\nwA: 14\n"


def test_catalog_match_f4_row(capsys):
    code, out, _ = run(capsys, "catalog", "match", "--q", "4", "--degrees", "12,8,6,2")
    assert code == 0
    assert any("E4" in line and "group F4" in line for line in out.splitlines())


def test_search_q2(capsys):
    code, out, _ = run(capsys, "search", "q2", "--d1", "4")
    assert code == 0
    assert "P[1][1]: 16*p2^3" in out
    assert "# A: p2^4 - p1^2" in out
    data_lines = "\n".join(l for l in out.splitlines() if not l.startswith("#"))
    matrix = parse_p_matrix(data_lines)
    assert matrix.degrees == (4, 2)


def test_basis_verify_builtin(capsys):
    code, out, _ = run(capsys, "basis", "verify", "--builtin", "B3")
    assert code == 0
    assert out == "ok: all checks passed\n"


def test_basis_verify_file_reports_violations(tmp_path, capsys):
    bad = tmp_path / "bad.basis"
    bad.write_text(
        "name: bad\nn: 2\nq: 2\nvars: x y\ndegrees: 3 2\n"
        "p[1]: x^3 - 3*x*y^2\np[2]: x^2 + 2*y^2\n"
    )
    code, out, err = run(capsys, "basis", "verify", "--file", str(bad))
    assert code == 1
    assert "LastInvariantNotNorm" in out
    assert "LastInvariantNotNorm" in err


def test_basis_file_source_for_pmatrix(tmp_path, capsys):
    from orbitspace.basisreg import builtin_basis, format_basis

    path = tmp_path / "b3.basis"
    path.write_text(format_basis(builtin_basis("B3")))
    code, out, _ = run(capsys, "pmatrix", "build", "--file", str(path))
    assert code == 0
    _, builtin_out, _ = run(capsys, "pmatrix", "build", "--builtin", "B3")
    assert out == builtin_out


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "pmatrix", "build", "--builtin", "I2", "--m", "1")
    assert code == 1
    assert err.startswith("BadParameter")


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["pmatrix", "build"])
    assert info.value.code == 2
