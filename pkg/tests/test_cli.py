"""Command-line interface: subcommands, formats, config echo, exit codes."""

from __future__ import annotations

import csv
import io
import json
import math

import pytest

from pinstacks.cli import main
from pinstacks.greens import SpectralPoint
from pinstacks.modes import StackGeometry, assemble, dispersion_residual

LIGHT_LINE_BETA = "6.283185307179586"   # 2 pi: order n = -1 on its light line


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def _csv_rows(text):
    data = "\n".join(line for line in text.splitlines()
                     if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(data)))


def _cx(d):
    return complex(d["re"], d["im"])


class TestGreens:
    def test_point_value_json(self, capsys):
        code, out = _run(capsys, ["greens", "--beta", "2.7", "--alpha0", "1.2",
                                  "--x", "0.3", "--y", "0.4", "--no-timestamp"])
        assert code == 0
        payload = json.loads(out)
        assert payload["alpha0"] == 1.2
        v = payload["value"]
        assert math.isfinite(v["re"]) and math.isfinite(v["im"])
        assert "generated" not in payload

    def test_angle_is_given_in_degrees(self, capsys):
        code, out = _run(capsys, ["greens", "--beta", "2.0", "--theta", "30",
                                  "--no-timestamp"])
        assert code == 0
        assert json.loads(out)["alpha0"] == pytest.approx(1.0, rel=1e-12)

    def test_convergence_estimate_bounds_the_truncation_error(self, capsys):
        base = ["greens", "--beta", "2.7", "--alpha0", "1.2", "--x", "0.37",
                "--no-timestamp"]
        _, out = _run(capsys, base + ["--n", "100"])
        coarse = json.loads(out)
        _, out = _run(capsys, base + ["--n", "1000"])
        fine = json.loads(out)
        diff = abs(complex(coarse["value"]["re"], coarse["value"]["im"])
                   - complex(fine["value"]["re"], fine["value"]["im"]))
        assert diff <= coarse["convergence_estimate"]

    def test_light_line_exit_code(self, capsys):
        code = main(["greens", "--beta", LIGHT_LINE_BETA, "--alpha0", "0.0"])
        err = capsys.readouterr().err
        assert code == 2
        assert "LightLine" in err

    def test_timestamp_header_present_by_default(self, capsys):
        _, out = _run(capsys, ["greens", "--beta", "2.7", "--alpha0", "1.2"])
        assert "generated" in json.loads(out)


def test_matrix_reports_consistent_eigensystem(capsys):
    code, out = _run(capsys, ["matrix", "--beta", "3.61747", "--theta", "30",
                              "--eta", "1.0", "--xi", "0.252", "--no-timestamp"])
    assert code == 0
    payload = json.loads(out)
    m11 = _cx(payload["entries"]["m11"])
    trace = sum(_cx(payload["eigenvalues"][k])
                for k in ("lambda_1", "lambda_minus", "lambda_plus"))
    assert abs(trace - 3.0 * m11) <= 1e-10 * abs(3.0 * m11)
    assert payload["dispersion"]["odd"] < 1e-5   # near the merged resonance
    assert len(payload["eigenvectors"]["v_odd"]) == 3


class TestDispersionGrid:
    def test_single_cell_matches_direct_evaluation(self, capsys):
        code, out = _run(capsys, [
            "dispersion-grid", "--alpha0-min", "2.1", "--alpha0-max", "2.1",
            "--alpha0-steps", "1", "--beta-min", "3.6", "--beta-max", "3.6",
            "--beta-steps", "1", "--eta", "1.0", "--no-timestamp"])
        assert code == 0
        rows = _csv_rows(out)
        assert len(rows) == 1 and rows[0]["status"] == "ok"
        direct = dispersion_residual(assemble(SpectralPoint(2.1, 3.6),
                                              StackGeometry(eta=1.0, xi=0.0)))
        assert float(rows[0]["log10_odd"]) == pytest.approx(
            direct.log10_odd, rel=1e-12)
        assert float(rows[0]["log10_even"]) == pytest.approx(
            direct.log10_even, rel=1e-12)

    def test_crossing_trailer(self, capsys):
        code, out = _run(capsys, [
            "dispersion-grid", "--alpha0-min", "1.55", "--alpha0-max", "1.75",
            "--alpha0-steps", "9", "--beta-min", "3.55", "--beta-max", "3.65",
            "--beta-steps", "9", "--eta", "1.0", "--crossing",
            "--no-timestamp"])
        assert code == 0
        trailer = out.splitlines()[-1]
        assert trailer.startswith("# crossing alpha0=")
        fields = dict(part.split("=") for part in trailer[2:].split()[1:])
        assert 1.55 < float(fields["alpha0"]) < 1.75
        assert 3.55 < float(fields["beta"]) < 3.65


class TestSpectrum:
    def test_empty_stack_rows(self, capsys):
        code, out = _run(capsys, [
            "spectrum", "--stack", "empty", "--alpha0", "0.5",
            "--beta-min", "2.0", "--beta-max", "2.1", "--resolution", "3",
            "--no-timestamp"])
        assert code == 0
        rows = _csv_rows(out)
        assert len(rows) == 3
        for row in rows:
            assert float(row["T"]) == 1.0
            assert row["status"] == "ok"

    def test_angle_rederives_alpha0_along_the_scan(self, capsys):
        _, out = _run(capsys, [
            "spectrum", "--stack", "single", "--theta", "30",
            "--beta-min", "3.0", "--beta-max", "3.2", "--resolution", "3",
            "--no-timestamp"])
        for row in _csv_rows(out):
            beta = float(row["beta"])
            assert float(row["alpha0"]) == pytest.approx(
                beta * 0.5, rel=1e-12)

    def test_per_order_columns(self, capsys):
        _, out = _run(capsys, [
            "spectrum", "--stack", "single", "--alpha0", "0.5",
            "--beta-min", "3.0", "--beta-max", "3.1", "--resolution", "3",
            "--per-order", "--no-timestamp"])
        rows = _csv_rows(out)
        assert "R_0" in rows[0] and "T_0" in rows[0]
        for row in rows:
            assert float(row["R_0"]) == pytest.approx(float(row["R"]),
                                                      rel=1e-12)

    def test_stack_without_separation_fails_cleanly(self, capsys):
        code = main(["spectrum", "--stack", "pair", "--alpha0", "0.5",
                     "--beta-min", "3.0", "--beta-max", "3.1"])
        err = capsys.readouterr().err
        assert code == 2
        assert "--eta" in err

    def test_incidence_flags_are_exclusive(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["spectrum", "--stack", "single", "--alpha0", "0.5",
                  "--theta", "30", "--beta-min", "3.0", "--beta-max", "3.1"])
        assert exc.value.code == 2

    def test_deterministic_output_without_timestamp(self, capsys):
        argv = ["spectrum", "--stack", "empty", "--alpha0", "0.5",
                "--beta-min", "2.0", "--beta-max", "2.1", "--resolution", "3",
                "--no-timestamp"]
        _, first = _run(capsys, argv)
        _, second = _run(capsys, argv)
        assert first == second

    def test_timestamp_header_line(self, capsys):
        argv = ["spectrum", "--stack", "empty", "--alpha0", "0.5",
                "--beta-min", "2.0", "--beta-max", "2.1", "--resolution", "3"]
        _, out = _run(capsys, argv)
        assert out.splitlines()[0].startswith("# generated ")


class TestConfigEcho:
    def test_out_writes_data_and_config(self, tmp_path, capsys):
        out_file = tmp_path / "scan.csv"
        code, _ = _run(capsys, [
            "spectrum", "--stack", "single", "--alpha0", "0.5",
            "--beta-min", "3.0", "--beta-max", "3.1", "--resolution", "3",
            "--no-timestamp", "--out", str(out_file)])
        assert code == 0
        echo_file = tmp_path / "scan.csv.config.json"
        assert out_file.exists() and echo_file.exists()
        echo = json.loads(echo_file.read_text())
        assert echo["subcommand"] == "spectrum"
        assert echo["args"]["alpha0"] == 0.5
        assert "func" not in echo["args"]

    def test_config_rerun_is_byte_identical(self, tmp_path, capsys):
        out_file = tmp_path / "scan.csv"
        _run(capsys, [
            "spectrum", "--stack", "single", "--alpha0", "0.5",
            "--beta-min", "3.0", "--beta-max", "3.1", "--resolution", "3",
            "--no-timestamp", "--out", str(out_file)])
        snapshot = out_file.read_bytes()
        out_file.unlink()
        code, _ = _run(capsys, ["--config", str(out_file) + ".config.json"])
        assert code == 0
        assert out_file.read_bytes() == snapshot

    def test_rejects_non_echo_json(self, tmp_path, capsys):
        bogus = tmp_path / "notes.json"
        bogus.write_text(json.dumps({"hello": 1}))
        with pytest.raises(SystemExit) as exc:
            main(["--config", str(bogus)])
        assert exc.value.code == 2


class TestSteer:
    def test_normal_incidence_flags_edit_unsupported(self, capsys):
        code, out = _run(capsys, ["steer", "--theta", "0", "--with-edit",
                                  "--no-timestamp"])
        assert code == 0
        row, = _csv_rows(out)
        assert row["error"] == "EDIT unsupported at normal incidence"
        assert row["xi_edit"] == ""
        assert float(row["beta_g"]) == pytest.approx(4.456001, abs=1e-4)

    def test_requires_angles(self, capsys):
        code = main(["steer"])
        err = capsys.readouterr().err
        assert code == 2
        assert "--theta" in err or "--table1" in err

    def test_table_format_header(self, capsys):
        code, out = _run(capsys, ["steer", "--theta", "0", "--no-modes",
                                  "--format", "table", "--no-timestamp"])
        assert code == 0
        header = out.splitlines()[0].split()
        assert header[:5] == ["theta_deg", "beta_g", "alpha0_g", "eta_star",
                              "m_eff"]
        assert "error" in header


def test_subcommand_required(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
