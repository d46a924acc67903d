"""Tests for the sweeps, transition scan, verification and CLI."""

import csv
import math
import shutil
import tempfile
from enum import Enum
from pathlib import Path

import numpy as np
import pytest

from src.config.schema import Fig12Config, Fig3Config, GridSpec, TransitionConfig, VerifyConfig, VerifyPoint
from src.experiments import (
    SweepRow,
    format_value,
    main,
    run_fig12_sweep,
    run_fig3_sweep,
    run_transition_scan,
    run_verify,
    write_csv,
)
from src.experiments.cli import EXIT_CONFIG, EXIT_OK, EXIT_VERIFY, build_registry
from src.experiments.commands import CommandCategory, CommandDefinition, CommandRegistry
from src.experiments.transition import SCAN_COLUMNS, anisotropic_integrals, find_boundary, relative_discriminant


@pytest.fixture
def workdir():
    """Create a temporary output directory."""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir)


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


class TestCsvWriter:
    """Test value formatting and CSV layout."""

    def test_format_float(self):
        assert format_value(0.1) == "0.10000000000000001"
        assert format_value(np.float64(2.0)) == "2"
        assert format_value(float("nan")) == "nan"

    def test_format_other(self):
        class Color(Enum):
            RED = "red"

        assert format_value(None) == ""
        assert format_value(True) == "true"
        assert format_value(Color.RED) == "red"
        assert format_value(7) == "7"

    def test_write_csv(self, workdir):
        path = write_csv(workdir / "sub" / "out.csv", ["a", "b"], [(1, 0.5), (2, None)])
        assert path.read_bytes() == b"a,b\n1,0.5\n2,\n"

    def test_row_length_mismatch(self, workdir):
        with pytest.raises(ValueError, match="header has 2"):
            write_csv(workdir / "bad.csv", ["a", "b"], [(1,)])


class TestFig12Sweep:
    """Test the exact white-noise sweep."""

    def small_config(self, family="planar_ring"):
        return Fig12Config(family=family, B0_tau=[1.0], b0_over_B0=GridSpec(values=[0.5, 1.0, 2.0]), order=32)

    def test_header_and_rows(self, workdir):
        out = workdir / "fig12.csv"
        rows = run_fig12_sweep(self.small_config(), seed=5, out=out)
        records = read_rows(out)
        assert len(rows) == len(records) == 3
        assert list(records[0].keys()) == SweepRow.columns()
        assert records[0]["family"] == "planar_ring"
        assert records[0]["r"] == ""
        assert records[0]["seed"] == "5"

    def test_ring_ratio_near_two(self, workdir):
        rows = run_fig12_sweep(self.small_config(), seed=1, out=workdir / "a.csv")
        for row in rows:
            assert row.rate1 / row.rate2 == pytest.approx(2.0, rel=0.05)
            assert row.damping_class == "underdamped"
            assert max(row.d1_abs, row.d2_abs, row.d3_abs) <= 1.0 + 1e-9

    def test_sphere_normalization(self, workdir):
        rows = run_fig12_sweep(self.small_config("sphere_shell"), seed=1, out=workdir / "s.csv")
        for row in rows:
            assert row.rate1_norm == row.rate1_norm_bxy
            assert row.rate1_norm_b2 == pytest.approx(row.rate1_norm_bxy * 2.0 / 3.0)

    def test_deterministic_across_workers(self, workdir):
        serial, threaded = workdir / "serial.csv", workdir / "threaded.csv"
        run_fig12_sweep(self.small_config(), seed=3, out=serial, workers=1)
        run_fig12_sweep(self.small_config(), seed=3, out=threaded, workers=4)
        assert serial.read_bytes() == threaded.read_bytes()


class TestFig3Sweep:
    """Test the correlated sweep."""

    def test_endpoints_and_monotonicity(self, workdir):
        cfg = Fig3Config(r=GridSpec(values=[0.0, 0.5, 1.0]))
        rows = run_fig3_sweep(cfg, seed=1, out=workdir / "fig3.csv")
        assert [row.family for row in rows] == ["sp_wave"] * 3
        assert rows[0].rate1_norm == pytest.approx(2.0, rel=0.02)
        assert rows[0].rate2_norm == pytest.approx(1.0, rel=0.02)
        assert rows[-1].rate1_norm == pytest.approx(5.9, rel=0.10)
        assert rows[0].rate1 < rows[1].rate1 < rows[2].rate1
        assert rows[0].rate2 < rows[1].rate2 < rows[2].rate2
        assert rows[0].b0_over_B0 == pytest.approx(0.1)

    def test_fully_forward_moduli_are_physical(self, workdir):
        cfg = Fig3Config(r=GridSpec(values=[1.0]))
        row = run_fig3_sweep(cfg, seed=1, out=workdir / "fig3.csv")[0]
        assert min(row.d1_abs, row.d2_abs, row.d3_abs) > 0.999
        assert row.d2_abs == pytest.approx(row.d3_abs, abs=1e-12)

    def test_no_survivors_row(self, workdir):
        cfg = Fig3Config(B0_tau=0.5, b0_tau=0.5, r=GridSpec(values=[0.0]), transient_cut=0.95)
        rows = run_fig3_sweep(cfg, seed=1, out=workdir / "fig3.csv")
        assert rows[0].damping_class == "no_survivors"
        assert math.isnan(rows[0].rate1)
        assert read_rows(workdir / "fig3.csv")[0]["rate1"] == "nan"


class TestTransition:
    """Test the anisotropy scan and boundary bisection."""

    def test_scan_and_boundary(self, workdir):
        cfg = TransitionConfig(
            B0_tau=0.5,
            b0_over_B0=GridSpec(values=[1.0, 4.0]),
            anisotropy=GridSpec(min=0.0, max=1.0, count=11),
        )
        out = workdir / "transition.csv"
        records, boundaries = run_transition_scan(cfg, out)

        assert len(records) == 33
        assert (workdir / "transition_boundary.csv").exists()
        assert list(read_rows(out)[0].keys()) == SCAN_COLUMNS

        weak, strong = boundaries
        assert weak.anisotropy is None
        assert 0.0 < strong.anisotropy < 1.0
        assert strong.discriminant_residual < 1e-6

    def test_overdamped_rows_are_real(self, workdir):
        cfg = TransitionConfig(B0_tau=0.5, b0_over_B0=GridSpec(values=[4.0]), anisotropy=GridSpec(values=[0.0, 1.0]))
        records, _ = run_transition_scan(cfg, workdir / "t.csv")
        column = {name: k for k, name in enumerate(SCAN_COLUMNS)}
        ring, flip, zero_ring, zero_flip = records
        assert ring[column["damping_class"]] == "underdamped"
        assert flip[column["damping_class"]] == "overdamped"
        assert all(flip[column[f"d{k}_im"]] == 0.0 for k in (1, 2, 3))

        assert zero_flip[column["B0_tau"]] == 0.0
        assert zero_flip[column["damping_class"]] == "overdamped"
        assert zero_ring[column["damping_class"]] == "boundary"

    def test_zero_field_rows_optional(self, workdir):
        cfg = TransitionConfig(b0_over_B0=GridSpec(values=[1.0]), anisotropy=GridSpec(values=[0.5]), zero_field=False)
        records, _ = run_transition_scan(cfg, workdir / "t.csv")
        assert len(records) == 1

    def test_zero_field_written_as_inf(self, workdir):
        cfg = TransitionConfig(b0_over_B0=GridSpec(values=[2.0]), anisotropy=GridSpec(values=[0.5]))
        run_transition_scan(cfg, workdir / "t.csv")
        rows = read_rows(workdir / "t.csv")
        assert [row["b0_over_B0"] for row in rows] == ["2", "inf"]
        assert rows[1]["damping_class"] == "overdamped"

    def test_find_boundary_without_sign_change(self):
        assert find_boundary(0.5, 0.5, 1.0, 0.0, 1.0) is None

    def test_relative_discriminant_bounded(self):
        for a in (0.0, 0.3, 1.0):
            value = relative_discriminant(anisotropic_integrals(0.5, 2.0, a, 1.0))
            assert -1.0 <= value <= 1.0


class TestVerify:
    """Test the verification report."""

    def test_point_noise_passes(self, workdir):
        cfg = VerifyConfig(
            families=["point"],
            points=[VerifyPoint(B0_tau=0.5, b0_tau=0.05)],
            m=5,
            trajectories=100,
            oracle_checks=False,
        )
        out = workdir / "verify.csv"
        report = run_verify(cfg, seed=1, out=out)
        assert report.passed, [c.describe() for c in report.failures]
        assert {c.name for c in report.checks} == {
            "quadrature_moments", "sum_rule", "averaging_oracle", "eigenvalue_bound", "monte_carlo_white",
        }
        assert len(read_rows(out)) == len(report.checks)

    def test_axis_flip_family_passes(self, workdir):
        cfg = VerifyConfig(
            families=["axis_flip"],
            points=[VerifyPoint(B0_tau=0.5, b0_tau=0.05)],
            m=5,
            trajectories=4000,
            oracle_checks=False,
        )
        report = run_verify(cfg, seed=1, out=workdir / "verify.csv")
        moments = next(c for c in report.checks if c.name == "quadrature_moments")
        assert moments.family == "axis_flip"
        assert moments.observed < 1e-12
        assert all(c.passed for c in report.checks if c.name != "monte_carlo_white")

    def test_one_node_sphere_is_caught(self, workdir):
        cfg = VerifyConfig(
            families=["sphere_shell"],
            points=[VerifyPoint(B0_tau=0.5, b0_tau=0.05)],
            order=1,
            m=5,
            trajectories=2000,
            oracle_checks=False,
        )
        report = run_verify(cfg, seed=1, out=workdir / "verify.csv")
        assert not report.passed
        assert "quadrature_moments" in {c.name for c in report.failures}

    def test_describe(self, workdir):
        cfg = VerifyConfig(families=["point"], points=[VerifyPoint(B0_tau=0.5, b0_tau=0.05)], m=2,
                           trajectories=10, oracle_checks=False)
        check = run_verify(cfg, seed=1, out=workdir / "v.csv").checks[0]
        assert check.describe().startswith("quadrature_moments [point] B0_tau=0.5 b0_tau=0.05")


class TestCommandRegistry:
    """Test subcommand registration and lookup."""

    def test_lookup_by_alias(self):
        registry = build_registry()
        assert registry.get_command("scan").name == "transition"
        assert registry.get_command("CHECK").name == "verify"
        assert registry.get_command("unknown") is None

    def test_duplicate_registration(self):
        registry = CommandRegistry()
        cmd = CommandDefinition("a", "A", CommandCategory.CHECKS, handler=lambda ctx: 0)
        registry.register(cmd)
        with pytest.raises(ValueError, match="already registered"):
            registry.register(cmd)

    def test_format_help(self):
        registry = build_registry()
        text = registry.format_help()
        assert "Figure sweeps:" in text
        assert "transition (scan)" in text
        assert "usage: python main.py fig3" in registry.format_help("fig3")
        assert "also: check" in registry.format_help("verify")
        assert registry.format_help("nope") == "Unknown command: nope"


class TestCli:
    """Test the command-line entry point and its exit codes."""

    def write_config(self, workdir, text):
        path = workdir / "config.yaml"
        path.write_text(text)
        return str(path)

    def test_fig12_ok(self, workdir):
        config = self.write_config(workdir, (
            "fig12:\n"
            "  B0_tau: [1.0]\n"
            "  b0_over_B0: {values: [1.0, 2.0]}\n"
            "  order: 16\n"
        ))
        out = workdir / "fig12.csv"
        assert main(["fig12", "--config", config, "--out", str(out), "--gnuplot", "--threads", "1"]) == EXIT_OK
        assert len(read_rows(out)) == 2
        assert out.with_suffix(".gp").exists()

    def test_unknown_key_reports_line(self, workdir, capsys):
        config = self.write_config(workdir, "seed: 3\nfig12:\n  famly: planar_ring\n")
        assert main(["fig12", "--config", config]) == EXIT_CONFIG
        captured = capsys.readouterr().out
        assert "fig12.famly (line 3)" in captured

    def test_subcommand_help(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["transition", "--help"])
        assert exc.value.code == 0
        text = capsys.readouterr().out
        assert "usage: python main.py transition" in text
        assert "python main.py transition --config config/figures/transition.yaml" in text

    def test_missing_config(self, workdir):
        assert main(["fig3", "--config", str(workdir / "none.yaml")]) == EXIT_CONFIG

    def test_negative_seed(self, workdir):
        config = self.write_config(workdir, "seed: 1\n")
        assert main(["fig3", "--config", config, "--seed", "-1"]) == EXIT_CONFIG

    def test_verify_failure_exit_code(self, workdir):
        config = self.write_config(workdir, (
            "verify:\n"
            "  families: [sphere_shell]\n"
            "  points: [{B0_tau: 0.5, b0_tau: 0.05}]\n"
            "  order: 1\n"
            "  m: 3\n"
            "  trajectories: 500\n"
            "  oracle_checks: false\n"
        ))
        out = workdir / "verify.csv"
        assert main(["check", "--config", config, "--out", str(out)]) == EXIT_VERIFY
        assert out.exists()
