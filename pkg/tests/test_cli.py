import csv
import json
import subprocess
import sys

import pytest

from leakwise import DiscreteUniform, LogNormal, Normal, Poisson
from leakwise.cli import main, parse_distribution, parse_range


def run_cli(args, tmp_path=None):
    proc = subprocess.run(
        [sys.executable, "-m", "leakwise.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc


class TestParsing:
    def test_distribution_grammar(self):
        assert parse_distribution("poisson:lambda=4") == Poisson(4.0)
        assert parse_distribution("uniform:N=16") == DiscreteUniform(16)
        assert parse_distribution("normal:mu=0,sigma2=4") == Normal(0.0, 4.0)
        assert parse_distribution("normal:sigma2=4") == Normal(0.0, 4.0)
        assert parse_distribution(
            "lognormal:mu=1.6702,sigma2=0.145542"
        ) == LogNormal(1.6702, 0.145542)

    def test_bad_family(self):
        with pytest.raises(ValueError):
            parse_distribution("pareto:alpha=3")

    def test_missing_parameter(self):
        with pytest.raises(ValueError):
            parse_distribution("poisson:rate=4")

    def test_range(self):
        assert list(parse_range("1..4")) == [1, 2, 3, 4]
        assert list(parse_range("7")) == [7]
        with pytest.raises(ValueError):
            parse_range("5..2")


class TestSingleSubcommand:
    def test_csv_roundtrip_full_precision(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        status = main(
            [
                "single",
                "--dist",
                "lognormal:mu=1.6702,sigma2=0.145542",
                "--targets",
                "1",
                "--spectators",
                "1..8",
                "--output",
                str(out),
            ]
        )
        assert status == 0
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["n"] for r in rows] == [str(n) for n in range(1, 9)]
        from leakwise import ScenarioConfig, loss_report

        salary = LogNormal(1.6702, 0.145542)
        for row in rows:
            report = loss_report(ScenarioConfig(salary, 1, int(row["n"])))
            assert float(row["h_after"]) == report.after  # exact round trip
            assert float(row["rel_loss"]) == report.relative_loss

    def test_deterministic_output(self, tmp_path):
        args = ["single", "--dist", "poisson:lambda=4", "--spectators", "1..4"]
        a = run_cli(args)
        b = run_cli(args)
        assert a.returncode == 0
        assert a.stdout == b.stdout

    def test_json_format(self, capsys):
        assert main(["single", "--dist", "uniform:N=8", "--spectators", "2",
                     "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert rows[0]["n"] == 2
        assert rows[0]["h_before"] == pytest.approx(3.0, abs=1e-12)

    def test_plot_rendered_beside_output(self, tmp_path):
        out = tmp_path / "report.csv"
        status = main(
            ["single", "--dist", "normal:sigma2=4", "--spectators", "1..6",
             "--output", str(out), "--plot"]
        )
        assert status == 0
        png = tmp_path / "report.png"
        assert png.exists()
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_config_file(self, tmp_path, capsys):
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps({"dist": "normal:sigma2=4", "spectators": "3", "format": "json"})
        )
        assert main(["single", "--config", str(config)]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert len(rows) == 1 and rows[0]["n"] == 3


class TestTwoExecSubcommand:
    def test_overlap_sweep_csv(self, capsys):
        assert main(["two-exec", "--sigma2", "4", "--spectators", "10"]) == 0
        rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
        assert len(rows) == 11
        half = [r for r in rows if r["s0"] == "5"][0]
        assert float(half["second_loss_ratio"]) == pytest.approx(0.313, abs=5e-4)

    def test_plot(self, tmp_path):
        out = tmp_path / "two.csv"
        assert main(["two-exec", "--spectators", "6", "--participation", "once",
                     "--output", str(out), "--plot"]) == 0
        assert (tmp_path / "two.png").exists()


class TestSolveSubcommand:
    def test_poisson_one_percent(self, capsys):
        assert main(["solve", "--dist", "poisson:lambda=4", "--budget", "0.01"]) == 0
        assert capsys.readouterr().out.strip() == "24"


class TestValidateSubcommand:
    def test_uniform_scenario_passes(self, capsys):
        status = main(["validate", "--scenario", "uniform:N=16,a=1,t=1,s=1"])
        record = json.loads(capsys.readouterr().out)
        assert status == 0
        assert record["status"] == "pass"
        assert record["attacker_independence_spread"] < 1e-9
        assert record["closed_form_delta"] < 1e-6

    def test_poisson_scenario_passes(self, capsys):
        status = main(["validate", "--scenario", "poisson:lambda=4,a=1,t=1,s=1"])
        assert status == 0
        assert json.loads(capsys.readouterr().out)["status"] == "pass"


class TestExitCodes:
    def test_usage_error_is_2(self):
        proc = run_cli(["single", "--spectators"])
        assert proc.returncode == 2

    def test_domain_error_is_3(self, capsys):
        status = main(["single", "--dist", "poisson:lambda=-1"])
        assert status == 3
        record = json.loads(capsys.readouterr().err)
        assert record["error"] == "DomainError"

    def test_unknown_subcommand_is_2(self):
        proc = run_cli(["nonsense"])
        assert proc.returncode == 2
