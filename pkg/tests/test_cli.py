"""
Tests for the hyperjac command line.
"""

import csv
import io
import json

import pytest

from hyperelliptic_class_numbers import __version__
from hyperelliptic_class_numbers.cli import main
from hyperelliptic_class_numbers.output import manifest_path, read_records, read_table


def read_table_text(text):
    return csv.DictReader(io.StringIO(text))


@pytest.fixture
def cubic_summary(tmp_path):
    """Summary table and records file of the exhaustive q = 3, d = 3 sweep."""
    out = tmp_path / "summary.csv"
    records = tmp_path / "records.csv"
    code = main(["sweep", "--q", "3", "--d", "3", "--out", str(out),
                 "--records-out", str(records)])
    assert code == 0
    return out, records


class TestLpoly:
    """Tests for the lpoly subcommand."""

    def test_all_methods_agree(self, capsys):
        code = main(["lpoly", "--q", "3", "--poly", "1,2,0,1", "--method", "all"])
        assert code == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        assert lines[0] == "method,coeffs,class_number,n_f,seconds"
        assert len(lines) == 4
        for line in lines[1:]:
            assert ",1 3 3,7," in line

    def test_single_method(self, capsys):
        assert main(["lpoly", "--q", "5", "--poly", "1,0,0,1", "--method", "pointcount"]) == 0
        assert capsys.readouterr().out.startswith("method,")

    @pytest.mark.parametrize("argv", [
        ["lpoly", "--q", "3", "--poly", "1,2,x,1"],
        ["lpoly", "--q", "4", "--poly", "1,2,0,1"],
        ["lpoly", "--q", "3", "--poly", "1,2,0,1", "--d", "5"],
    ])
    def test_invalid_input_exits_2(self, argv, capsys):
        assert main(argv) == 2
        assert "hyperjac lpoly" in capsys.readouterr().err


class TestSweep:
    """Tests for sweep, sample and verify."""

    def test_sweep_writes_summary_records_and_manifest(self, cubic_summary):
        out, records = cubic_summary
        rows = {row["key"]: row["value"] for row in read_table(out)}
        assert rows["count"] == "18"
        assert rows["violations"] == "0"
        assert len(read_records(records)) == 18

        manifest = json.loads(manifest_path(out).read_text())
        assert manifest["subcommand"] == "sweep"
        assert manifest["version"] == __version__
        assert len(manifest["output_checksum"]) == 64

    def test_sample_reproducible(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (first, second):
            assert main(["sample", "--q", "5", "--d", "5", "--samples", "40",
                         "--seed", "7", "--out", str(out)]) == 0
        assert first.read_text() == second.read_text()

    def test_verify_records(self, cubic_summary, capsys):
        _, records = cubic_summary
        assert main(["verify", "--records", str(records)]) == 0
        out = capsys.readouterr().out
        assert "curves,18" in out
        assert "failed_checks,0" in out

    def test_verify_needs_family(self, capsys):
        assert main(["verify"]) == 2


class TestAnalytic:
    """Tests for moments, charfun, bounds and hcheck."""

    def test_bounds_json(self, capsys):
        assert main(["bounds", "--g", "1", "--q", "3", "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert len(rows) == 1
        assert float(rows[0]["thm1_bound"]) == pytest.approx(3.5717, abs=1e-4)
        assert rows[0]["N"] == "2"

    def test_moments_with_oracle(self, capsys):
        assert main(["moments", "--q", "3", "--s", "1,2", "--trunc-degree", "4",
                     "--oracle"]) == 0
        rows = list(read_table_text(capsys.readouterr().out))
        assert [row["s"] for row in rows] == ["1", "2"]
        assert all(row["oracle"] for row in rows)
        assert rows[0]["ratio"] == ""

    def test_charfun_against_sweep(self, cubic_summary, capsys):
        out, _ = cubic_summary
        assert main(["charfun", "--q", "3", "--trunc-degree", "4",
                     "--compare-sweep", str(out)]) == 0
        rows = list(read_table_text(capsys.readouterr().out))
        assert [float(row["t"]) for row in rows] == [0.5, 1.0, 2.0]
        assert all(float(row["distance"]) >= 0 for row in rows)

    def test_charfun_untracked_point(self, cubic_summary):
        out, _ = cubic_summary
        assert main(["charfun", "--q", "3", "--t-grid", "0.25",
                     "--compare-sweep", str(out)]) == 2

    def test_hcheck_small_grid(self, capsys):
        code = main(["hcheck", "--q", "3,101", "--trunc-degree", "8", "--lambda-max", "6",
                     "--prop3-q", "101"])
        assert code in (0, 1)
        rows = list(read_table_text(capsys.readouterr().out))
        inequalities = [row for row in rows if row["section"] == "h_inequality"]
        assert inequalities
        assert all(row["holds"] == "true" for row in inequalities)
        assert {row["section"] for row in rows} >= {"h2_bound", "large_s", "large_q"}


class TestParser:
    """Tests for argument handling."""

    def test_missing_subcommand(self):
        assert main([]) == 2

    def test_version(self, capsys):
        assert main(["--version"]) == 0
        assert __version__ in capsys.readouterr().out
