"""Tests for the command-line verbs and exit codes."""

import json

import pytest

from app.core.config import settings
from app.main import build_parser, main, render_report_text


class TestAnalyze:
    """Tests for the analyze verb."""

    def test_json_report(self, capsys):
        assert main(["analyze", "catalog:T2"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["schema"] == 1
        assert payload["input"]["kind"] == "semigroup"
        assert payload["greens"]["order"] == 4
        assert "timing" in payload

    def test_no_timing(self, capsys):
        assert main(["analyze", "catalog:Z2", "--no-timing"]) == 0
        assert "timing" not in json.loads(capsys.readouterr().out)

    def test_text_report(self, capsys):
        assert main(["analyze", "catalog:T2", "--format", "text"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("semigroup T2\n")
        assert "roundtrip semigroup: verified" in out
        assert out.rstrip().endswith("PASS")

    def test_failed_check_exits_one(self, capsys):
        assert main(["analyze", "catalog:RRB3", "--check", "self-supported", "--format", "text"]) == 1
        out = capsys.readouterr().out
        assert "FAIL script checks: self-supported" in out
        assert out.rstrip().endswith("FAIL")

    def test_dot_directory(self, tmp_path, capsys):
        assert main(["analyze", "catalog:P2", "--dot", str(tmp_path / "dot")]) == 0
        written = sorted(p.name for p in (tmp_path / "dot").iterdir())
        assert written == ["cone_r_classes.dot", "objects.dot"]

    def test_parse_error_exits_two(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("2\n0 1\n")
        assert main(["analyze", str(path)]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_non_associative_exits_two(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("2\n1 0\n0 0\n")
        assert main(["analyze", str(path)]) == 2

    def test_size_cap_exits_three(self, tmp_path, capsys):
        path = tmp_path / "s3.txt"
        path.write_text("t 3: 2 1 3\nt 3: 2 3 1\n")
        assert main(["analyze", str(path), "--cap-size", "5"]) == 3
        assert "error:" in capsys.readouterr().err

    def test_unknown_catalog_entry(self, capsys):
        assert main(["analyze", "catalog:Q2"]) == 2


class TestEggboxVerb:
    """Tests for the eggbox verb."""

    def test_text(self, capsys):
        assert main(["eggbox", "catalog:T2"]) == 0
        assert capsys.readouterr().out.startswith("T2: 4 elements, 2 D-classes")

    def test_dot(self, capsys):
        assert main(["eggbox", "catalog:T2", "--format", "dot"]) == 0
        assert "subgraph cluster_0" in capsys.readouterr().out

    def test_category_refused(self, capsys):
        assert main(["eggbox", "catalog:P2"]) == 2


class TestCatalogVerb:
    """Tests for the catalog verb."""

    def test_list(self, capsys):
        assert main(["catalog", "list"]) == 0
        names = [line.split()[0] for line in capsys.readouterr().out.splitlines()]
        assert "T2" in names and "P3" in names

    def test_build_family(self, capsys):
        assert main(["catalog", "build", "T", "2", "--format", "generators"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("# T2\n")
        assert "t 2:" in out

    def test_build_category(self, capsys):
        assert main(["catalog", "build", "P2"]) == 0
        assert "objects 3" in capsys.readouterr().out

    def test_build_needs_name(self, capsys):
        assert main(["catalog", "build"]) == 2

    def test_cap(self, capsys):
        assert main(["catalog", "build", "T5"]) == 3

    def test_raised_cap(self, capsys):
        assert main(["catalog", "build", "I", "2", "--cap-n", "5", "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out)["size"] == 7
        assert settings.MAX_CATALOG_SEMIGROUP_N == 5


class TestConvertVerb:
    """Tests for the convert verb."""

    def test_cayley_to_generators(self, tmp_path, capsys):
        path = tmp_path / "t2.txt"
        path.write_text("t 2: 2 1\nt 2: 1 1\n")
        assert main(["convert", str(path), "--to", "cayley"]) == 0
        assert "\n4\n" in capsys.readouterr().out

    def test_semigroup_to_category(self, capsys):
        assert main(["convert", "catalog:T2", "--to", "category"]) == 0
        assert capsys.readouterr().out.splitlines()[1] == "objects 3"

    def test_category_to_cayley_refused(self, capsys):
        assert main(["convert", "catalog:P2", "--to", "cayley"]) == 2


class TestVerifySuiteVerb:
    """Tests for the verify-suite verb."""

    def test_unknown_scope_rejected_by_parser(self):
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(["verify-suite", "everything"])
        assert info.value.code == 2

    @pytest.mark.slow
    def test_category_scope(self, tmp_path, capsys):
        output = tmp_path / "suite.json"
        assert main(["verify-suite", "category", "--output", str(output), "--no-timing"]) == 0
        payload = json.loads(output.read_text())
        assert payload["passed"]
        assert payload["scope"] == "category"
        assert json.loads(capsys.readouterr().out) == payload


class TestFlags:
    """Tests for shared flags."""

    def test_bad_log_level(self, capsys):
        assert main(["analyze", "catalog:Z2", "--log-level", "LOUD"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_render_without_optional_sections(self):
        from app.application.dto.report_dto import AnalysisReport, InputIdentity

        report = AnalysisReport(tool="conecat", input=InputIdentity(kind="semigroup", source="x", sha256="0"))
        assert render_report_text(report) == "semigroup x\nPASS"
