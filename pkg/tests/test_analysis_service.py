"""Tests for the analysis pipeline."""

import json

import pytest

from app.application.services.analysis_service import AnalysisService
from app.application.services.catalog_service import CatalogService
from app.core.exceptions import ParseError, UnknownCatalogEntry
from app.infrastructure.formats.category_text import dump_category


def _stages(report):
    return {stage.stage: stage for stage in report.stages}


@pytest.mark.integration
class TestSemigroupInputs:
    """Tests for semigroup inputs."""

    def test_full_pipeline(self):
        result = AnalysisService.analyze("catalog:T2")
        report = result.report
        assert report.passed
        assert report.input.kind == "semigroup"
        assert report.flags["l_unipotent"]
        assert report.greens.num_l == 3
        assert report.category.objects == ["S[1 1]", "S[1 2]", "S[2 2]"]
        assert report.category.largest_object == "S[1 2]"
        assert report.cones.order == 4
        assert sorted(r.name for r in report.roundtrips) == ["category", "semigroup"]
        assert all(r.status == "verified" for r in report.roundtrips)
        assert set(result.diagrams) == {"objects", "cone_r_classes", "eggbox"}

    def test_ladders_recorded(self):
        report = AnalysisService.analyze("catalog:I2").report
        assert all(report.ladders["inverse"].values())
        assert all(report.ladders["l_unipotent"].values())

    def test_not_left_reductive_goes_through_dual(self):
        report = AnalysisService.analyze("catalog:L2Z").report
        stages = _stages(report)
        assert stages["left_category"].status == "skipped"
        assert "not left reductive" in stages["left_category"].reason
        assert [(r.name, r.status) for r in report.roundtrips] == [("semigroup_dual", "verified")]
        assert report.category is None

    def test_left_zero_band(self):
        result = AnalysisService.analyze("catalog:L2")
        assert _stages(result.report)["cones"].status == "skipped"
        assert result.report.roundtrips[0].name == "semigroup_dual"
        assert set(result.diagrams) == {"eggbox"}

    def test_non_regular_file(self, tmp_path):
        path = tmp_path / "null.txt"
        path.write_text("2\n0 0\n0 0\n")
        result = AnalysisService.analyze(str(path))
        stages = _stages(result.report)
        assert stages["left_category"].reason == "not regular: 1"
        assert stages["roundtrip"].status == "skipped"
        assert result.report.roundtrips == []
        assert result.report.input.name == "null"

    def test_generator_file(self, tmp_path):
        path = tmp_path / "s3.txt"
        path.write_text("t 3: 2 1 3\nt 3: 2 3 1\n")
        report = AnalysisService.analyze(str(path)).report
        assert report.greens.order == 6
        assert report.flags["inverse"]
        assert report.passed

    def test_extra_checks(self):
        report = AnalysisService.analyze("catalog:I2", checks=["self-supported", "normal"]).report
        script = report.checks[-1]
        assert script.subject == "script checks"
        assert script.get("self-supported").passed
        assert script.get("normal").passed

    def test_failed_extra_check(self):
        report = AnalysisService.analyze("catalog:RRB3", checks=["self-supported"]).report
        assert not report.checks[-1].passed
        assert not report.passed


@pytest.mark.integration
class TestCategoryInputs:
    """Tests for category inputs."""

    def test_catalog_category(self):
        report = AnalysisService.analyze("catalog:P2").report
        assert report.input.kind == "category"
        assert report.cones.supported
        assert not report.cones.self_supported
        assert report.cones.downset == ["{{1,2}}", "{{1},{2}}"]
        assert report.roundtrips[0].status == "verified"
        assert report.greens.order == 4

    def test_category_file(self, tmp_path, two_object_text):
        path = tmp_path / "two.cat"
        path.write_text(two_object_text)
        result = AnalysisService.analyze(str(path))
        assert result.report.cones.order == 2
        assert result.report.passed
        assert "objects" in result.diagrams

    def test_not_normal(self, tmp_path):
        path = tmp_path / "empty.cat"
        path.write_text(dump_category(CatalogService.powerset_base(2, include_empty=True)))
        report = AnalysisService.analyze(str(path)).report
        stages = _stages(report)
        assert stages["cones"].status == "skipped"
        assert stages["connect"].reason == "not a normal category"
        assert not report.passed

    def test_script_with_checks(self, tmp_path, two_object_text):
        (tmp_path / "two.cat").write_text(two_object_text)
        script = tmp_path / "run.txt"
        script.write_text("input: two.cat\ncheck: bounded-above\ncheck: normal\n")
        report = AnalysisService.analyze(str(script)).report
        assert report.input.kind == "category"
        checks = report.checks[-1]
        assert checks.get("bounded-above").passed
        assert checks.get("normal").passed

    def test_script_downset_not_closed(self, tmp_path, two_object_text):
        (tmp_path / "two.cat").write_text(two_object_text)
        script = tmp_path / "run.txt"
        script.write_text("input: two.cat\ndownset: 1\n")
        report = AnalysisService.analyze(str(script)).report
        stages = _stages(report)
        assert stages["connect"].status == "failed"
        assert stages["roundtrip"].status == "skipped"


@pytest.mark.integration
class TestHomomorphismScripts:
    """Tests for scripts carrying a homomorphism."""

    def test_band_projection(self, tmp_path):
        script = tmp_path / "hom.txt"
        script.write_text("input: catalog:B4\ntarget: catalog:SL2\nhom: 0->0\nhom: 1->1\nhom: 2->0\nhom: 3->1\n")
        report = AnalysisService.analyze(str(script)).report
        assert _stages(report)["hom_to_cc"].status == "ok"
        hom = next(c for c in report.checks if c.subject == "hom B4 -> SL2")
        assert hom.get("naturality_square_commutes").passed

    def test_not_a_homomorphism(self, tmp_path):
        script = tmp_path / "hom.txt"
        script.write_text("input: catalog:T2\ntarget: catalog:SL2\nhom: 0->1\nhom: 1->0\nhom: 2->1\nhom: 3->1\n")
        report = AnalysisService.analyze(str(script)).report
        assert _stages(report)["hom_to_cc"].status == "failed"

    def test_missing_image(self, tmp_path):
        script = tmp_path / "hom.txt"
        script.write_text("input: catalog:B4\ntarget: catalog:SL2\nhom: 0->0\n")
        with pytest.raises(ParseError):
            AnalysisService.analyze(str(script))


class TestLoading:
    """Tests for input resolution and identity."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError) as info:
            AnalysisService.load(str(tmp_path / "absent.txt"))
        assert info.value.exit_code == 2

    def test_unknown_catalog_name(self):
        with pytest.raises(UnknownCatalogEntry):
            AnalysisService.load("catalog:W9")

    def test_digest_is_stable(self):
        first = AnalysisService.load("catalog:T2")
        second = AnalysisService.load("catalog:T2")
        assert first.sha256 == second.sha256
        assert len(first.sha256) == 64

    def test_report_json(self):
        report = AnalysisService.analyze("catalog:Z2").report
        payload = json.loads(report.to_json(include_timing=False))
        assert payload["schema"] == 1
        assert payload["tool"].startswith("conecat ")
        assert "timing" not in payload
        assert "total" in json.loads(report.to_json())["timing"]
