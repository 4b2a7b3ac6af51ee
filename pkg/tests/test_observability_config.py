"""Tests for settings, structured logging, stage timing and failure tracking."""

import json
import logging

import pytest
from pydantic import ValidationError

from app.core.config import Settings, apply_overrides, reset_settings, settings
from app.core.exceptions import (
    CapExceeded,
    EngineError,
    IndexOutOfRange,
    InputError,
    InvariantError,
    IsoFailure,
    ParseError,
    SearchSpaceTooLarge,
)
from app.core.logging_config import StructuredFormatter, setup_logging
from app.infrastructure.observability.error_tracker import FailureTracker
from app.infrastructure.observability.metrics import StageTimer


class TestSettings:
    """Tests for the settings object."""

    def test_defaults(self):
        assert settings.MAX_SEMIGROUP_SIZE == 512
        assert settings.MAX_CATALOG_SEMIGROUP_N == 4
        assert settings.MAX_CATALOG_CATEGORY_N == 3
        assert settings.LOG_LEVEL == "WARNING"

    def test_environment_ignored(self, monkeypatch):
        monkeypatch.setenv("MAX_SEMIGROUP_SIZE", "7")
        assert Settings().MAX_SEMIGROUP_SIZE == 512

    def test_overrides_skip_none(self):
        apply_overrides(MAX_SEMIGROUP_SIZE=None, MAX_ISO_OBJECTS=4)
        assert settings.MAX_SEMIGROUP_SIZE == 512
        assert settings.MAX_ISO_OBJECTS == 4

    def test_unknown_override(self):
        with pytest.raises(ValueError):
            apply_overrides(MAX_WIDGETS=3)

    def test_log_level_normalised(self):
        apply_overrides(LOG_LEVEL="debug")
        assert settings.LOG_LEVEL == "DEBUG"

    def test_invalid_values_rejected(self):
        with pytest.raises(ValidationError):
            apply_overrides(MAX_SEMIGROUP_SIZE=0)
        with pytest.raises(ValidationError):
            apply_overrides(LOG_LEVEL="LOUD")

    def test_raised_catalog_cap_warns(self, caplog):
        with caplog.at_level(logging.WARNING, logger="app.core.config"):
            apply_overrides(MAX_CATALOG_CATEGORY_N=4)
        assert "MAX_CATALOG_CATEGORY_N raised to 4" in caplog.text

    def test_reset(self):
        apply_overrides(MAX_CONE_CANDIDATES=3)
        reset_settings()
        assert settings.MAX_CONE_CANDIDATES == 1_000_000


class TestExceptions:
    """Tests for the error hierarchy and exit codes."""

    @pytest.mark.parametrize(
        "error, code",
        [
            (ParseError(3, "bad"), 2),
            (IndexOutOfRange(5, 2, where="row 1"), 2),
            (CapExceeded("cones", 10, 5), 3),
            (SearchSpaceTooLarge(100), 3),
            (IsoFailure("not bijective", 1), 1),
        ],
    )
    def test_exit_codes(self, error, code):
        assert isinstance(error, EngineError)
        assert error.exit_code == code

    def test_groups(self):
        assert issubclass(ParseError, InputError)
        assert issubclass(SearchSpaceTooLarge, CapExceeded)
        assert issubclass(IsoFailure, InvariantError)

    def test_parse_error_message(self):
        assert str(ParseError(4, "expected 2 entries")) == "line 4: expected 2 entries"


class TestLogging:
    """Tests for logging setup."""

    def test_json_lines_carry_context(self):
        record = logging.LogRecord("app.test", logging.INFO, __file__, 10, "built", None, None)
        record.stage = "functor_C"
        record.cone_count = 4
        payload = json.loads(StructuredFormatter("%(message)s").format(record))
        assert payload["message"] == "built"
        assert payload["level"] == "INFO"
        assert payload["stage"] == "functor_C"
        assert payload["cone_count"] == 4

    def test_setup_replaces_handlers(self, tmp_path):
        log_file = tmp_path / "run.log"
        setup_logging(level="INFO", json_format=True, log_file=str(log_file))
        root = logging.getLogger()
        assert root.level == logging.INFO
        assert len(root.handlers) == 2
        logging.getLogger("app.test").info("hello", extra={"stage": "test"})
        for handler in root.handlers:
            handler.flush()
        line = json.loads(log_file.read_text().splitlines()[-1])
        assert line["stage"] == "test"
        setup_logging()
        assert len(logging.getLogger().handlers) == 1


class TestStageTimer:
    """Tests for stage timing."""

    def test_summary(self):
        timer = StageTimer()
        with timer.stage("greens"):
            pass
        with timer.stage("greens"):
            pass
        stats = timer.get_stage_stats()
        assert stats["greens"]["calls"] == 2
        assert set(timer.get_summary()) == {"greens", "total"}

    def test_failed_stage_still_recorded(self):
        timer = StageTimer()
        with pytest.raises(RuntimeError):
            with timer.stage("cones"):
                raise RuntimeError("boom")
        assert timer.get_stage_stats()["cones"]["calls"] == 1
        assert timer.get_summary()["total"] >= 0


class TestFailureTracker:
    """Tests for failure collection."""

    def test_exit_code_and_summary(self):
        tracker = FailureTracker()
        tracker.record_pass("semigroup", 3)
        tracker.record_failure("laws.T2", "semigroup", "T2", witness="(0, 1)")
        tracker.record_error(SearchSpaceTooLarge(10), "powerset.P3", "cones")
        assert tracker.exit_code == 3
        summary = tracker.summary()
        assert summary["total_failures"] == 2
        assert summary["failures_by_type"] == {"CheckFailed": 1, "SearchSpaceTooLarge": 1}
        assert summary["passed_by_scope"] == {"semigroup": 3}

    def test_plain_exception_exits_one(self):
        tracker = FailureTracker()
        tracker.record_error(KeyError("x"), "check", "scope")
        assert tracker.exit_code == 1
        assert tracker.get_failures()[0].error_type == "KeyError"

    def test_empty(self):
        tracker = FailureTracker()
        assert tracker.exit_code == 0
        assert tracker.get_failures() == []
        assert tracker.summary()["total_failures"] == 0
