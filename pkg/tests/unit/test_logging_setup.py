"""Tests for logging setup and timing helpers"""

import logging

import pytest

from src.utils.logging_setup import Timer, log_duration, setup_logging


@pytest.fixture
def restore_logging():
    yield
    for handler in logging.getLogger().handlers:
        handler.close()
    setup_logging("WARNING")


class TestSetupLogging:
    def test_stream_only(self, restore_logging):
        """Test setup without a file keeps one stream handler"""
        assert setup_logging("debug") is False
        root = logging.getLogger()
        assert root.level == logging.DEBUG
        assert len(root.handlers) == 1

    def test_file_handler(self, temp_dir, restore_logging):
        """Test setup with a file creates its directory and writes to it"""
        logfile = temp_dir / "logs" / "logderiv.log"
        assert setup_logging("INFO", str(logfile)) is True
        logging.info("kernel computed")
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert "INFO - kernel computed" in logfile.read_text(encoding="utf-8")

    def test_unusable_log_path_falls_back_to_stderr(self, temp_dir, restore_logging):
        """Test unusable log path falls back to stderr"""
        blocker = temp_dir / "blocker"
        blocker.write_text("", encoding="utf-8")
        assert setup_logging("INFO", str(blocker / "logderiv.log")) is False
        assert len(logging.getLogger().handlers) == 1

    def test_unknown_level_defaults_to_warning(self, restore_logging):
        """Test unknown level defaults to warning"""
        setup_logging("chatty")
        assert logging.getLogger().level == logging.WARNING


class TestTiming:
    def test_timer_freezes_when_stopped(self):
        """Test timer freezes when stopped"""
        timer = Timer()
        elapsed = timer.stop()
        assert elapsed >= 0
        assert timer.elapsed == elapsed

    def test_log_duration(self, caplog):
        """Test log_duration records its elapsed time"""
        caplog.set_level(logging.DEBUG)
        with log_duration("Kernel at d=3") as timer:
            pass
        assert timer.stopped is not None
        assert "Kernel at d=3 finished in" in caplog.text

    def test_log_duration_on_error(self, caplog):
        """Test log duration on error"""
        caplog.set_level(logging.INFO)
        with pytest.raises(ValueError):
            with log_duration("Analysis", logging.INFO):
                raise ValueError("bad input")
        assert "Analysis finished in" in caplog.text
