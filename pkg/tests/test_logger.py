"""Tests for the logging helpers"""

from src.utils.logger import get_logger, get_run_logger


def test_log_file_gets_plain_level_names(tmp_path):
    path = tmp_path / "logs" / "run.log"
    log = get_logger("linfdiff.test", "DEBUG", str(path))
    log.debug("rank 3")
    log.error("failed")
    text = path.read_text()
    assert "DEBUG - " in text and "rank 3" in text
    assert "ERROR - " in text
    assert "\033[" not in text


def test_run_logger_times_stages(tmp_path):
    path = tmp_path / "run.log"
    run = get_run_logger(get_logger("linfdiff.run", "DEBUG", str(path)), "r1")
    run.start_stage("shuffles")
    run.log_check("theta", False, "1 violation")
    run.end_stage("shuffles")
    run.end_stage("never-started")
    run.end_run(False)
    assert set(run.stage_times) == {"shuffles"}
    text = path.read_text()
    assert "[r1] Check failed: theta 1 violation" in text
    assert "[r1] Run ended: r1 - FAIL" in text
