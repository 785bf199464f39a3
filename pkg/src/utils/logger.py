"""
Logging utilities for linfdiff

Everything goes to stderr so that stdout stays reserved for JSON documents.
"""

import logging
import os
import sys
import time
from datetime import datetime
from typing import Dict, Optional

CONSOLE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(module)s.%(funcName)s - %(message)s'


def _level(name: str) -> int:
    return getattr(logging, name.upper(), logging.INFO)


class ColoredFormatter(logging.Formatter):
    """Formatter adding ANSI colours to the level name"""

    COLORS = {
        'DEBUG': '\033[36m',
        'INFO': '\033[32m',
        'WARNING': '\033[33m',
        'ERROR': '\033[31m',
        'CRITICAL': '\033[35m',
    }
    RESET = '\033[0m'

    def format(self, record):
        colour = self.COLORS.get(record.levelname)
        if colour is None:
            return super().format(record)
        # copy so the file handler sees the plain level name
        tinted = logging.makeLogRecord(record.__dict__)
        tinted.levelname = f"{colour}{record.levelname}{self.RESET}"
        return super().format(tinted)


class LinfDiffLogger:
    """Named logger with a console handler and an optional log file"""

    def __init__(self, name: str = "linfdiff", log_level: str = "INFO", log_file: Optional[str] = None):
        self.logger = logging.getLogger(name)
        self.logger.setLevel(_level(log_level))
        self.logger.propagate = False
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)

        console = logging.StreamHandler(sys.stderr)
        console.setFormatter(ColoredFormatter(CONSOLE_FORMAT))
        self.logger.addHandler(console)
        if log_file:
            self.add_file(log_file)

    def add_file(self, log_file: str):
        directory = os.path.dirname(log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        handler = logging.FileHandler(log_file, encoding='utf-8')
        handler.setFormatter(logging.Formatter(FILE_FORMAT))
        self.logger.addHandler(handler)

    def set_level(self, log_level: str):
        self.logger.setLevel(_level(log_level))

    def log(self, level: int, message: str, *args, **kwargs):
        self.logger.log(level, message, *args, **kwargs)

    def debug(self, message: str, *args, **kwargs):
        self.log(logging.DEBUG, message, *args, **kwargs)

    def info(self, message: str, *args, **kwargs):
        self.log(logging.INFO, message, *args, **kwargs)

    def warning(self, message: str, *args, **kwargs):
        self.log(logging.WARNING, message, *args, **kwargs)

    def error(self, message: str, *args, **kwargs):
        self.log(logging.ERROR, message, *args, **kwargs)


class RunLogger:
    """Tags messages with a run id and times the stages of a run"""

    def __init__(self, base_logger: LinfDiffLogger, run_id: Optional[str] = None):
        self.base_logger = base_logger
        self.run_id = run_id or datetime.now().strftime("%Y%m%d_%H%M%S")
        self.started = time.perf_counter()
        self.stage_times: Dict[str, float] = {}
        self._open: Dict[str, float] = {}
        self.info(f"Run started: {self.run_id}")

    def _log(self, level: int, message: str):
        self.base_logger.log(level, f"[{self.run_id}] {message}")

    def debug(self, message: str):
        self._log(logging.DEBUG, message)

    def info(self, message: str):
        self._log(logging.INFO, message)

    def error(self, message: str):
        self._log(logging.ERROR, message)

    def start_stage(self, stage: str):
        self._open[stage] = time.perf_counter()
        self.debug(f"Stage started: {stage}")

    def end_stage(self, stage: str):
        opened = self._open.pop(stage, None)
        if opened is None:
            return
        self.stage_times[stage] = time.perf_counter() - opened
        self.info(f"Stage finished: {stage} ({self.stage_times[stage]:.2f}s)")

    def log_check(self, name: str, passed: bool, detail: str = ""):
        if passed:
            self.debug(f"Check passed: {name}")
        else:
            self.error(f"Check failed: {name} {detail}".rstrip())

    def end_run(self, passed: Optional[bool] = None):
        elapsed = time.perf_counter() - self.started
        status = "" if passed is None else (" - PASS" if passed else " - FAIL")
        self.info(f"Run ended: {self.run_id}{status} - {elapsed:.2f}s")


logger = LinfDiffLogger()


def get_logger(name: str = "linfdiff", log_level: str = "INFO", log_file: Optional[str] = None) -> LinfDiffLogger:
    return LinfDiffLogger(name, log_level, log_file)


def get_run_logger(base_logger: Optional[LinfDiffLogger] = None, run_id: Optional[str] = None) -> RunLogger:
    return RunLogger(base_logger or logger, run_id)
