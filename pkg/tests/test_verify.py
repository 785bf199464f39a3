"""Tests for the verification suites"""

import pytest

from src.core.config import RunConfig
from src.core.verify import SUITE_ORDER, VerificationRunner, check
from src.utils.exceptions import SchemaViolation


def runner(**settings):
    values = {"max_word": 2, "max_level": 2, "max_n": 4, "random_trials": 1}
    values.update(settings)
    return VerificationRunner(RunConfig(**values))


def test_suite_registry():
    assert tuple(runner().suites) == SUITE_ORDER


def test_check_entry():
    entry = check("name", 1, "ok")
    assert entry.passed is True
    assert entry.detail == "ok"


def test_shuffles_report():
    report = runner().run("shuffles")
    assert report.kind == "report"
    assert report.suite == "shuffles"
    assert report.passed
    assert len(report.checks) == 2


def test_doldkan_suite():
    report = runner().run("doldkan")
    assert report.passed, [c for c in report.checks if not c.passed]
    assert len(report.checks) == 3


def test_doldkan_suite_threaded():
    report = runner(random_trials=2, threads=2).run("doldkan")
    assert report.passed
    assert [c.name for c in report.checks][:3] == [c.name for c in runner().run("doldkan").checks]


def test_em_suite():
    assert runner().run("em").passed


def test_psi_suite_single_entry():
    report = runner(catalog="crossed-module-shifted").run("psi")
    assert report.name == "crossed-module-shifted"
    assert report.passed
    assert all("crossed-module-shifted" in c.name for c in report.checks)


def test_unknown_catalog_entry():
    with pytest.raises(SchemaViolation):
        runner(catalog="so3").run("psi")


@pytest.mark.slow
def test_main_suite_single_entry():
    report = runner(catalog="nonabelian-2dim").run("main")
    assert report.passed, [c for c in report.checks if not c.passed]


@pytest.mark.slow
def test_exactness_suite():
    report = runner().run("exactness")
    assert report.passed, [c for c in report.checks if not c.passed]


@pytest.mark.slow
def test_dstar_suite():
    report = runner().run("dstar")
    assert report.passed, [c for c in report.checks if not c.passed]
