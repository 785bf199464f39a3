"""Tests for the command-line interface"""

import json

import pytest

from src.core.config import THREADS_ENV
from src.ui.cli import EXIT_FAILED, EXIT_NOT_KAN, EXIT_OK, EXIT_SCHEMA, exit_code_for, main
from src.utils.exceptions import (ComparisonFailed, ConfigurationException, MalformedJets, NotKan, NotReduced,
                                  SchemaViolation)


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(THREADS_ENV, raising=False)
    return tmp_path


def stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("error, code", [
    (SchemaViolation("x"), EXIT_SCHEMA),
    (MalformedJets("x"), EXIT_SCHEMA),
    (ConfigurationException("x"), EXIT_SCHEMA),
    (NotKan("x"), EXIT_NOT_KAN),
    (NotReduced("x"), EXIT_NOT_KAN),
    (ComparisonFailed("x"), EXIT_FAILED),
])
def test_exit_codes(error, code):
    assert exit_code_for(error) == code


def test_no_command_prints_help(capsys):
    assert main([]) == EXIT_OK
    assert "differentiate" in capsys.readouterr().out


def test_catalog_listing(capsys):
    assert main(["catalog"]) == EXIT_OK
    data = stdout_json(capsys)
    assert data["schema"] == "linfdiff/1"
    assert data["kind"] == "catalog"
    assert "sl2" in [row["name"] for row in data["entries"]]


def test_catalog_entry_to_file(workspace):
    assert main(["catalog", "--catalog", "sl2", "--output", "sl2.json"]) == EXIT_OK
    data = json.loads((workspace / "sl2.json").read_text())
    assert data["kind"] == "lie"
    assert data["basis"] == ["e", "f", "h"]


def test_differentiate_input_file(workspace, capsys):
    main(["catalog", "--catalog", "nonabelian-2dim", "--output", "g.json"])
    capsys.readouterr()
    assert main(["differentiate", "--input", "g.json", "--max-word", "2", "--max-level", "2"]) == EXIT_OK
    data = stdout_json(capsys)
    assert data["kind"] == "linf"
    assert data["tangent_dims"][0] == 2
    assert data["window"] == {"max_word": 2, "max_level": 2, "top_degree": 1}
    assert data["witness"] == "canonical"
    assert len(data["brackets"]["2"]) == 1


def test_differentiate_catalog_with_save(workspace):
    code = main(["differentiate", "--catalog", "abelian-1", "--max-word", "2", "--max-level", "2",
                 "--output", "out.json", "--save"])
    assert code == EXIT_OK
    assert json.loads((workspace / "out.json").read_text())["tangent_dims"] == [1, 0]
    assert list((workspace / "output").glob("*.json"))


def test_differentiate_schema_violation(workspace):
    (workspace / "bad.json").write_text(json.dumps({"schema": "linfdiff/1", "kind": "lie", "basis": ["x", "x"]}))
    assert main(["differentiate", "--input", "bad.json"]) == EXIT_SCHEMA


def test_differentiate_invalid_json(workspace):
    (workspace / "bad.json").write_text("{")
    assert main(["differentiate", "--input", "bad.json"]) == EXIT_SCHEMA


def test_differentiate_unknown_catalog_entry():
    assert main(["differentiate", "--catalog", "so3"]) == EXIT_SCHEMA


def test_differentiate_needs_a_source():
    with pytest.raises(SystemExit):
        main(["differentiate"])


def test_verify_shuffles(capsys):
    assert main(["verify", "--suite", "shuffles", "--max-n", "4"]) == EXIT_OK
    data = stdout_json(capsys)
    assert data["kind"] == "report"
    assert data["suite"] == "shuffles"
    assert data["passed"] is True
    assert all(c["passed"] for c in data["checks"])


def test_verify_rejects_unknown_suite():
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "everything"])


def test_bad_thread_setting(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "lots")
    assert main(["catalog"]) == EXIT_SCHEMA


def test_config_file(workspace, capsys):
    (workspace / "custom.json").write_text(json.dumps({"output": {"indent": 4}}))
    assert main(["--config", "custom.json", "catalog", "--catalog", "abelian-1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert '\n    "schema"' in out
