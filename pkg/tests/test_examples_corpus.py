"""Every shipped example spec must run clean: exit 0 and, where the report
carries certifications, every residual within its declared tolerance."""

import json
import pathlib

import pytest

from halfplane.cli import main

CORPUS = sorted((pathlib.Path(__file__).parent.parent / "cli_examples").glob("*.json"))


def command_for(path):
    body = json.loads(path.read_text())
    task = next(k for k in body if k not in ("version", "options"))
    if task in ("nevanlinna", "krein", "product"):
        return "factor" if path.name.startswith("factor") else "eval"
    return "solve"


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_example_spec(path, capsys, tmp_path):
    out = tmp_path / "report.json"
    code = main([command_for(path), "--spec", str(path), "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    for cert in report.get("certifications", []):
        assert cert["pass"], cert
        assert cert["residual"] <= cert["tolerance"], cert


def test_corpus_is_nonempty():
    assert len(CORPUS) >= 8
