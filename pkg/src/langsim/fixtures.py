"""Locate the bundled data fixtures (overridable with ``LANGSIM_FIXTURES``)."""

import os
from pathlib import Path

ENV_VAR = "LANGSIM_FIXTURES"

# the eight study languages, WALS codes
STUDY_LANGUAGES = ("dsh", "eng", "ger", "scr", "pol", "rus", "jpn", "kor")


def fixtures_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "fixtures"


def scores_dir() -> Path:
    return fixtures_dir() / "scores"


def similarity_dir() -> Path:
    return fixtures_dir() / "similarity"


def similarity_path(name: str) -> Path:
    """Path of a bundled similarity matrix: elinguistics, ezglot, lang2vec or wals."""
    return similarity_dir() / f"{name}.csv"


def score_path(task: str, model: str) -> Path:
    return scores_dir() / f"{task}_{model}.csv"


def languages_path() -> Path:
    return fixtures_dir() / "languages.csv"
