"""Transfer-score matrices and the similarity/performance correlation study.

Score files use the matrix file format from :mod:`langsim.metrics` with
``task=`` and ``model=`` metadata; rows are source languages, columns are
targets.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    DataFormatError,
    LanguageSetMismatchError,
    MissingMetadataError,
    OutOfRangeScoreError,
    UnknownLanguageError,
)
from .metrics import DistanceMatrix, format_cell, load_matrix_csv, read_matrix_table
from .stats import PairedSample, ZTestResult, format_p, paired_z_test, pearson, spearman

__all__ = [
    "TASKS",
    "MODELS",
    "ScoreMatrix",
    "StudyRecord",
    "StudyReport",
    "DiffRow",
    "load_score_matrix",
    "dump_score_matrix",
    "load_score_dir",
    "load_similarity_dir",
    "build_pairs",
    "correlation_study",
    "english_vs_best",
    "source_averages",
]

TASKS = ("sentiment", "ner", "dep")
MODELS = ("mbert", "xlmr")
TASK_METRIC = {"sentiment": "macro-f1", "ner": "macro-f1", "dep": "las"}
MODE_FULL = "full"
MODE_ZERO_SHOT = "zero-shot"


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """Transfer performance, ``cells[source, target]`` in [0, 1]."""

    task: str
    model: str
    languages: tuple
    cells: np.ndarray
    metric_name: str = ""
    provenance: str = ""
    decimals: Optional[int] = None

    def __post_init__(self):
        if self.task not in TASKS:
            raise DataFormatError(f"unknown task {self.task!r}; expected one of {TASKS}")
        if self.model not in MODELS:
            raise DataFormatError(f"unknown model {self.model!r}; expected one of {MODELS}")
        metric = self.metric_name or TASK_METRIC[self.task]
        if metric != TASK_METRIC[self.task]:
            raise DataFormatError(f"task {self.task} is scored by {TASK_METRIC[self.task]}, not {metric}")
        object.__setattr__(self, "metric_name", metric)
        if not self.provenance:
            object.__setattr__(self, "provenance", f"scores-{self.task}-{self.model}")
        langs = tuple(self.languages)
        cells = np.array(self.cells, dtype=float)
        cells.setflags(write=False)
        n = len(langs)
        if cells.shape != (n, n):
            raise DataFormatError(f"score cells have shape {cells.shape}, expected {(n, n)}")
        bad = ~((cells >= 0.0) & (cells <= 1.0))
        if bad.any():
            i, j = map(int, np.argwhere(bad)[0])
            raise OutOfRangeScoreError(
                f"score {langs[i]}->{langs[j]} = {cells[i, j]} is missing or outside [0, 1]"
            )
        object.__setattr__(self, "languages", langs)
        object.__setattr__(self, "cells", cells)

    def score(self, source: str, target: str) -> float:
        try:
            return float(self.cells[self.languages.index(source), self.languages.index(target)])
        except ValueError:
            bad = source if source not in self.languages else target
            raise UnknownLanguageError(bad, self.languages) from None

    @property
    def key(self) -> tuple:
        return (self.task, self.model)


def load_score_matrix(path) -> ScoreMatrix:
    meta, codes, cells, decimals = read_matrix_table(path)
    for k in ("task", "model"):
        if k not in meta:
            raise MissingMetadataError(f"{path}: metadata lacks {k}=")
    try:
        return ScoreMatrix(meta["task"], meta["model"], tuple(codes), cells,
                           meta.get("metric", ""), meta.get("provenance", ""), decimals)
    except DataFormatError as e:
        raise type(e)(f"{path}: {e}") from None


def dump_score_matrix(s: ScoreMatrix) -> str:
    buf = io.StringIO()
    buf.write(f"# provenance={s.provenance} task={s.task} model={s.model} metric={s.metric_name}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", *s.languages])
    for i, code in enumerate(s.languages):
        w.writerow([code, *(format_cell(v, s.decimals) for v in s.cells[i])])
    return buf.getvalue()


def load_score_dir(directory) -> list:
    """Every ``*.csv`` score matrix in ``directory``, in filename order."""
    return [load_score_matrix(p) for p in sorted(Path(directory).glob("*.csv"))]


def load_similarity_dir(directory) -> list:
    return [load_matrix_csv(p) for p in sorted(Path(directory).glob("*.csv"))]


# --------------------------------------------------------------------------
# pairing and correlation


def _check_languages(scores: ScoreMatrix, sim: DistanceMatrix):
    if set(scores.languages) != set(sim.languages):
        raise LanguageSetMismatchError(
            f"score languages {sorted(scores.languages)} differ from "
            f"similarity languages {sorted(sim.languages)} ({sim.provenance})"
        )


def build_pairs(scores: ScoreMatrix, sim: DistanceMatrix, include_diagonal: bool = True) -> PairedSample:
    """One ``(similarity, score)`` point per source/target cell with a similarity value.

    Cells are visited in the score matrix's row-major order. Cells whose
    similarity is missing are dropped; with ``include_diagonal=False`` the
    monolingual ``source == target`` cells are dropped too.
    """
    _check_languages(scores, sim)
    idx = [sim.index(c) for c in scores.languages]
    xs, ys, labels = [], [], []
    for i, src in enumerate(scores.languages):
        for j, tgt in enumerate(scores.languages):
            if i == j and not include_diagonal:
                continue
            x = sim.cells[idx[i], idx[j]]
            if np.isnan(x):
                continue
            xs.append(x)
            ys.append(scores.cells[i, j])
            labels.append((src, tgt, scores.task, scores.model))
    return PairedSample(np.array(xs), np.array(ys), tuple(labels))


class StudyRecord(NamedTuple):
    task: str
    model: str
    metric: str
    mode: str
    method: str
    rho: float
    p: float
    n: int
    excluded: int

    @property
    def significant(self) -> bool:
        return self.p < 0.05


_FIELDS = StudyRecord._fields


@dataclass(frozen=True)
class StudyReport:
    """Flat list of correlation results, one record per (cell, method)."""

    records: tuple = field(default=())
    digits: int = 3

    def __len__(self):
        return len(self.records)

    def __add__(self, other):
        return StudyReport(_sorted(self.records + other.records), self.digits)

    def get(self, task, model, metric, mode, method) -> StudyRecord:
        for r in self.records:
            if (r.task, r.model, r.metric, r.mode, r.method) == (task, model, metric, mode, method):
                return r
        raise KeyError((task, model, metric, mode, method))

    def _rows(self):
        for r in self.records:
            yield [r.task, r.model, r.metric, r.mode, r.method,
                   f"{r.rho:.{self.digits}f}", format_p(r.p, self.digits), r.n, r.excluded]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_FIELDS)
        w.writerows(self._rows())
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [
            {"task": t, "model": m, "metric": me, "mode": mo, "method": meth,
             "rho": float(rho), "p": float(p), "n": n, "excluded": ex}
            for t, m, me, mo, meth, rho, p, n, ex in self._rows()
        ]
        return json.dumps({"digits": self.digits, "rows": rows}, indent=2) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "StudyReport":
        reader = csv.DictReader(io.StringIO(text))
        recs = []
        digits = None
        for row in reader:
            if digits is None:
                digits = len(row["rho"].split(".")[1]) if "." in row["rho"] else 0
            recs.append(_record(row))
        return cls(tuple(recs), 3 if digits is None else digits)

    @classmethod
    def from_json(cls, text: str) -> "StudyReport":
        doc = json.loads(text)
        return cls(tuple(_record(r) for r in doc["rows"]), doc["digits"])


def _record(row) -> StudyRecord:
    return StudyRecord(row["task"], row["model"], row["metric"], row["mode"], row["method"],
                       float(row["rho"]), float(row["p"]), int(row["n"]), int(row["excluded"]))


def _sorted(records):
    return tuple(sorted(records, key=lambda r: (r.task, r.model, r.metric, r.mode, r.method)))


def correlation_study(scores, sims, include_diagonal: bool = True) -> StudyReport:
    """Pearson and Spearman for every (score matrix, similarity matrix) pair."""
    mode = MODE_FULL if include_diagonal else MODE_ZERO_SHOT
    records = []
    for s in scores:
        for m in sims:
            sample = build_pairs(s, m, include_diagonal)
            n_cells = len(s.languages) ** 2 - (0 if include_diagonal else len(s.languages))
            excluded = n_cells - sample.n
            for res in (pearson(sample), spearman(sample)):
                records.append(StudyRecord(s.task, s.model, m.provenance, mode, res.method,
                                           res.rho, res.p_value, res.n, excluded))
    return StudyReport(_sorted(records))


# --------------------------------------------------------------------------
# reference source vs best source


class DiffRow(NamedTuple):
    task: str
    model: str
    target: str
    reference_score: float
    best_source: str
    best_score: float
    diff: float


def english_vs_best(scores, reference_source: str = "eng", exclude_reference: bool = False) -> tuple:
    """Paired z-test of the reference source against the best zero-shot source.

    For each matrix and each target other than the reference language,
    ``d = score(reference -> target) - max_{s != target} score(s -> target)``.
    By default the reference itself is a candidate for the maximum, so
    ``d <= 0``. With ``exclude_reference=True`` the maximum runs over the
    other sources only, and ``d > 0`` where the reference wins.
    Returns ``(ZTestResult, tuple of DiffRow)``.
    """
    rows = []
    for s in scores:
        if reference_source not in s.languages:
            raise UnknownLanguageError(reference_source, s.languages)
        for tgt in s.languages:
            if tgt == reference_source:
                continue
            best, best_score = None, -np.inf
            for src in sorted(s.languages):
                if src == tgt or (exclude_reference and src == reference_source):
                    continue
                v = s.score(src, tgt)
                if v > best_score:
                    best, best_score = src, v
            ref = s.score(reference_source, tgt)
            rows.append(DiffRow(s.task, s.model, tgt, ref, best, best_score, ref - best_score))
    result: ZTestResult = paired_z_test([r.diff for r in rows])
    return result, tuple(rows)


def diffs_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DiffRow._fields)
    for r in rows:
        w.writerow([r.task, r.model, r.target, f"{r.reference_score:.3f}", r.best_source,
                    f"{r.best_score:.3f}", f"{r.diff:.3f}"])
    return buf.getvalue()


def source_averages(scores) -> dict:
    """Mean score of each source row, keyed by ``(task, model)``."""
    return {s.key: dict(zip(s.languages, s.cells.mean(axis=1).tolist())) for s in scores}
