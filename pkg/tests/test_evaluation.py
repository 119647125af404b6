import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from langsim import fixtures
from langsim.errors import (
    LanguageSetMismatchError,
    MissingMetadataError,
    NotSquareError,
    OutOfRangeScoreError,
    UnknownLanguageError,
    ZeroVarianceError,
)
from langsim.evaluation import (
    MODELS,
    TASKS,
    ScoreMatrix,
    StudyReport,
    build_pairs,
    correlation_study,
    dump_score_matrix,
    english_vs_best,
    load_score_dir,
    load_score_matrix,
    load_similarity_dir,
    source_averages,
)
from langsim.metrics import DistanceMatrix

from .conftest import write


@pytest.fixture(scope="module")
def scores():
    return load_score_dir(fixtures.scores_dir())


@pytest.fixture(scope="module")
def sims():
    return load_similarity_dir(fixtures.similarity_dir())


def _by_key(scores, task, model):
    return next(s for s in scores if s.key == (task, model))


def test_all_score_fixtures_present(scores):
    assert sorted(s.key for s in scores) == sorted(itertools.product(TASKS, MODELS))
    for s in scores:
        assert s.languages == fixtures.STUDY_LANGUAGES


def test_fixture_cells(scores):
    assert _by_key(scores, "sentiment", "mbert").score("dsh", "jpn") == 0.800
    assert _by_key(scores, "dep", "xlmr").score("kor", "kor") == 0.877
    assert _by_key(scores, "dep", "xlmr").metric_name == "las"
    assert _by_key(scores, "ner", "mbert").metric_name == "macro-f1"


def test_score_out_of_range(tmp_path):
    p = write(tmp_path / "s.csv", """
        # provenance=t task=ner model=mbert metric=macro-f1
        x,a,b
        a,0.9,1.2
        b,0.1,0.8
    """)
    with pytest.raises(OutOfRangeScoreError, match="a->b"):
        load_score_matrix(p)


def test_score_missing_metadata(tmp_path):
    p = write(tmp_path / "s.csv", "# provenance=t task=ner\nx,a\na,0.5\n")
    with pytest.raises(MissingMetadataError, match="model"):
        load_score_matrix(p)


def test_score_not_square(tmp_path):
    p = write(tmp_path / "s.csv", "# provenance=t task=ner model=xlmr\nx,a,b\na,0.5,0.5\n")
    with pytest.raises(NotSquareError):
        load_score_matrix(p)


def test_task_metric_pairing():
    with pytest.raises(ValueError):
        ScoreMatrix("dep", "mbert", ("a",), [[0.5]], "macro-f1")
    with pytest.raises(ValueError):
        ScoreMatrix("pos", "mbert", ("a",), [[0.5]])


def test_score_round_trip(scores):
    for s in scores:
        text = dump_score_matrix(s)
        assert text == (fixtures.scores_dir() / f"{s.task}_{s.model}.csv").read_text(encoding="utf-8")


# --------------------------------------------------------------------------
# pairing


def _sim(sims, provenance):
    return next(m for m in sims if m.provenance == provenance)


@pytest.mark.parametrize("prov, diag, n", [
    ("wals-quantified", True, 64),
    ("wals-quantified", False, 56),
    ("ezglot", True, 50),
    ("ezglot", False, 42),
])
def test_pair_counts(scores, sims, prov, diag, n):
    s = build_pairs(scores[0], _sim(sims, prov), diag)
    assert s.n == n
    assert len(s.labels) == n
    if not diag:
        assert all(lab[0] != lab[1] for lab in s.labels)


def test_pairs_use_source_row(scores, sims):
    s = _by_key(scores, "ner", "xlmr")
    sample = build_pairs(s, _sim(sims, "ezglot"), True)
    i = sample.labels.index(("eng", "ger", "ner", "xlmr"))
    assert sample.x[i] == 28.0
    assert sample.y[i] == s.score("eng", "ger")


def test_language_mismatch(scores):
    other = DistanceMatrix(("a", "b"), [[0, 1], [1, 0]], "distance", True, "tiny")
    with pytest.raises(LanguageSetMismatchError, match="tiny"):
        build_pairs(scores[0], other)


# --------------------------------------------------------------------------
# study report


def test_study_shape(scores, sims):
    for diag in (True, False):
        rep = correlation_study(scores, sims, diag)
        assert len(rep) == 2 * len(scores) * len(sims)
        keys = [(r.task, r.model, r.metric, r.mode, r.method) for r in rep.records]
        assert keys == sorted(keys)
    assert len(correlation_study(scores, [], True)) == 0


def test_study_excluded_counts(scores, sims):
    rep = correlation_study(scores, sims, False)
    assert rep.get("dep", "xlmr", "ezglot", "zero-shot", "spearman").excluded == 14
    assert rep.get("dep", "xlmr", "ezglot", "zero-shot", "spearman").n == 42
    assert rep.get("dep", "xlmr", "elinguistics", "zero-shot", "pearson").excluded == 0


def test_report_round_trips(scores, sims):
    rep = correlation_study(scores, sims, True) + correlation_study(scores, sims, False)
    csv_text = rep.to_csv()
    json_text = rep.to_json()
    assert StudyReport.from_csv(csv_text).to_csv() == csv_text
    assert StudyReport.from_json(json_text).to_json() == json_text
    assert StudyReport.from_csv(csv_text) == StudyReport.from_json(json_text)
    assert csv_text.splitlines()[0] == "task,model,metric,mode,method,rho,p,n,excluded"


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-3, 1e3), st.sampled_from(["elinguistics", "wals-quantified", "lang2vec-avg"]),
       st.booleans())
def test_scaling_distance_leaves_study_unchanged(scores, sims, c, prov, diag):
    m = _sim(sims, prov)
    scaled = DistanceMatrix(m.languages, m.cells * c, m.kind, m.symmetric, m.provenance)
    a = correlation_study(scores, [m], diag)
    b = correlation_study(scores, [scaled], diag)
    for ra, rb in zip(a.records, b.records):
        if ra.method == "spearman":
            assert ra.rho == rb.rho
        else:
            assert abs(ra.rho - rb.rho) <= 1e-12


# --------------------------------------------------------------------------
# reference vs best


def test_english_vs_best_on_fixtures(scores):
    res, rows = english_vs_best(scores)
    assert res.n == len(rows) == sum(len(s.languages) - 1 for s in scores) == 42
    assert all(r.target != "eng" for r in rows)
    assert all(r.diff <= 0 for r in rows)
    assert res.z < -1.96 and res.p_value < 0.05


def test_diffs_match_exhaustive_scan(scores):
    _, rows = english_vs_best(scores)
    it = iter(rows)
    for s in scores:
        for t, tgt in enumerate(s.languages):
            if tgt == "eng":
                continue
            best = max(s.cells[i, t] for i in range(len(s.languages)) if i != t)
            row = next(it)
            assert row.best_score == best
            assert row.diff == s.score("eng", tgt) - best


def _reference_best_matrices():
    langs = ("r", "a", "b", "c")
    rng = np.random.default_rng(7)
    mats = []
    for task in TASKS:
        cells = rng.uniform(0.1, 0.5, size=(4, 4))
        cells[0, :] = 0.9
        mats.append(ScoreMatrix(task, "mbert", langs, cells))
    return mats


def test_reference_everywhere_best():
    # the reference competes for the maximum, so every difference is exactly 0
    with pytest.raises(ZeroVarianceError):
        english_vs_best(_reference_best_matrices(), "r")
    res, rows = english_vs_best(_reference_best_matrices(), "r", exclude_reference=True)
    assert all(r.diff > 0 for r in rows)
    assert all(r.best_source != "r" for r in rows)
    assert res.z >= 0


def test_three_language_hand_case():
    # rows = source, columns = target
    cells = [[0.9, 0.6, 0.5],
             [0.7, 0.8, 0.4],
             [0.2, 0.65, 0.95]]
    s = ScoreMatrix("ner", "xlmr", ("eng", "b", "c"), cells)
    res, rows = english_vs_best([s])
    # target b: eng 0.6 vs best of {eng 0.6, c 0.65} -> -0.05 (c)
    # target c: eng 0.5 vs best of {eng 0.5, b 0.4} -> 0.0 (eng)
    assert [(r.target, r.best_source) for r in rows] == [("b", "c"), ("c", "eng")]
    assert [r.diff for r in rows] == [0.6 - 0.65, 0.0]
    assert res.n == 2
    _, rows = english_vs_best([s], exclude_reference=True)
    # with the reference left out: b -> c 0.65, c -> b 0.4
    assert [r.diff for r in rows] == [0.6 - 0.65, 0.5 - 0.4]


def test_reference_missing(scores):
    with pytest.raises(UnknownLanguageError):
        english_vs_best(scores, "fra")


def test_source_averages(scores):
    avg = source_averages(scores)
    s = _by_key(scores, "dep", "mbert")
    assert avg[("dep", "mbert")]["eng"] == pytest.approx(float(np.mean(s.cells[1])))
