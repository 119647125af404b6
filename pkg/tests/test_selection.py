import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from langsim import fixtures
from langsim.errors import EmptyCandidatesError, UnknownLanguageError
from langsim.metrics import DistanceMatrix, load_matrix_csv
from langsim.selection import best_source, rank_sources


@pytest.fixture(scope="module")
def sims():
    return {name: load_matrix_csv(fixtures.similarity_path(name))
            for name in ("elinguistics", "ezglot", "lang2vec", "wals")}


def test_japanese_elinguistics(sims):
    ranked = rank_sources(sims["elinguistics"], "jpn")
    assert [(e.source, e.value) for e in ranked.entries[:2]] == [("ger", 87.4), ("kor", 88.0)]
    assert ranked.direction == "ascending-distance"
    assert [e.rank for e in ranked.entries] == list(range(1, 8))


def test_danish_wals(sims):
    assert best_source(sims["wals"], "dsh") == ("eng", 0.109)


def test_korean_wals(sims):
    assert best_source(sims["wals"], "kor") == ("jpn", 0.108)


def test_polish_lang2vec(sims):
    assert best_source(sims["lang2vec"], "pol") == ("rus", 0.344)


def test_german_ezglot_row_is_source(sims):
    ranked = rank_sources(sims["ezglot"], "ger", ["eng", "dsh"])
    assert ranked.direction == "descending-similarity"
    assert [(e.source, e.value) for e in ranked.entries] == [("eng", 28.0), ("dsh", 17.0)]


def test_ezglot_missing_cells_excluded(sims):
    ranked = rank_sources(sims["ezglot"], "scr")
    assert ("dsh", "missing-cell") in ranked.excluded
    assert all(e.source != "dsh" for e in ranked.entries)


def test_singleton_and_target_dropped(sims):
    ranked = rank_sources(sims["wals"], "eng", ["eng", "kor"])
    assert [(e.source, e.rank) for e in ranked.entries] == [("kor", 1)]


def test_errors(sims):
    with pytest.raises(UnknownLanguageError, match="valid codes"):
        rank_sources(sims["wals"], "fra")
    with pytest.raises(UnknownLanguageError):
        rank_sources(sims["wals"], "eng", ["fra"])
    with pytest.raises(EmptyCandidatesError):
        rank_sources(sims["wals"], "eng", ["eng"])
    with pytest.raises(EmptyCandidatesError):
        rank_sources(sims["ezglot"], "scr", ["dsh"])


def _tied():
    cells = [[0, 1, 1], [1, 0, 2], [1, 2, 0]]
    return DistanceMatrix(("t", "b", "a"), cells, "distance", True, "tie")


def test_tie_breaks_lexicographically():
    ranked = rank_sources(_tied(), "t")
    assert [(e.source, e.rank) for e in ranked.entries] == [("a", 1), ("b", 2)]
    assert best_source(_tied(), "t", ["b", "a"]) == ("a", 1.0)


_codes = ("dsh", "eng", "ger", "scr", "pol", "rus", "jpn", "kor")


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(["elinguistics", "ezglot", "lang2vec", "wals"]),
       st.sampled_from(_codes), st.permutations(_codes), st.integers(1, 8))
def test_ranking_invariants(sims, name, target, perm, k):
    m = sims[name]
    cands = list(perm[:k])
    try:
        ranked = rank_sources(m, target, cands)
    except EmptyCandidatesError:
        return
    again = rank_sources(m, target, list(reversed(cands)))
    assert again == ranked
    assert all(e.source != target for e in ranked.entries)
    assert len(ranked.entries) + len(ranked.excluded) + (target in cands) == len(cands)
    vals = [e.value for e in ranked.entries]
    assert vals == (sorted(vals) if m.kind == "distance" else sorted(vals, reverse=True))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(["elinguistics", "lang2vec", "wals"]), st.sampled_from(_codes),
       st.sampled_from([np.sqrt, np.exp, lambda v: v ** 3 + 2.0, np.log1p]))
def test_monotone_transform_keeps_order(sims, name, target, f):
    m = sims[name]
    t = DistanceMatrix(m.languages, f(m.cells) - f(np.zeros_like(m.cells)), m.kind, m.symmetric,
                       m.provenance)
    a = [e.source for e in rank_sources(m, target).entries]
    b = [e.source for e in rank_sources(t, target).entries]
    assert a == b
