import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from langsim import fixtures
from langsim.errors import (
    DuplicateCodeError,
    DuplicateFeatureIdError,
    EmptyFileError,
    InvalidCategoryCountError,
    MissingColumnError,
    UnknownFeatureError,
    UnknownLanguageError,
    ValueOutOfRangeError,
)
from langsim.typology import (
    FeatureCatalog,
    FeatureSpec,
    FeatureValueTable,
    LanguageCatalog,
    LanguageRecord,
    convert_cldf,
    load_features,
    load_languages,
    load_values,
    shared_features,
    write_features,
    write_languages,
    write_values,
)

from .conftest import write


def test_study_language_catalog():
    cat = load_languages(fixtures.languages_path())
    assert len(cat) == 8
    assert cat.codes == list(fixtures.STUDY_LANGUAGES)
    assert len(cat.families()) == 3
    assert cat["scr"].iso_codes == ("hrv", "srp", "bos")


def test_languages_header_only(tmp_path):
    p = write(tmp_path / "l.csv", "code,name,family,genus\n")
    with pytest.raises(EmptyFileError):
        load_languages(p)


def test_languages_duplicate_code(tmp_path):
    p = write(tmp_path / "l.csv", """
        code,name,family,genus
        eng,English,IE,Germanic
        eng,English again,IE,Germanic
    """)
    with pytest.raises(DuplicateCodeError, match=r"'eng' on line 3"):
        load_languages(p)


def test_languages_missing_column(tmp_path):
    p = write(tmp_path / "l.csv", "code,name,family\neng,English,IE\n")
    with pytest.raises(MissingColumnError, match="genus"):
        load_languages(p)


def test_feature_row_parses(tmp_path):
    p = write(tmp_path / "f.csv", """
        feature_id,name,num_categories
        81A,Order of Subject Object and Verb,7
    """)
    cat = load_features(p)
    assert cat["81A"] == FeatureSpec("81A", "Order of Subject Object and Verb", 7)


@pytest.mark.parametrize("k", ["1", "0", "two", "2.5"])
def test_invalid_category_count(tmp_path, k):
    p = write(tmp_path / "f.csv", f"feature_id,name,num_categories\n1A,x,{k}\n")
    with pytest.raises(InvalidCategoryCountError):
        load_features(p)


def test_duplicate_feature(tmp_path):
    p = write(tmp_path / "f.csv", "feature_id,name,num_categories\n1A,x,3\n1A,y,4\n")
    with pytest.raises(DuplicateFeatureIdError):
        load_features(p)


def test_load_values(typology_files):
    langs, feats, vals = typology_files
    t = load_values(vals, load_languages(langs), load_features(feats))
    assert len(t) == 6
    assert t.n_skipped == 2
    assert t.get("A", "f1") == 1
    assert t.get("C", "f3") is None
    assert t.density == pytest.approx(6 / 9)


@pytest.mark.parametrize(
    "row, exc, line",
    [
        ("A,f1,9", ValueOutOfRangeError, 2),
        ("A,f1,0", ValueOutOfRangeError, 2),
        ("Z,f1,1", UnknownLanguageError, 2),
        ("A,zz,1", UnknownFeatureError, 2),
    ],
)
def test_value_errors_report_line(typology_files, tmp_path, row, exc, line):
    langs, feats, _ = typology_files
    p = write(tmp_path / "v.csv", f"language_code,feature_id,value_code\n{row}\n")
    with pytest.raises(exc, match=f"line {line}"):
        load_values(p, load_languages(langs), load_features(feats))


def test_in_range_value_stored(tmp_path):
    langs = LanguageCatalog([LanguageRecord("eng", "English", "IE", "Germanic")])
    feats = FeatureCatalog([FeatureSpec("81A", "SOV", 7)])
    p = write(tmp_path / "v.csv", "language_code,feature_id,value_code\neng,81A,2\n")
    assert load_values(p, langs, feats).get("eng", "81A") == 2
    p = write(tmp_path / "v.csv", "language_code,feature_id,value_code\neng,81A,9\n")
    with pytest.raises(ValueOutOfRangeError):
        load_values(p, langs, feats)


def test_shared_features(typology_files):
    langs, feats, vals = typology_files
    t = load_values(vals, load_languages(langs), load_features(feats))
    assert shared_features(t, "A", "B") == ["f2"]
    assert shared_features(t, "A", "A") == ["f1", "f2"]
    assert shared_features(t, "B", "C") == ["f2"]
    with pytest.raises(UnknownLanguageError):
        shared_features(t, "A", "Q")


def test_values_round_trip(typology_files, tmp_path):
    langs, feats, vals = typology_files
    lc, fc = load_languages(langs), load_features(feats)
    t = load_values(vals, lc, fc)
    out = tmp_path / "out"
    out.mkdir()
    write_languages(lc, out / "l.csv")
    write_features(fc, out / "f.csv")
    write_values(t, out / "v.csv")
    lc2, fc2 = load_languages(out / "l.csv"), load_features(out / "f.csv")
    t2 = load_values(out / "v.csv", lc2, fc2)
    assert t2 == t
    assert list(lc2.values()) == list(lc.values())


# random sparse tables for the set-algebra properties
_codes = [f"L{i}" for i in range(5)]
_feats = [FeatureSpec(f"{i}A", f"feat {i}", k) for i, k in enumerate([2, 3, 4, 5, 7, 2])]


@st.composite
def tables(draw):
    entries = {}
    for lang in _codes:
        for f in _feats:
            if draw(st.booleans()):
                entries[(lang, f.feature_id)] = draw(st.integers(1, f.num_categories))
    return FeatureValueTable.from_entries(
        LanguageCatalog([LanguageRecord(c, c, "F", "G") for c in _codes]),
        FeatureCatalog(_feats),
        entries,
    )


@settings(max_examples=200, deadline=None)
@given(tables(), st.sampled_from(_codes), st.sampled_from(_codes))
def test_shared_features_properties(t, a, b):
    ab = shared_features(t, a, b)
    assert ab == shared_features(t, b, a)
    assert ab == sorted(ab)
    assert len(ab) <= min(len(t.defined(a)), len(t.defined(b)))


@settings(max_examples=50, deadline=None)
@given(tables())
def test_table_round_trip_property(tmp_path_factory, t):
    d = tmp_path_factory.mktemp("rt")
    write_values(t, d / "v.csv")
    try:
        again = load_values(d / "v.csv", t.languages, t.features)
    except EmptyFileError:
        assert len(t) == 0
        return
    assert again == t


def test_convert_cldf(tmp_path):
    src = tmp_path / "cldf"
    src.mkdir()
    write(src / "languages.csv", """
        ID,Name,Macroarea,Latitude,Longitude,Glottocode,ISO639P3code,Family,Subfamily,Genus
        eng,English,Eurasia,52,0,stan1293,eng,Indo-European,,Germanic
        ger,German,Eurasia,52,10,stan1295,deu,Indo-European,,Germanic
    """)
    write(src / "parameters.csv", """
        ID,Name,Description
        81A,Order of Subject Object and Verb,
        1A,Consonant Inventories,
        99Z,Single-valued,
    """)
    write(src / "codes.csv", """
        ID,Parameter_ID,Name,Description,Number
        81A-1,81A,SOV,,1
        81A-2,81A,SVO,,2
        81A-3,81A,VSO,,3
        1A-1,1A,Small,,1
        1A-2,1A,Average,,2
        99Z-1,99Z,Only,,1
    """)
    write(src / "values.csv", """
        ID,Language_ID,Parameter_ID,Value,Code_ID,Comment,Source
        81A-eng,eng,81A,2,81A-2,,
        81A-ger,ger,81A,1,81A-1,,
        1A-eng,eng,1A,2,1A-2,,
        99Z-eng,eng,99Z,1,99Z-1,,
    """)
    lp, fp, vp = convert_cldf(src, tmp_path / "out")
    langs = load_languages(lp)
    feats = load_features(fp)
    assert list(feats) == ["81A", "1A"]
    assert feats["81A"].num_categories == 3
    t = load_values(vp, langs, feats)
    assert shared_features(t, "eng", "ger") == ["81A"]
    assert langs["ger"].iso_codes == ("deu",)
