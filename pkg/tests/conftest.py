import textwrap

import pytest

from langsim import fixtures


def write(path, text):
    path.write_text(textwrap.dedent(text).lstrip(), encoding="utf-8")
    return path


@pytest.fixture
def typology_files(tmp_path):
    """Tiny three-language catalog; two blank values are skipped on load."""
    langs = write(tmp_path / "languages.csv", """
        code,name,family,genus,iso_codes
        A,Lang A,Fam1,G1,aaa
        B,Lang B,Fam1,G2,
        C,Lang C,Fam2,G3,ccc;cce
    """)
    feats = write(tmp_path / "features.csv", """
        feature_id,name,num_categories
        f1,Feature one,3
        f2,Feature two,2
        f3,"Feature three, with comma",5
    """)
    vals = write(tmp_path / "values.csv", """
        language_code,feature_id,value_code
        A,f1,1
        A,f2,1
        B,f2,2
        B,f3,4
        C,f1,3
        C,f2,1
        C,f3,
        B,f1,
    """)
    return langs, feats, vals


@pytest.fixture(scope="session")
def fixture_dir():
    return fixtures.fixtures_dir()


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import SUMMARY, _cache

    if not SUMMARY:
        return
    terminalreporter.section("acceptance")
    for line in SUMMARY:
        terminalreporter.write_line(line)
    if "z_audit" in _cache:
        terminalreporter.write_line("z-test difference audit table:")
        for line in _cache["z_audit"].splitlines():
            terminalreporter.write_line("  " + line)
