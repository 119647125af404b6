"""Typological data store: language catalog, feature catalog and the sparse
language x feature value table.

All three inputs are plain comma-separated files with a header row::

    languages.csv   code,name,family,genus[,iso_codes]
    features.csv    feature_id,name,num_categories
    values.csv      language_code,feature_id,value_code

Blank ``value_code`` cells are missing data. They are skipped and counted,
never read as zero.
"""

import csv
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import (
    DuplicateCodeError,
    DuplicateFeatureIdError,
    EmptyFileError,
    InvalidCategoryCountError,
    MissingColumnError,
    UnknownFeatureError,
    UnknownLanguageError,
    ValueOutOfRangeError,
)

__all__ = [
    "LanguageRecord",
    "FeatureSpec",
    "LanguageCatalog",
    "FeatureCatalog",
    "FeatureValueTable",
    "load_languages",
    "load_features",
    "load_values",
    "write_languages",
    "write_features",
    "write_values",
    "shared_features",
    "convert_cldf",
]


@dataclass(frozen=True)
class LanguageRecord:
    code: str
    name: str
    family: str
    genus: str
    iso_codes: tuple = ()


@dataclass(frozen=True)
class FeatureSpec:
    feature_id: str
    name: str
    num_categories: int


class _Catalog(Mapping):
    """Read-only ordered mapping from key to record."""

    def __init__(self, records, key):
        self._records = {getattr(r, key): r for r in records}

    def __getitem__(self, k):
        return self._records[k]

    def __iter__(self):
        return iter(self._records)

    def __len__(self):
        return len(self._records)

    def __repr__(self):
        return f"{type(self).__name__}({list(self._records)})"


class LanguageCatalog(_Catalog):
    def __init__(self, records: Iterable[LanguageRecord]):
        super().__init__(records, "code")

    @property
    def codes(self) -> list:
        return list(self)

    def families(self) -> set:
        return {r.family for r in self.values()}


class FeatureCatalog(_Catalog):
    def __init__(self, records: Iterable[FeatureSpec]):
        super().__init__(records, "feature_id")

    def num_categories(self, feature_id: str) -> int:
        return self[feature_id].num_categories


@dataclass(frozen=True, eq=False)
class FeatureValueTable:
    """Sparse store of category codes keyed by (language code, feature id).

    ``n_skipped`` counts the rows of the source file whose value was blank.
    """

    languages: LanguageCatalog
    features: FeatureCatalog
    _by_language: dict = field(repr=False)
    n_skipped: int = 0

    @classmethod
    def from_entries(cls, languages, features, entries, n_skipped=0):
        """Build a table from ``{(lang, feature_id): value}``, validating every entry."""
        by_lang = {code: {} for code in languages}
        for (lang, fid), v in entries.items():
            _check_entry(languages, features, lang, fid, v)
            by_lang[lang][fid] = int(v)
        return cls(languages, features, by_lang, n_skipped)

    def get(self, lang: str, feature_id: str):
        """Category code, or ``None`` when the value is missing."""
        if lang not in self.languages:
            raise UnknownLanguageError(lang)
        return self._by_language[lang].get(feature_id)

    def defined(self, lang: str) -> dict:
        """All defined values for ``lang`` as ``{feature_id: code}``."""
        if lang not in self.languages:
            raise UnknownLanguageError(lang)
        return dict(self._by_language[lang])

    def entries(self) -> Iterator[tuple]:
        """Yield ``(lang, feature_id, value)`` in catalog order."""
        for lang in self.languages:
            row = self._by_language[lang]
            for fid in self.features:
                if fid in row:
                    yield lang, fid, row[fid]

    def __len__(self):
        return sum(len(v) for v in self._by_language.values())

    @property
    def density(self) -> float:
        cells = len(self.languages) * len(self.features)
        return len(self) / cells if cells else 0.0

    def __eq__(self, other):
        if not isinstance(other, FeatureValueTable):
            return NotImplemented
        return (
            list(self.languages.values()) == list(other.languages.values())
            and list(self.features.values()) == list(other.features.values())
            and self._by_language == other._by_language
        )


def _check_entry(languages, features, lang, fid, v, line=None):
    where = f" (line {line})" if line is not None else ""
    if lang not in languages:
        raise UnknownLanguageError(lang, line=line)
    if fid not in features:
        raise UnknownFeatureError(f"unknown feature {fid!r}{where}")
    k = features[fid].num_categories
    if not 1 <= v <= k:
        raise ValueOutOfRangeError(
            f"value {v} for feature {fid} outside 1..{k}{where}"
        )


def _read_rows(path, required):
    """Yield ``(line_number, row_dict)`` after checking the header."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames
        if header is None:
            raise EmptyFileError(f"{path}: empty file")
        header = [h.strip() for h in header]
        reader.fieldnames = header
        missing = [c for c in required if c not in header]
        if missing:
            raise MissingColumnError(f"{path}: missing column(s) {', '.join(missing)}")
        rows = [(reader.line_num, {k: (v or "").strip() for k, v in row.items() if k})
                for row in reader]
    if not rows:
        raise EmptyFileError(f"{path}: header only, no data rows")
    return rows


def load_languages(path) -> LanguageCatalog:
    records = []
    seen = {}
    for line, row in _read_rows(path, ("code", "name", "family", "genus")):
        code = row["code"]
        if not code:
            raise DuplicateCodeError(f"{path}: empty language code on line {line}")
        if code in seen:
            raise DuplicateCodeError(
                f"{path}: duplicate code {code!r} on line {line} (first on line {seen[code]})"
            )
        seen[code] = line
        iso = tuple(s for s in row.get("iso_codes", "").split(";") if s)
        records.append(LanguageRecord(code, row["name"], row["family"], row["genus"], iso))
    return LanguageCatalog(records)


def load_features(path) -> FeatureCatalog:
    records = []
    seen = set()
    for line, row in _read_rows(path, ("feature_id", "name", "num_categories")):
        fid = row["feature_id"]
        if fid in seen:
            raise DuplicateFeatureIdError(f"{path}: duplicate feature {fid!r} on line {line}")
        seen.add(fid)
        try:
            k = int(row["num_categories"])
        except ValueError:
            raise InvalidCategoryCountError(
                f"{path}: non-integer category count {row['num_categories']!r} on line {line}"
            ) from None
        if k < 2:
            raise InvalidCategoryCountError(
                f"{path}: feature {fid} declares {k} categories on line {line}; need >= 2"
            )
        records.append(FeatureSpec(fid, row["name"], k))
    return FeatureCatalog(records)


def load_values(path, languages: LanguageCatalog, features: FeatureCatalog) -> FeatureValueTable:
    by_lang = {code: {} for code in languages}
    skipped = 0
    for line, row in _read_rows(path, ("language_code", "feature_id", "value_code")):
        raw = row["value_code"]
        lang, fid = row["language_code"], row["feature_id"]
        if not raw:
            skipped += 1
            continue
        try:
            v = int(raw)
        except ValueError:
            raise ValueOutOfRangeError(
                f"{path}: non-integer value {raw!r} on line {line}"
            ) from None
        _check_entry(languages, features, lang, fid, v, line=line)
        by_lang[lang][fid] = v
    return FeatureValueTable(languages, features, by_lang, skipped)


def _atomic_csv(path, header, rows):
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    with open(tmp, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    os.replace(tmp, path)


def write_languages(catalog: LanguageCatalog, path):
    _atomic_csv(path, ["code", "name", "family", "genus", "iso_codes"],
                ([r.code, r.name, r.family, r.genus, ";".join(r.iso_codes)]
                 for r in catalog.values()))


def write_features(catalog: FeatureCatalog, path):
    _atomic_csv(path, ["feature_id", "name", "num_categories"],
                ([f.feature_id, f.name, f.num_categories] for f in catalog.values()))


def write_values(table: FeatureValueTable, path):
    _atomic_csv(path, ["language_code", "feature_id", "value_code"], table.entries())


def shared_features(table: FeatureValueTable, a: str, b: str) -> list:
    """Feature ids defined for both ``a`` and ``b``, sorted lexicographically.

    The feature set is chosen per pair, so two pairs of languages are
    generally compared on different features.
    """
    da = table.defined(a)
    db = table.defined(b)
    return sorted(da.keys() & db.keys())


def convert_cldf(cldf_dir, out_dir) -> tuple:
    """Convert a WALS CLDF export into the three long-format input files.

    Reads ``languages.csv``, ``parameters.csv``, ``codes.csv`` and
    ``values.csv`` from ``cldf_dir``. The category count of each feature is
    taken from the code table, not from observed values. Returns the paths of
    the written ``(languages, features, values)`` files.
    """
    cldf_dir = Path(cldf_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def rows(name):
        with open(cldf_dir / name, newline="", encoding="utf-8") as f:
            return list(csv.DictReader(f))

    langs = []
    for r in rows("languages.csv"):
        iso = r.get("ISO639P3code") or r.get("ISO_codes") or ""
        langs.append([r["ID"], r.get("Name", ""), r.get("Family", ""), r.get("Genus", ""),
                      ";".join(s for s in iso.replace(" ", ";").split(";") if s)])

    codes = {}
    for r in rows("codes.csv"):
        codes.setdefault(r["Parameter_ID"], set()).add(r["ID"])
    feats = []
    for r in rows("parameters.csv"):
        k = len(codes.get(r["ID"], ()))
        if k >= 2:
            feats.append([r["ID"], r.get("Name", ""), k])

    known = {f[0] for f in feats}
    vals = []
    for r in rows("values.csv"):
        if r["Parameter_ID"] not in known:
            continue
        vals.append([r["Language_ID"], r["Parameter_ID"], r.get("Value", "")])

    paths = (out_dir / "languages.csv", out_dir / "features.csv", out_dir / "values.csv")
    _atomic_csv(paths[0], ["code", "name", "family", "genus", "iso_codes"], langs)
    _atomic_csv(paths[1], ["feature_id", "name", "num_categories"], feats)
    _atomic_csv(paths[2], ["language_code", "feature_id", "value_code"], vals)
    return paths
