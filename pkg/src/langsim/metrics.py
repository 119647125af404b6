"""Language distance metrics and the square-matrix container they produce.

Two metrics are computed here (quantified WALS, averaged lang2vec); the
published eLinguistics and EzGlot matrices are ingested as-is through
:func:`load_matrix_csv`.

Matrix file format::

    # provenance=<tag> kind=<distance|similarity> symmetric=<true|false> [key=value ...]
    x,L1,L2,...
    L1,<cell>,<cell>,...
    ...

Missing cells are the literal ``NA``.
"""

import csv
import io
import math
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    DataFormatError,
    EmptyFileError,
    MissingCategoryError,
    MissingColumnError,
    MissingMetadataError,
    NoSharedFeaturesError,
    NotSquareError,
    SparseOverlapWarning,
    SymmetryViolationError,
    UnknownLanguageError,
    UnparseableCellError,
)
from .typology import FeatureCatalog, FeatureValueTable, shared_features

__all__ = [
    "DistanceMatrix",
    "CategoryDistances",
    "CATEGORIES",
    "WalsDistance",
    "quantified_wals_distance",
    "wals_distance_matrix",
    "lang2vec_average",
    "lang2vec_matrix",
    "load_category_distances",
    "load_matrix_csv",
    "dump_matrix_csv",
    "write_matrix_csv",
    "similarity_lookup",
]

KINDS = ("distance", "similarity")
WALS_MODES = ("mean-abs", "rms")
DEFAULT_SPARSE_THRESHOLD = 10
MISSING_TOKEN = "NA"


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Square, language-indexed matrix of distances or similarities.

    Missing cells are stored as NaN. For asymmetric matrices the row is the
    source language and the column the target.

    ``decimals`` fixes the number of fraction digits used when the matrix is
    written back out (``None`` means shortest round-trip representation);
    ``extra`` carries any additional metadata keys from the file header.
    """

    languages: tuple
    cells: np.ndarray
    kind: str = "distance"
    symmetric: bool = True
    provenance: str = ""
    decimals: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        langs = tuple(self.languages)
        object.__setattr__(self, "languages", langs)
        cells = np.array(self.cells, dtype=float)
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        n = len(langs)
        if len(set(langs)) != n:
            raise DataFormatError("duplicate language codes in matrix")
        if cells.shape != (n, n):
            raise NotSquareError(f"cells have shape {cells.shape}, expected {(n, n)}")
        if self.kind not in KINDS:
            raise DataFormatError(f"kind must be one of {KINDS}, got {self.kind!r}")
        present = ~np.isnan(cells)
        if np.any(np.isinf(cells)) or np.any(cells[present] < 0):
            raise DataFormatError("cells must be finite and non-negative")
        if self.kind == "distance":
            diag = np.diag(cells)
            bad = ~np.isnan(diag) & (diag != 0)
            if bad.any():
                i = int(np.flatnonzero(bad)[0])
                raise DataFormatError(f"distance diagonal at {langs[i]} is {diag[i]}, not 0")
        if self.symmetric:
            for i in range(n):
                for j in range(i + 1, n):
                    a, b = cells[i, j], cells[j, i]
                    if np.isnan(a) != np.isnan(b) or (not np.isnan(a) and a != b):
                        raise SymmetryViolationError(
                            f"{langs[i]}->{langs[j]}={a} but {langs[j]}->{langs[i]}={b}"
                        )

    def __len__(self):
        return len(self.languages)

    def index(self, code: str) -> int:
        try:
            return self.languages.index(code)
        except ValueError:
            raise UnknownLanguageError(code, self.languages) from None

    def missing_count(self, include_diagonal=True) -> int:
        miss = np.isnan(self.cells)
        if not include_diagonal:
            miss = miss & ~np.eye(len(self), dtype=bool)
        return int(miss.sum())

    def __eq__(self, other):
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return (
            self.languages == other.languages
            and self.kind == other.kind
            and self.symmetric == other.symmetric
            and self.provenance == other.provenance
            and self.extra == other.extra
            and self.cells.tobytes() == other.cells.tobytes()
        )

    def __repr__(self):
        return (f"DistanceMatrix(provenance={self.provenance!r}, kind={self.kind!r}, "
                f"symmetric={self.symmetric}, languages={list(self.languages)})")


def similarity_lookup(m: DistanceMatrix, source: str, target: str) -> Optional[float]:
    """Cell ``(row=source, column=target)``; ``None`` when missing."""
    v = m.cells[m.index(source), m.index(target)]
    return None if np.isnan(v) else float(v)


# --------------------------------------------------------------------------
# quantified WALS


class WalsDistance(NamedTuple):
    value: float
    n_shared: int


def _feature_differences(table, features, a, b):
    shared = shared_features(table, a, b)
    da, db = table.defined(a), table.defined(b)
    return [abs(da[f] - db[f]) / (features[f].num_categories - 1) for f in shared]


def quantified_wals_distance(
    table: FeatureValueTable,
    features: FeatureCatalog,
    a: str,
    b: str,
    mode: str = "mean-abs",
    sparse_threshold: int = DEFAULT_SPARSE_THRESHOLD,
) -> WalsDistance:
    """Distance between two languages over the features both have values for.

    Category codes are treated as ordinal. Each shared feature contributes
    ``|x - y| / (k - 1)`` where ``k`` is its declared category count, so
    every per-feature difference lies in [0, 1]. ``mode="mean-abs"`` averages
    these differences; ``mode="rms"`` returns the root of their mean square.

    Raises :class:`NoSharedFeaturesError` when the pair has no common
    feature, and emits :class:`SparseOverlapWarning` when fewer than
    ``sparse_threshold`` features are shared.
    """
    if mode not in WALS_MODES:
        raise ValueError(f"mode must be one of {WALS_MODES}, got {mode!r}")
    diffs = _feature_differences(table, features, a, b)
    n = len(diffs)
    if n == 0:
        raise NoSharedFeaturesError(f"{a} and {b} share no defined feature")
    if n < sparse_threshold:
        warnings.warn(
            f"{a}-{b} share only {n} features (threshold {sparse_threshold})",
            SparseOverlapWarning,
            stacklevel=2,
        )
    if mode == "mean-abs":
        value = math.fsum(diffs) / n
    else:
        value = math.sqrt(math.fsum(d * d for d in diffs) / n)
    return WalsDistance(value, n)


def wals_distance_matrix(
    table: FeatureValueTable,
    features: FeatureCatalog,
    languages,
    mode: str = "mean-abs",
    sparse_threshold: int = DEFAULT_SPARSE_THRESHOLD,
    return_counts: bool = False,
):
    """Symmetric quantified-WALS matrix over ``languages``.

    Pairs with no shared feature are stored as missing. With
    ``return_counts=True`` also returns an integer matrix of shared-feature
    counts (diagonal = number of features defined for the language).
    """
    languages = list(languages)
    if len(languages) < 2:
        raise ValueError("need at least two languages")
    for code in languages:
        if code not in table.languages:
            raise UnknownLanguageError(code, table.languages)
    n = len(languages)
    cells = np.zeros((n, n))
    counts = np.zeros((n, n), dtype=int)
    for i, a in enumerate(languages):
        counts[i, i] = len(table.defined(a))
        for j in range(i + 1, n):
            b = languages[j]
            try:
                d = quantified_wals_distance(table, features, a, b, mode, sparse_threshold)
            except NoSharedFeaturesError:
                cells[i, j] = cells[j, i] = np.nan
                continue
            cells[i, j] = cells[j, i] = d.value
            counts[i, j] = counts[j, i] = d.n_shared
    m = DistanceMatrix(tuple(languages), cells, "distance", True, "wals-quantified",
                       extra={"mode": mode})
    return (m, counts) if return_counts else m


# --------------------------------------------------------------------------
# averaged lang2vec

CATEGORIES = ("genetic", "geographic", "syntactic", "inventory", "phonological", "featural")


@dataclass(frozen=True)
class CategoryDistances:
    """The six lang2vec distances for one language pair; ``None`` = missing."""

    genetic: Optional[float] = None
    geographic: Optional[float] = None
    syntactic: Optional[float] = None
    inventory: Optional[float] = None
    phonological: Optional[float] = None
    featural: Optional[float] = None

    def __post_init__(self):
        for name in CATEGORIES:
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise DataFormatError(f"{name} distance {v} outside [0, 1]")

    def present(self) -> dict:
        return {c: getattr(self, c) for c in CATEGORIES if getattr(self, c) is not None}


def lang2vec_average(cd: CategoryDistances, policy: str = "strict") -> float:
    """Unweighted mean of the six category distances.

    ``strict`` requires all six; ``allow-partial`` averages whatever is
    present.
    """
    present = cd.present()
    if policy == "strict":
        absent = [c for c in CATEGORIES if c not in present]
        if absent:
            raise MissingCategoryError(f"missing categories: {', '.join(absent)}")
    elif policy != "allow-partial":
        raise ValueError(f"unknown policy {policy!r}")
    if not present:
        raise MissingCategoryError("no category distance present")
    return math.fsum(present.values()) / len(present)


def load_category_distances(path) -> dict:
    """Read ``source,target,<six categories>`` rows into ``{(a, b): CategoryDistances}``."""
    out = {}
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise EmptyFileError(f"{path}: empty file")
        need = ("source", "target") + CATEGORIES
        missing = [c for c in need if c not in reader.fieldnames]
        if missing:
            raise MissingColumnError(f"{path}: missing column(s) {', '.join(missing)}")
        for row in reader:
            vals = {}
            for c in CATEGORIES:
                raw = (row[c] or "").strip()
                if raw in ("", MISSING_TOKEN):
                    vals[c] = None
                    continue
                try:
                    vals[c] = float(raw)
                except ValueError:
                    raise UnparseableCellError(
                        f"{path}: line {reader.line_num}: cannot parse {raw!r}"
                    ) from None
            out[(row["source"].strip(), row["target"].strip())] = CategoryDistances(**vals)
    return out


def lang2vec_matrix(pairs: dict, languages, policy: str = "strict") -> DistanceMatrix:
    """Symmetric averaged-lang2vec matrix from per-pair category distances.

    A pair may be given in either orientation. Under ``allow-partial`` the
    smallest number of categories used by any pair is recorded in the
    matrix metadata as ``min_categories``.
    """
    languages = list(languages)
    n = len(languages)
    cells = np.zeros((n, n))
    min_used = len(CATEGORIES)
    for i, a in enumerate(languages):
        for j in range(i + 1, n):
            b = languages[j]
            cd = pairs.get((a, b), pairs.get((b, a)))
            if cd is None:
                cells[i, j] = cells[j, i] = np.nan
                continue
            cells[i, j] = cells[j, i] = lang2vec_average(cd, policy)
            min_used = min(min_used, len(cd.present()))
    extra = {"policy": policy}
    if policy == "allow-partial":
        extra["min_categories"] = str(min_used)
    return DistanceMatrix(tuple(languages), cells, "distance", True, "lang2vec-avg",
                          extra=extra)


# --------------------------------------------------------------------------
# matrix CSV


def _parse_meta(line, path):
    if not line.startswith("#"):
        raise MissingMetadataError(f"{path}: first line must be a '# key=value' metadata line")
    meta = {}
    for tok in line[1:].split():
        if "=" not in tok:
            raise MissingMetadataError(f"{path}: malformed metadata token {tok!r}")
        k, v = tok.split("=", 1)
        meta[k] = v
    return meta


def _fraction_digits(tok, v):
    """Fixed-point digit count that reproduces ``tok`` exactly, else None."""
    d = len(tok) - tok.index(".") - 1 if "." in tok else 0
    return d if f"{v:.{d}f}" == tok else None


def read_matrix_table(path):
    """Parse a matrix file into ``(meta, codes, cells, decimals)``; no semantic checks."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise EmptyFileError(f"{path}: empty file")
    meta = _parse_meta(lines[0], path)
    rows = list(csv.reader(lines[1:]))
    rows = [r for r in rows if r]
    if not rows:
        raise EmptyFileError(f"{path}: no header row")
    codes = [c.strip() for c in rows[0][1:]]
    body = rows[1:]
    n = len(codes)
    if len(body) != n:
        raise NotSquareError(f"{path}: {n} columns but {len(body)} rows")
    cells = np.empty((n, n))
    digits = set()
    for i, row in enumerate(body):
        if len(row) != n + 1:
            raise NotSquareError(f"{path}: row {i + 1} has {len(row) - 1} cells, expected {n}")
        if row[0].strip() != codes[i]:
            raise DataFormatError(
                f"{path}: row label {row[0]!r} does not match column {codes[i]!r}"
            )
        for j, tok in enumerate(row[1:]):
            tok = tok.strip()
            if tok == MISSING_TOKEN:
                cells[i, j] = np.nan
                continue
            try:
                v = float(tok)
            except ValueError:
                raise UnparseableCellError(
                    f"{path}: cannot parse cell {tok!r} at ({codes[i]}, {codes[j]})"
                ) from None
            if not math.isfinite(v):
                raise UnparseableCellError(f"{path}: non-finite cell at ({codes[i]}, {codes[j]})")
            cells[i, j] = v
            digits.add(_fraction_digits(tok, v))
    decimals = digits.pop() if len(digits) == 1 else None
    return meta, codes, cells, decimals


def _parse_bool(s, path):
    if s in ("true", "false"):
        return s == "true"
    raise MissingMetadataError(f"{path}: symmetric must be true or false, got {s!r}")


def load_matrix_csv(path, kind: Optional[str] = None,
                    symmetric_expected: Optional[bool] = None) -> DistanceMatrix:
    """Load a matrix file.

    ``kind`` and ``symmetric_expected`` default to the values declared in
    the metadata line; when given they must agree with it. Symmetry is
    verified exactly when the matrix is declared or expected symmetric.
    """
    meta, codes, cells, decimals = read_matrix_table(path)
    meta = dict(meta)
    if "provenance" not in meta:
        raise MissingMetadataError(f"{path}: metadata lacks provenance=")
    provenance = meta.pop("provenance")
    declared_kind = meta.pop("kind", None)
    declared_sym = meta.pop("symmetric", None)
    if kind is None:
        if declared_kind is None:
            raise MissingMetadataError(f"{path}: metadata lacks kind=")
        kind = declared_kind
    elif declared_kind is not None and declared_kind != kind:
        raise DataFormatError(f"{path}: declared kind {declared_kind!r}, expected {kind!r}")
    if declared_sym is not None:
        sym = _parse_bool(declared_sym, path)
        if symmetric_expected is not None and sym != symmetric_expected:
            raise SymmetryViolationError(
                f"{path}: declared symmetric={declared_sym}, expected {symmetric_expected}"
            )
    elif symmetric_expected is not None:
        sym = symmetric_expected
    else:
        raise MissingMetadataError(f"{path}: metadata lacks symmetric=")
    try:
        return DistanceMatrix(tuple(codes), cells, kind, sym, provenance, decimals, meta)
    except SymmetryViolationError as e:
        raise SymmetryViolationError(f"{path}: {e}") from None


def format_cell(v, decimals):
    if np.isnan(v):
        return MISSING_TOKEN
    if decimals is None:
        return repr(float(v))
    return f"{v:.{decimals}f}"


def dump_matrix_csv(m: DistanceMatrix, corner: str = "x") -> str:
    """Serialize to the matrix file format; exact inverse of :func:`load_matrix_csv`."""
    buf = io.StringIO()
    meta = [f"provenance={m.provenance}", f"kind={m.kind}",
            f"symmetric={'true' if m.symmetric else 'false'}"]
    meta += [f"{k}={v}" for k, v in m.extra.items()]
    buf.write("# " + " ".join(meta) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([corner, *m.languages])
    for i, code in enumerate(m.languages):
        w.writerow([code, *(format_cell(v, m.decimals) for v in m.cells[i])])
    return buf.getvalue()


def write_text_atomic(path, text: str):
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_matrix_csv(m: DistanceMatrix, path):
    write_text_atomic(path, dump_matrix_csv(m))
