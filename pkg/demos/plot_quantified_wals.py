"""
Quantified WALS distance on a toy table
=======================================

Build a small feature table by hand and compute the pairwise distance,
which uses only the features both languages define.
"""

import warnings

from langsim.errors import SparseOverlapWarning
from langsim.metrics import quantified_wals_distance, wals_distance_matrix
from langsim.typology import (
    FeatureCatalog,
    FeatureSpec,
    FeatureValueTable,
    LanguageCatalog,
    LanguageRecord,
    shared_features,
)

langs = LanguageCatalog([LanguageRecord(c, c.upper(), "Toy", "Toy") for c in ("aa", "bb", "cc")])
feats = FeatureCatalog([
    FeatureSpec("81A", "word order", 7),
    FeatureSpec("1A", "consonant inventory", 5),
    FeatureSpec("13A", "tone", 3),
])
table = FeatureValueTable.from_entries(langs, feats, {
    ("aa", "81A"): 1, ("aa", "1A"): 3, ("aa", "13A"): 1,
    ("bb", "81A"): 2, ("bb", "1A"): 3,
    ("cc", "81A"): 1, ("cc", "13A"): 3,
})

###############################################################################
# Each shared feature contributes |x - y| / (k - 1).
for a, b in (("aa", "bb"), ("aa", "cc"), ("bb", "cc")):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SparseOverlapWarning)
        d = quantified_wals_distance(table, feats, a, b)
    print(a, b, shared_features(table, a, b), f"{d.value:.4f}")

###############################################################################
# The matrix form, with the shared-feature counts alongside.
with warnings.catch_warnings():
    warnings.simplefilter("ignore", SparseOverlapWarning)
    m, counts = wals_distance_matrix(table, feats, ["aa", "bb", "cc"], return_counts=True)
print(m.cells.round(4))
print(counts)
