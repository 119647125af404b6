"""
Choosing a transfer source by similarity
========================================

Rank candidate source languages for each target under every bundled
similarity matrix, and compare the pick with the source that actually
scored best.
"""

from langsim import fixtures
from langsim.evaluation import load_score_matrix
from langsim.metrics import load_matrix_csv
from langsim.selection import rank_sources

###############################################################################
# Load the four matrices. eLinguistics, lang2vec and WALS are distances,
# EzGlot is a similarity read with row = source.
sims = {name: load_matrix_csv(fixtures.similarity_path(name))
        for name in ("elinguistics", "ezglot", "lang2vec", "wals")}
for name, m in sims.items():
    print(f"{name:13s} kind={m.kind:10s} symmetric={m.symmetric} missing={m.missing_count()}")

###############################################################################
# Japanese is far from everything in eLinguistics; German edges out Korean.
for e in rank_sources(sims["elinguistics"], "jpn").entries[:3]:
    print(e.rank, e.source, e.value)

###############################################################################
# For each target, the top pick per matrix next to the best observed source
# in the dependency parsing scores.
scores = load_score_matrix(fixtures.score_path("dep", "xlmr"))
print("target  " + "  ".join(f"{n:>12s}" for n in sims) + "      observed")
for t in scores.languages:
    picks = []
    for m in sims.values():
        picks.append(rank_sources(m, t).entries[0].source)
    observed = max((s for s in scores.languages if s != t), key=lambda s: scores.score(s, t))
    print(f"{t:6s}  " + "  ".join(f"{p:>12s}" for p in picks) + f"  {observed:>12s}")
