"""
English against the best available source
=========================================

Paired z-test of English as the transfer source against the best source
for every (task, model, target), with the per-cell audit table.
"""

from langsim import fixtures
from langsim.evaluation import english_vs_best, load_score_dir

scores = load_score_dir(fixtures.scores_dir())

###############################################################################
# English competes for the maximum, so each difference is zero or negative.
res, rows = english_vs_best(scores, "eng")
print(f"z = {res.z:.3f}, p = {res.p_value:.2e}, n = {res.n}, mean diff = {res.mean_diff:.4f}")

###############################################################################
# Where English loses, and to whom.
for r in rows:
    if r.diff < -0.05:
        print(f"{r.task:9s} {r.model:5s} {r.target}: eng {r.reference_score:.3f} "
              f"< {r.best_source} {r.best_score:.3f}")

###############################################################################
# Counting wins per language across all cells.
wins = {}
for r in rows:
    wins[r.best_source] = wins.get(r.best_source, 0) + 1
print(sorted(wins.items(), key=lambda kv: -kv[1]))

###############################################################################
# Comparing only against other languages gives positive differences where
# English is the best source.
alt, _ = english_vs_best(scores, "eng", exclude_reference=True)
print(f"best other source: z = {alt.z:.3f}, p = {alt.p_value:.2e}")
