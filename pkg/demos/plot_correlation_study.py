"""
Similarity against transfer performance
=======================================

Correlate each score matrix with each similarity matrix, first with the
monolingual cells included and then with only true transfer pairs.
"""

from langsim import fixtures
from langsim.evaluation import build_pairs, correlation_study, load_score_dir, load_similarity_dir
from langsim.plot import scatter_svg

scores = load_score_dir(fixtures.scores_dir())
sims = load_similarity_dir(fixtures.similarity_dir())

###############################################################################
# Both diagonal modes in one report. EzGlot rows lose the 14 missing pairs.
report = correlation_study(scores, sims, True) + correlation_study(scores, sims, False)
for r in report.records:
    if r.method == "pearson":
        print(f"{r.task:9s} {r.model:5s} {r.metric:15s} {r.mode:9s} "
              f"rho={r.rho:+.3f} p={r.p:.3f} n={r.n}")

###############################################################################
# Dropping the diagonal weakens every task; parsing moves least.
for task in ("sentiment", "ner", "dep"):
    full = report.get(task, "xlmr", "elinguistics", "full", "pearson").rho
    zero = report.get(task, "xlmr", "elinguistics", "zero-shot", "pearson").rho
    print(f"{task:9s} full {full:+.3f} -> zero-shot {zero:+.3f}")

###############################################################################
# A scatter plot of one cell. Squares mark source == target points.
dep = next(s for s in scores if s.key == ("dep", "xlmr"))
el = next(m for m in sims if m.provenance == "elinguistics")
svg = scatter_svg(build_pairs(dep, el, True), "elinguistics", "LAS", "dep / xlmr")
with open("dep_xlmr_elinguistics.svg", "w") as f:
    f.write(svg)
print(f"wrote {len(svg)} bytes of SVG")
