"""Linguistic distance metrics and transfer-language selection."""

from .errors import *  # noqa: F401,F403
from .evaluation import (
    ScoreMatrix,
    StudyReport,
    build_pairs,
    correlation_study,
    english_vs_best,
    load_score_dir,
    load_score_matrix,
    load_similarity_dir,
)
from .metrics import (
    CategoryDistances,
    DistanceMatrix,
    dump_matrix_csv,
    lang2vec_average,
    load_matrix_csv,
    quantified_wals_distance,
    similarity_lookup,
    wals_distance_matrix,
)
from .selection import RankedList, best_source, rank_sources
from .stats import (
    PairedSample,
    fractional_ranks,
    paired_z_test,
    pearson,
    spearman,
    student_t_two_tailed_p,
)
from .typology import (
    load_features,
    load_languages,
    load_values,
    shared_features,
)

__version__ = "0.1.0"
