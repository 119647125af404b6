"""Command-line interface: ``langsim <command> [options]``.

Every command writes its artifact atomically (temp file + rename), so a
non-zero exit never leaves a partial output behind.
"""

import argparse
import json
import shutil
import sys
import tempfile
import warnings
from pathlib import Path

from . import fixtures
from .errors import LangSimError, SparseOverlapWarning
from .evaluation import (
    build_pairs,
    correlation_study,
    diffs_to_csv,
    english_vs_best,
    load_score_dir,
    load_similarity_dir,
    source_averages,
)
from .metrics import (
    dump_matrix_csv,
    lang2vec_matrix,
    load_category_distances,
    load_matrix_csv,
    wals_distance_matrix,
    write_text_atomic,
)
from .plot import scatter_svg
from .selection import rank_sources
from .typology import load_features, load_languages, load_values

PROG = "langsim"


class CommandError(LangSimError):
    pass


def _sidecar(out: Path, tag: str, suffix: str = ".csv") -> Path:
    return out.with_name(f"{out.stem}.{tag}{suffix}")


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        write_text_atomic(out, text)


def _split(codes):
    return [c.strip() for c in codes.split(",") if c.strip()] if codes else None


# --------------------------------------------------------------------------
# commands


def cmd_wals_matrix(args) -> int:
    languages = load_languages(args.languages)
    features = load_features(args.features)
    table = load_values(args.values, languages, features)
    subset = _split(args.langs) or languages.codes
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SparseOverlapWarning)
        m, counts = wals_distance_matrix(table, features, subset, args.mode,
                                         args.sparse_threshold, return_counts=True)
    for w in caught:
        print(f"{PROG}: warning: {w.message}", file=sys.stderr)
    m = type(m)(m.languages, m.cells, m.kind, m.symmetric, m.provenance, None,
                {**m.extra, "snapshot": args.snapshot})
    out = Path(args.out)
    lines = ["source,target,shared_features"]
    for i, a in enumerate(m.languages):
        for j in range(i + 1, len(m.languages)):
            lines.append(f"{a},{m.languages[j]},{counts[i, j]}")
    write_text_atomic(_sidecar(out, "shared"), "\n".join(lines) + "\n")
    write_text_atomic(out, dump_matrix_csv(m))
    return 0


def cmd_lang2vec_avg(args) -> int:
    pairs = load_category_distances(args.categories)
    langs = _split(args.langs)
    if langs is None:
        langs = list(dict.fromkeys(c for pair in pairs for c in pair))
    m = lang2vec_matrix(pairs, langs, args.lang2vec_policy)
    write_text_atomic(args.out, dump_matrix_csv(m))
    return 0


def cmd_rank(args) -> int:
    m = load_matrix_csv(args.matrix)
    ranked = rank_sources(m, args.target, _split(args.candidates))
    if args.format == "json":
        text = json.dumps(ranked.as_dict(), indent=2) + "\n"
    else:
        lines = ["rank,source,value,status"]
        lines += [f"{e.rank},{e.source},{e.value!r},ranked" for e in ranked.entries]
        lines += [f",{c},NA,{reason}" for c, reason in ranked.excluded]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _study_inputs(args):
    scores = load_score_dir(args.scores_dir)
    sims = load_similarity_dir(args.sims_dir)
    if not scores:
        raise CommandError(f"no score matrices (*.csv) in {args.scores_dir}")
    if not sims:
        raise CommandError(f"no similarity matrices (*.csv) in {args.sims_dir}")
    return scores, sims


def cmd_correlate(args) -> int:
    scores, sims = _study_inputs(args)
    include = args.diagonal == "include"
    report = correlation_study(scores, sims, include)
    out = Path(args.out)
    if args.format == "svg":
        plots = out.with_name(f"{out.stem}_plots")
        tmp = Path(tempfile.mkdtemp(prefix=".plots-", dir=out.parent))
        try:
            mode = "full" if include else "zero-shot"
            for s in scores:
                for m in sims:
                    sample = build_pairs(s, m, include)
                    svg = scatter_svg(sample, m.provenance, s.provenance,
                                      f"{s.task} / {s.model} / {m.provenance} ({mode})")
                    (tmp / f"{s.task}_{s.model}_{m.provenance}_{mode}.svg").write_text(svg, encoding="utf-8")
            if plots.exists():
                shutil.rmtree(plots)
            tmp.rename(plots)
        except BaseException:
            shutil.rmtree(tmp, ignore_errors=True)
            raise
    text = report.to_json() if args.format == "json" else report.to_csv()
    write_text_atomic(out, text)
    return 0


def _ztest_doc(result):
    return {"z": result.z, "p": result.p_value, "n": result.n,
            "mean_diff": result.mean_diff, "sd_diff": result.sd_diff}


def cmd_ztest(args) -> int:
    scores = load_score_dir(args.scores_dir)
    if not scores:
        raise CommandError(f"no score matrices (*.csv) in {args.scores_dir}")
    result, rows = english_vs_best(scores, args.reference, args.exclude_reference)
    out = Path(args.out)
    write_text_atomic(_sidecar(out, "diffs"), diffs_to_csv(rows))
    doc = {"reference": args.reference, "exclude_reference": args.exclude_reference,
           **_ztest_doc(result)}
    write_text_atomic(out, json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_report(args) -> int:
    scores, sims = _study_inputs(args)
    study = correlation_study(scores, sims, True) + correlation_study(scores, sims, False)
    result, rows = english_vs_best(scores, args.reference, args.exclude_reference)
    averages = {f"{task}/{model}": {k: round(v, 3) for k, v in avg.items()}
                for (task, model), avg in source_averages(scores).items()}
    doc = {
        "correlations": json.loads(study.to_json())["rows"],
        "ztest": {"reference": args.reference, "exclude_reference": args.exclude_reference,
                  **_ztest_doc(result)},
        "differences": [r._asdict() for r in rows],
        "source_averages": averages,
    }
    write_text_atomic(args.out, json.dumps(doc, indent=2) + "\n")
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0],
                                     formatter_class=fmt)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("wals-matrix", help="quantified WALS distance matrix", formatter_class=fmt)
    p.add_argument("--languages", required=True, help="language catalog CSV")
    p.add_argument("--features", required=True, help="feature catalog CSV")
    p.add_argument("--values", required=True, help="long-format value table CSV")
    p.add_argument("--langs", default=None, help="comma-separated language subset (default: all)")
    p.add_argument("--mode", choices=("mean-abs", "rms"), default="mean-abs",
                   help="how per-feature differences are combined")
    p.add_argument("--sparse-threshold", type=int, default=10,
                   help="warn when a pair shares fewer features than this")
    p.add_argument("--snapshot", default="unspecified", help="WALS snapshot identifier")
    p.add_argument("--out", required=True, help="matrix CSV; shared counts go to <out>.shared.csv")
    p.set_defaults(func=cmd_wals_matrix)

    p = sub.add_parser("lang2vec-avg", help="averaged lang2vec distance matrix", formatter_class=fmt)
    p.add_argument("--categories", required=True,
                   help="CSV of source,target and six category distances")
    p.add_argument("--langs", default=None, help="comma-separated language order (default: file order)")
    p.add_argument("--lang2vec-policy", choices=("strict", "allow-partial"), default="strict",
                   help="strict requires all six categories per pair")
    p.add_argument("--out", required=True, help="matrix CSV")
    p.set_defaults(func=cmd_lang2vec_avg)

    p = sub.add_parser("rank", help="rank source languages for a target", formatter_class=fmt)
    p.add_argument("--matrix", required=True, help="similarity or distance matrix CSV")
    p.add_argument("--target", required=True, help="target language code")
    p.add_argument("--candidates", default=None, help="comma-separated candidates (default: all)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.set_defaults(func=cmd_rank)

    def scores_dir(p):
        p.add_argument("--scores-dir", default=str(fixtures.scores_dir()),
                       help="directory of score matrix CSVs")

    def study_dirs(p):
        scores_dir(p)
        p.add_argument("--sims-dir", default=str(fixtures.similarity_dir()),
                       help="directory of similarity matrix CSVs")

    def ref_flags(p):
        p.add_argument("--reference", default="eng", help="reference source language")
        p.add_argument("--exclude-reference", action="store_true",
                       help="compare against the best source other than the reference")

    p = sub.add_parser("correlate", help="correlate scores with similarity", formatter_class=fmt)
    study_dirs(p)
    p.add_argument("--diagonal", choices=("include", "exclude"), default="include",
                   help="keep or drop source == target cells")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv",
                   help="svg writes the CSV report plus <out>_plots/*.svg")
    p.add_argument("--out", required=True, help="report file")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("ztest", help="reference source vs best source z-test", formatter_class=fmt)
    scores_dir(p)
    ref_flags(p)
    p.add_argument("--out", required=True, help="JSON result; differences go to <out>.diffs.csv")
    p.set_defaults(func=cmd_ztest)

    p = sub.add_parser("report", help="full study document (both modes + z-test)", formatter_class=fmt)
    study_dirs(p)
    ref_flags(p)
    p.add_argument("--out", required=True, help="JSON study document")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LangSimError, OSError) as e:
        msg = str(e).splitlines()[0] if str(e) else type(e).__name__
        print(f"{PROG}: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
