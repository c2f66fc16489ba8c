"""embedgeo command line: every analysis as a subcommand.

Exit codes: 0 success, 1 usage error, 2 data error (bad or missing
input files). Every output file embeds a run manifest (JSON reports)
or gets a .manifest.json sidecar (CSV exports), so any report can be
traced back to exact input bytes, parameters, and seeds.
"""

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, corpus_stats, neighbors, probe, subspace, vocab_io
from .errors import EmbedGeoError
from .manifest import RunManifest, write_json_report, write_sidecar_manifest
from .unicode_catalog import categorize_token


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    return int(os.environ.get("EMBEDGEO_THREADS", "1"))


def _load_vocab(path: str, scheme: str) -> vocab_io.Vocabulary:
    return vocab_io.load_vocab(path, scheme=scheme)


def _categories_for(vocab: vocab_io.Vocabulary) -> list[str]:
    return [categorize_token(t) for t in vocab.tokens]


def _finish(manifest: RunManifest, started: float) -> RunManifest:
    manifest.wall_clock_s = time.perf_counter() - started
    return manifest


def _add_common(p: argparse.ArgumentParser, seed: bool = False) -> None:
    p.add_argument("--threads", type=int, default=None, help="worker cap (env EMBEDGEO_THREADS)")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="root seed for all sampling")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="embedgeo", description=__doc__)
    parser.add_argument("--version", action="version", version=f"embedgeo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("categorize", help="token -> category CSV for a vocabulary")
    p.add_argument("vocab", help="vocabulary JSON file")
    p.add_argument("--scheme", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    _add_common(p)

    p = sub.add_parser("overlap", help="vocabulary intersection report")
    p.add_argument("--vocab-a", required=True)
    p.add_argument("--vocab-b", required=True)
    p.add_argument("--scheme-a", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("--scheme-b", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("--by-category", action="store_true")
    p.add_argument("--out", required=True, help="JSON report path")
    _add_common(p)

    p = sub.add_parser("knn", help="print the nearest neighbors of one token")
    p.add_argument("--matrix", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--scheme", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("--token", required=True)
    p.add_argument("-k", type=int, default=20)
    p.add_argument("--out", default=None, help="optional JSON report path")
    _add_common(p)

    p = sub.add_parser("diversity", help="distinct neighbor categories per token")
    p.add_argument("--matrix", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--scheme", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("-k", type=int, default=50)
    p.add_argument("--sample", type=float, default=None, help="query fraction in (0,1]")
    p.add_argument("--out", required=True, help="CSV path for per-token stats")
    _add_common(p, seed=True)

    p = sub.add_parser("breakdown", help="neighbor-category distribution per category")
    p.add_argument("--matrix", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--scheme", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("-k", type=int, default=50)
    p.add_argument("--categories", default=None, help="comma-separated query categories")
    p.add_argument("--out", required=True, help="JSON report path")
    _add_common(p)

    p = sub.add_parser("overlap-nn", help="shared-vocab neighbor overlap of two models")
    p.add_argument("--a", required=True, help="matrix A (npy)")
    p.add_argument("--b", required=True, help="matrix B (npy)")
    p.add_argument("--vocab-a", required=True)
    p.add_argument("--vocab-b", required=True)
    p.add_argument("--scheme-a", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("--scheme-b", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument(
        "--restrict-vocab",
        action="append",
        default=None,
        metavar="VOCAB",
        help="additional vocabulary files; the token set becomes the "
        "intersection across all models (repeatable)",
    )
    p.add_argument("-k", type=int, default=100)
    p.add_argument("--out", required=True, help="JSON report path")
    _add_common(p)

    p = sub.add_parser("probe", help="linear separability per token category")
    p.add_argument("--matrix", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--scheme", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("--categories", default=None, help="comma-separated categories")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--out", required=True, help="JSON report path")
    _add_common(p, seed=True)

    p = sub.add_parser("angles", help="canonical-angle spectrum of two matrices")
    p.add_argument("--a", required=True, help="matrix A (npy)")
    p.add_argument("--b", required=True, help="matrix B (npy)")
    p.add_argument("--vocab-a", default=None, help="restrict A to the shared vocabulary")
    p.add_argument("--vocab-b", default=None, help="restrict B to the shared vocabulary")
    p.add_argument("--scheme-a", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("--scheme-b", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("--full-spectrum", action="store_true", help="report every singular value")
    p.add_argument("--out", required=True, help="JSON report path")
    _add_common(p)

    p = sub.add_parser("freq", help="token frequency estimate over a corpus sample")
    p.add_argument("--corpus", required=True, help="line-delimited UTF-8 text")
    p.add_argument("--vocab", required=True)
    p.add_argument("--scheme", choices=vocab_io.SCHEMES, default="sentencepiece")
    p.add_argument("--out", required=True, help="JSON report path")
    _add_common(p)

    p = sub.add_parser("freq-div", help="frequency bands vs neighbor diversity")
    p.add_argument("--freq", required=True, help="freq JSON report")
    p.add_argument("--diversity", required=True, help="diversity stats CSV")
    p.add_argument("--bands", type=int, default=10)
    p.add_argument("--per-band-sample", type=int, default=None)
    p.add_argument("--out", required=True, help="JSON report path")
    _add_common(p, seed=True)

    p = sub.add_parser("export-graph", help="neighbor edges as CSV for plotting")
    p.add_argument("--matrix", required=True)
    p.add_argument("-k", type=int, default=20)
    p.add_argument("--queries", default=None, help="comma-separated row ids (default: all)")
    p.add_argument("--out", required=True, help="CSV edge-list path")
    _add_common(p)

    return parser


def _cmd_categorize(args) -> int:
    vocab = _load_vocab(args.vocab, args.scheme)
    rows = [(t, categorize_token(t)) for t in vocab.tokens]
    if args.out is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["token", "category"])
        writer.writerows(rows)
        return 0
    started = time.perf_counter()
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["token", "category"])
        writer.writerows(rows)
    manifest = RunManifest.for_command(
        "categorize", {"vocab": args.vocab}, {"scheme": args.scheme}
    )
    write_sidecar_manifest(args.out, _finish(manifest, started))
    return 0


def _cmd_overlap(args) -> int:
    started = time.perf_counter()
    a = _load_vocab(args.vocab_a, args.scheme_a)
    b = _load_vocab(args.vocab_b, args.scheme_b)
    report = vocab_io.overlap_stats(a, b, by_category=args.by_category)
    report["model_a"] = a.model_name
    report["model_b"] = b.model_name
    manifest = RunManifest.for_command(
        "overlap",
        {"vocab_a": args.vocab_a, "vocab_b": args.vocab_b},
        {
            "by_category": args.by_category,
            "scheme_a": args.scheme_a,
            "scheme_b": args.scheme_b,
        },
    )
    write_json_report(args.out, report, _finish(manifest, started))
    return 0


def _cmd_knn(args) -> int:
    started = time.perf_counter()
    vocab = _load_vocab(args.vocab, args.scheme)
    matrix = vocab_io.load_matrix(args.matrix)
    if len(vocab) != matrix.shape[0]:
        raise EmbedGeoError(
            f"{args.vocab} has {len(vocab)} tokens but {args.matrix} has "
            f"{matrix.shape[0]} rows"
        )
    row = vocab.index.get(args.token)
    if row is None:
        raise EmbedGeoError(f"token {args.token!r} not in {args.vocab}")
    (ns,) = neighbors.knn(matrix, queries=[row], k=args.k, workers=_threads(args))
    records = [
        {
            "rank": r + 1,
            "id": int(j),
            "token": vocab.tokens[j],
            "category": categorize_token(vocab.tokens[j]),
            "distance": float(d),
        }
        for r, (j, d) in enumerate(zip(ns.ids, ns.distances))
    ]
    for rec in records:
        print(
            f"{rec['rank']:4d}  {rec['distance']:.6f}  "
            f"{rec['category']:<12}  {rec['token']}"
        )
    if args.out:
        manifest = RunManifest.for_command(
            "knn",
            {"matrix": args.matrix, "vocab": args.vocab},
            {"token": args.token, "k": args.k, "scheme": args.scheme},
        )
        report = {"query": {"token": args.token, "id": row}, "neighbors": records}
        write_json_report(args.out, report, _finish(manifest, started))
    return 0


def _cmd_diversity(args) -> int:
    started = time.perf_counter()
    vocab = _load_vocab(args.vocab, args.scheme)
    matrix = vocab_io.load_matrix(args.matrix)
    cats = _categories_for(vocab)
    stats, mean = neighbors.neighbor_diversity(
        matrix, cats, k=args.k, sample=args.sample, seed=args.seed,
        workers=_threads(args),
    )
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["query_id", "token", "category", "distinct_categories"])
        for s in stats:
            writer.writerow(
                [s.query_id, vocab.tokens[s.query_id], cats[s.query_id], s.distinct_categories]
            )
    manifest = RunManifest.for_command(
        "diversity",
        {"matrix": args.matrix, "vocab": args.vocab},
        {
            "k": args.k,
            "sample": args.sample,
            "scheme": args.scheme,
            "mean_distinct_categories": mean,
            "n_queries": len(stats),
        },
        seed=args.seed,
    )
    write_sidecar_manifest(args.out, _finish(manifest, started))
    print(f"mean distinct categories over {len(stats)} queries: {mean:.4f}")
    return 0


def _cmd_breakdown(args) -> int:
    started = time.perf_counter()
    vocab = _load_vocab(args.vocab, args.scheme)
    matrix = vocab_io.load_matrix(args.matrix)
    cats = _categories_for(vocab)
    wanted = args.categories.split(",") if args.categories else None
    bd = neighbors.neighbor_breakdown(
        matrix, cats, k=args.k, for_categories=wanted, workers=_threads(args)
    )
    report = {
        "row_labels": bd.row_labels,
        "col_labels": bd.col_labels,
        "rows": {
            row: {col: float(bd.matrix[i, j]) for j, col in enumerate(bd.col_labels)}
            for i, row in enumerate(bd.row_labels)
        },
    }
    manifest = RunManifest.for_command(
        "breakdown",
        {"matrix": args.matrix, "vocab": args.vocab},
        {"k": args.k, "categories": wanted, "scheme": args.scheme},
    )
    write_json_report(args.out, report, _finish(manifest, started))
    return 0


def _cmd_overlap_nn(args) -> int:
    started = time.perf_counter()
    va = _load_vocab(args.vocab_a, args.scheme_a)
    vb = _load_vocab(args.vocab_b, args.scheme_b)
    ma = vocab_io.load_matrix(args.a)
    mb = vocab_io.load_matrix(args.b)
    alignment = vocab_io.align(va, vb)
    inputs = {
        "a": args.a,
        "b": args.b,
        "vocab_a": args.vocab_a,
        "vocab_b": args.vocab_b,
    }
    if args.restrict_vocab:
        for i, extra_path in enumerate(args.restrict_vocab):
            extra = set(_load_vocab(extra_path, "sentencepiece").index)
            alignment = vocab_io.SharedAlignment(
                [e for e in alignment.entries if e[0] in extra],
                model_a=alignment.model_a,
                model_b=alignment.model_b,
            )
            inputs[f"restrict_vocab_{i}"] = extra_path
        if not alignment.entries:
            raise EmbedGeoError("no tokens survive the vocabulary intersection")
    sub_a = vocab_io.submatrix(ma, alignment.rows_a)
    sub_b = vocab_io.submatrix(mb, alignment.rows_b)
    stats, mean = neighbors.neighbor_overlap(
        sub_a, sub_b, alignment, k=args.k, workers=_threads(args)
    )
    report = {
        "k": args.k,
        "shared_tokens": len(alignment),
        "mean_common": mean,
        "per_token": [{"token": s.token, "common": s.common} for s in stats],
    }
    manifest = RunManifest.for_command(
        "overlap-nn",
        inputs,
        {"k": args.k, "scheme_a": args.scheme_a, "scheme_b": args.scheme_b},
    )
    write_json_report(args.out, report, _finish(manifest, started))
    print(f"mean common neighbors over {len(alignment)} shared tokens: {mean:.2f}")
    return 0


def _cmd_probe(args) -> int:
    started = time.perf_counter()
    vocab = _load_vocab(args.vocab, args.scheme)
    matrix = vocab_io.load_matrix(args.matrix)
    cats = _categories_for(vocab)
    wanted = args.categories.split(",") if args.categories else None
    results, skipped = probe.probe_categories(
        matrix, cats, which=wanted, seed=args.seed, folds=args.folds, l2=args.l2
    )
    sizes = {r.category: cats.count(r.category) for r in results}
    macro = float(np.mean([r.mean_accuracy for r in results])) if results else float("nan")
    weights = np.array([2 * sizes[r.category] for r in results], dtype=np.float64)
    per_sample = (
        float(np.average([r.mean_accuracy for r in results], weights=weights))
        if results
        else float("nan")
    )
    report = {
        "categories": {
            r.category: {
                "fold_accuracies": r.fold_accuracies,
                "mean_accuracy": r.mean_accuracy,
                "n_positive": sizes[r.category],
                "hyperparameters": r.hyperparameters,
            }
            for r in results
        },
        "skipped": skipped,
        "macro_average": macro,
        "sample_weighted_average": per_sample,
    }
    manifest = RunManifest.for_command(
        "probe",
        {"matrix": args.matrix, "vocab": args.vocab},
        {
            "categories": wanted,
            "folds": args.folds,
            "l2": args.l2,
            "scheme": args.scheme,
        },
        seed=args.seed,
    )
    write_json_report(args.out, report, _finish(manifest, started))
    print(f"macro average accuracy: {macro:.4f} ({len(results)} categories, {len(skipped)} skipped)")
    return 0


def _cmd_angles(args) -> int:
    started = time.perf_counter()
    ma = vocab_io.load_matrix(args.a)
    mb = vocab_io.load_matrix(args.b)
    inputs = {"a": args.a, "b": args.b}
    shared = None
    if (args.vocab_a is None) != (args.vocab_b is None):
        raise UsageError("--vocab-a and --vocab-b must be given together")
    if args.vocab_a:
        va = _load_vocab(args.vocab_a, args.scheme_a)
        vb = _load_vocab(args.vocab_b, args.scheme_b)
        alignment = vocab_io.align(va, vb)
        ma = vocab_io.submatrix(ma, alignment.rows_a)
        mb = vocab_io.submatrix(mb, alignment.rows_b)
        shared = len(alignment)
        inputs["vocab_a"] = args.vocab_a
        inputs["vocab_b"] = args.vocab_b
    spectrum = subspace.canonical_angles(ma, mb)
    report = {
        "cos_smallest_angle": spectrum.cos_smallest_angle,
        "n_rows": spectrum.n_rows,
        "d_a": spectrum.d_a,
        "d_b": spectrum.d_b,
        "shared_tokens": shared,
    }
    if args.full_spectrum:
        report["sigma"] = [float(s) for s in spectrum.sigma]
    manifest = RunManifest.for_command(
        "angles", inputs, {"full_spectrum": args.full_spectrum}
    )
    write_json_report(args.out, report, _finish(manifest, started))
    print(f"cos(smallest canonical angle) = {spectrum.cos_smallest_angle:.6f}")
    return 0


def _cmd_freq(args) -> int:
    started = time.perf_counter()
    vocab = _load_vocab(args.vocab, args.scheme)
    table = corpus_stats.count_frequencies(args.corpus, vocab)
    report = {
        "corpus": table.corpus,
        "total": table.total,
        "unknown_chars": table.unknown_chars,
        "counts": table.counts,
    }
    manifest = RunManifest.for_command(
        "freq",
        {"corpus": args.corpus, "vocab": args.vocab},
        {"scheme": args.scheme},
    )
    write_json_report(args.out, report, _finish(manifest, started))
    print(f"counted {table.total} tokens ({table.unknown_chars} unknown chars)")
    return 0


def _cmd_freq_div(args) -> int:
    started = time.perf_counter()
    with open(args.freq, encoding="utf-8") as fh:
        freq_report = json.load(fh)["report"]
    table = corpus_stats.FrequencyTable(
        counts=freq_report["counts"],
        corpus=freq_report["corpus"],
        total=freq_report["total"],
        unknown_chars=freq_report.get("unknown_chars", 0),
    )
    div_by_token: dict[str, int] = {}
    with open(args.diversity, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            div_by_token[rec["token"]] = int(rec["distinct_categories"])
    banded = corpus_stats.frequency_diversity(
        table,
        div_by_token,
        bands=args.bands,
        per_band_sample=args.per_band_sample,
        seed=args.seed,
    )
    report = {
        "spearman_rho": banded.spearman_rho,
        "statistic": banded.statistic,
        "n_sampled": banded.n_sampled,
        "bands": [
            {
                "count_lo": b.lo,
                "count_hi": b.hi,
                "n_tokens": len(b.tokens),
                "mean_distinct_categories": b.mean_distinct,
            }
            for b in banded.bands
        ],
        "zero_count_band": {
            "n_tokens": len(banded.zero_band.tokens),
            "mean_distinct_categories": banded.zero_band.mean_distinct,
        },
    }
    manifest = RunManifest.for_command(
        "freq-div",
        {"freq": args.freq, "diversity": args.diversity},
        {"bands": args.bands, "per_band_sample": args.per_band_sample},
        seed=args.seed,
    )
    write_json_report(args.out, report, _finish(manifest, started))
    print(f"spearman rho = {banded.spearman_rho:.4f} over {banded.n_sampled} tokens")
    return 0


def _cmd_export_graph(args) -> int:
    started = time.perf_counter()
    matrix = vocab_io.load_matrix(args.matrix)
    queries = None
    if args.queries:
        queries = [int(q) for q in args.queries.split(",")]
    sets = neighbors.knn(matrix, queries=queries, k=args.k, workers=_threads(args))
    neighbors.export_neighbor_graph(sets, args.out)
    manifest = RunManifest.for_command(
        "export-graph",
        {"matrix": args.matrix},
        {"k": args.k, "queries": queries},
    )
    write_sidecar_manifest(args.out, _finish(manifest, started))
    return 0


_COMMANDS = {
    "categorize": _cmd_categorize,
    "overlap": _cmd_overlap,
    "knn": _cmd_knn,
    "diversity": _cmd_diversity,
    "breakdown": _cmd_breakdown,
    "overlap-nn": _cmd_overlap_nn,
    "probe": _cmd_probe,
    "angles": _cmd_angles,
    "freq": _cmd_freq,
    "freq-div": _cmd_freq_div,
    "export-graph": _cmd_export_graph,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"data error: no such file: {exc.filename}", file=sys.stderr)
        return 2
    except EmbedGeoError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
