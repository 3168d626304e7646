"""Command-line frontend: validate, stats, extract, train, cv, predict,
distribution, gen.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 data or format
error. Every artifact starts with a comment line recording the invocation,
and all randomness flows from --seed, so identical invocations write
identical bytes.

Documents and standalone sentences are separate experiment lanes: extract,
train and cv take --unit to choose one; predict scores every unit in the
file (documents get their sentence vectors averaged first).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import datagen, evaluation, features, model as model_mod
from .corpus import Corpus, CorpusFormatError, corpus_stats, parse_corpus, validate_corpus
from .features import ExtractionContext, group_feature_names, select_feature_group
from .levels import CLASSIFICATION_LEVELS, CefrLevel, parse_level
from .lexicon import (
    CategoryMapError,
    LexiconFormatError,
    default_category_map,
    load_category_map,
    load_kelly,
    load_senses,
)

CATMAP_ENV_VAR = "CEFRLAB_CATMAP"


class _CliError(Exception):
    """Data/format-level failure; maps to exit code 3."""


def _read_corpus(path: str) -> Corpus:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_corpus(handle)
    except OSError as exc:
        raise _CliError(f"cannot read corpus {path}: {exc}") from None
    except CorpusFormatError as exc:
        raise _CliError(f"{path}: {exc}") from None


def _load_context(args: argparse.Namespace) -> ExtractionContext:
    try:
        with open(args.kelly, encoding="utf-8") as handle:
            kelly = load_kelly(handle)
        with open(args.senses, encoding="utf-8") as handle:
            senses = load_senses(handle)
        catmap_path = args.catmap or os.environ.get(CATMAP_ENV_VAR)
        if catmap_path:
            with open(catmap_path, encoding="utf-8") as handle:
                catmap = load_category_map(handle)
        else:
            catmap = default_category_map()
    except OSError as exc:
        raise _CliError(f"cannot read resource: {exc}") from None
    except (LexiconFormatError, CategoryMapError) as exc:
        raise _CliError(str(exc)) from None
    reference = parse_level(args.reference_level) if args.reference_level else CefrLevel.B1
    return ExtractionContext(
        kelly=kelly,
        senses=senses,
        category_map=catmap,
        reference_level=reference,
        level_dependent_mode=args.level_mode,
    )


def _invocation_header(argv: list[str]) -> str:
    return "# invocation = cefrlab " + " ".join(argv)


def _write_artifact(out_dir: str | None, name: str, text: str) -> None:
    if out_dir is None:
        sys.stdout.write(text)
        return
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(text, encoding="utf-8", newline="\n")


def _format_float(x: float) -> str:
    return repr(float(x))


def _cmd_validate(args, argv) -> int:
    corpus = _read_corpus(args.corpus)
    issues = validate_corpus(corpus)
    lines = [_invocation_header(argv)]
    for issue in issues:
        lines.append(f"{issue.severity}\t{issue.unit_id}\t{issue.code}\t{issue.message}")
    lines.append(f"# issues = {len(issues)}")
    _write_artifact(args.out, "validation.tsv", "\n".join(lines) + "\n")
    return 0 if not issues else 1


def _cmd_stats(args, argv) -> int:
    stats = corpus_stats(_read_corpus(args.corpus))
    lines = [_invocation_header(argv), "level\ttexts\tmean_sentences\tstandalone_sentences"]
    for row in stats.rows + (stats.total,):
        name = str(row.level) if row.level is not None else "Total"
        lines.append(
            f"{name}\t{row.text_count}\t{_format_float(row.mean_sentences)}\t{row.standalone_count}"
        )
    _write_artifact(args.out, "stats.tsv", "\n".join(lines) + "\n")
    return 0


def _featurize(args, argv) -> tuple[list[str], list[CefrLevel], np.ndarray]:
    corpus = _read_corpus(args.corpus)
    ctx = _load_context(args)
    return features.corpus_features(corpus, ctx, unit=args.unit)


def _cmd_extract(args, argv) -> int:
    ids, levels, X = _featurize(args, argv)
    lines = [_invocation_header(argv), "\t".join(("unit_id", "level") + features.FEATURE_NAMES)]
    for unit_id, level, row in zip(ids, levels, X):
        lines.append("\t".join([unit_id, str(level)] + [_format_float(v) for v in row]))
    _write_artifact(args.out, "features.tsv", "\n".join(lines) + "\n")
    return 0


def _cmd_train(args, argv) -> int:
    ids, levels, X = _featurize(args, argv)
    if X.shape[0] == 0:
        raise _CliError("no units to train on")
    Xg = select_feature_group(X, args.group)
    try:
        trained = model_mod.train_mlr(
            Xg, levels, ridge=args.ridge, feature_names=group_feature_names(args.group)
        )
    except ValueError as exc:
        raise _CliError(str(exc)) from None
    out_dir = args.out or "."
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    model_path = Path(out_dir) / "model.json"
    model_mod.save_model(trained, model_path)
    meta_lines = [
        _invocation_header(argv),
        "key\tvalue",
        f"n_units\t{X.shape[0]}",
        f"unit\t{args.unit}",
        f"group\t{args.group}",
        f"n_features\t{Xg.shape[1]}",
        f"ridge\t{args.ridge}",
        f"iterations\t{trained.training.iterations}",
        f"converged\t{trained.training.converged}",
        f"final_nll\t{_format_float(trained.training.final_nll)}",
    ]
    _write_artifact(out_dir, "training_meta.tsv", "\n".join(meta_lines) + "\n")
    sys.stderr.write(
        f"trained on {X.shape[0]} units ({args.group}, {Xg.shape[1]} features): "
        f"iterations={trained.training.iterations} converged={trained.training.converged} "
        f"nll={trained.training.final_nll:.6f} -> {model_path}\n"
    )
    return 0


def _metrics_lines(report, argv, extra: dict[str, object]) -> list[str]:
    lines = [_invocation_header(argv), "metric\tvalue"]
    for key, value in extra.items():
        lines.append(f"{key}\t{value}")
    lines.append(f"n\t{report.n}")
    lines.append(f"accuracy\t{_format_float(report.accuracy)}")
    lines.append(f"adjacent_accuracy\t{_format_float(report.adjacent_accuracy)}")
    lines.append(f"weighted_f\t{_format_float(report.weighted_f)}")
    lines.append(f"macro_f\t{_format_float(report.macro_f)}")
    if report.rmse is not None:
        lines.append(f"rmse\t{_format_float(report.rmse)}")
    for level, scores in report.per_class.items():
        lines.append(f"precision_{level}\t{_format_float(scores.precision)}")
        lines.append(f"recall_{level}\t{_format_float(scores.recall)}")
        lines.append(f"f_{level}\t{_format_float(scores.f_score)}")
    return lines


def _confusion_csv(confusion, argv) -> str:
    lines = [_invocation_header(argv)]
    lines.append("gold\\predicted," + ",".join(str(l) for l in confusion.labels))
    for label, row in zip(confusion.labels, confusion.counts):
        lines.append(str(label) + "," + ",".join(str(int(c)) for c in row))
    return "\n".join(lines) + "\n"


def _predictions_tsv(records, labels, argv) -> str:
    lines = [_invocation_header(argv)]
    lines.append("\t".join(["unit_id", "gold", "predicted"] + [f"p_{l}" for l in labels]))
    for record in records:
        lines.append(
            "\t".join(
                [record.unit_id, str(record.gold), str(record.predicted)]
                + [_format_float(p) for p in record.probs]
            )
        )
    return "\n".join(lines) + "\n"


def _cmd_cv(args, argv) -> int:
    ids, levels, X = _featurize(args, argv)
    if X.shape[0] == 0:
        raise _CliError("no units to cross-validate on")
    Xg = select_feature_group(X, args.group)
    try:
        plan = evaluation.stratified_folds(levels, k=args.k, seed=args.seed)
        result = evaluation.cross_validate(
            Xg,
            levels,
            lambda Xt, yt: model_mod.train_mlr(Xt, yt, ridge=args.ridge),
            plan,
            unit_ids=ids,
        )
    except ValueError as exc:
        raise _CliError(str(exc)) from None
    extra = {"unit": args.unit, "group": args.group, "n_features": Xg.shape[1],
             "k": args.k, "seed": args.seed, "ridge": args.ridge}
    _write_artifact(args.out, "metrics.tsv", "\n".join(_metrics_lines(result.report, argv, extra)) + "\n")
    _write_artifact(args.out, "confusion.csv", _confusion_csv(result.confusion, argv))
    _write_artifact(args.out, "predictions.tsv", _predictions_tsv(result.records, result.confusion.labels, argv))
    return 0


def _cmd_predict(args, argv) -> int:
    corpus_path = args.corpus or args.corpus_positional
    if not corpus_path:
        raise _CliError("no corpus given (pass --corpus or a positional path)")
    args.corpus = corpus_path
    corpus = _read_corpus(corpus_path)
    ctx = _load_context(args)
    try:
        trained = model_mod.load_model(args.model)
    except (OSError, model_mod.ModelFormatError) as exc:
        raise _CliError(f"cannot load model: {exc}") from None
    group = _group_from_model(trained)
    lines = [_invocation_header(argv)]
    lines.append("\t".join(["unit_id", "unit", "gold", "predicted"] + [f"p_{l}" for l in trained.labels]))

    def emit(unit_id: str, kind: str, gold: CefrLevel, vector: np.ndarray) -> None:
        reduced = select_feature_group(vector, group)
        probs = trained.predict_proba(reduced)
        predicted = trained.labels[int(np.argmax(probs))]
        lines.append(
            "\t".join([unit_id, kind, str(gold), str(predicted)] + [_format_float(p) for p in probs])
        )

    # Prediction never peeks at gold labels: the reference level comes from
    # flags (or zero-out mode) only.
    for doc in corpus.documents:
        emit(doc.id, "text", doc.level, features.extract_document_features(doc, ctx))
    for labeled in corpus.standalone_sentences:
        emit(
            labeled.sentence.id,
            "sentence",
            labeled.level,
            features.extract_sentence_features(labeled.sentence, ctx),
        )
    _write_artifact(args.out, "predictions.tsv", "\n".join(lines) + "\n")
    return 0


def _group_from_model(trained) -> str:
    names = tuple(trained.feature_names)
    for group in features.FEATURE_GROUPS:
        if group_feature_names(group) == names:
            return group
    raise _CliError(
        "model feature names do not match any feature group of this build"
    )


def _cmd_distribution(args, argv) -> int:
    corpus = _read_corpus(args.corpus)
    ctx = _load_context(args)
    try:
        trained = model_mod.load_model(args.model)
    except (OSError, model_mod.ModelFormatError) as exc:
        raise _CliError(f"cannot load model: {exc}") from None
    group = _group_from_model(trained)
    table = evaluation.sentence_distribution(trained, corpus.documents, ctx, group=group)
    lines = [_invocation_header(argv)]
    lines.append("doc_level," + ",".join(str(l) for l in table.levels) + ",sentences")
    for i, level in enumerate(table.levels):
        row = ",".join(_format_float(p) for p in table.proportions[i])
        lines.append(f"{level},{row},{int(table.sentence_counts[i])}")
    _write_artifact(args.out, "distribution.csv", "\n".join(lines) + "\n")
    return 0


def _cmd_gen(args, argv) -> int:
    cfg = datagen.GenConfig(
        seed=args.seed,
        docs_per_level=args.docs_per_level,
        standalone_per_level=args.standalone_per_level,
        lexicon_size=args.lexicon_size,
    )
    try:
        bundle = datagen.generate_corpus(cfg)
    except ValueError as exc:
        raise _CliError(str(exc)) from None
    out_dir = args.out or "."
    paths = bundle.write(out_dir)
    sys.stderr.write(f"wrote bundle to {Path(out_dir).resolve()}: {', '.join(p.name for p in paths.values())}\n")
    return 0


def _add_resource_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kelly", required=True, help="Kelly-style word list TSV")
    parser.add_argument("--senses", required=True, help="sense lexicon TSV")
    parser.add_argument(
        "--catmap",
        help=f"category map config (default: ${CATMAP_ENV_VAR} or the bundled SUC map)",
    )
    parser.add_argument(
        "--level-mode",
        choices=("use-reference", "zero-out"),
        default="use-reference",
        help="difficult-word features: anchor on a reference level, or emit 0",
    )
    parser.add_argument(
        "--reference-level",
        help="reference level for prediction-time extraction (default B1); "
        "labeled units use their own gold level during extract/train/cv",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cefrlab",
        description="CEFR proficiency prediction from linguistic complexity features",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check corpus structure")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", help="per-level corpus summary table")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("extract", help="write the feature table for one unit kind")
    p.add_argument("--corpus", required=True)
    _add_resource_flags(p)
    p.add_argument("--unit", choices=("text", "sentence"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("train", help="train a logistic model on one unit kind")
    p.add_argument("--corpus", required=True)
    _add_resource_flags(p)
    p.add_argument("--unit", choices=("text", "sentence"), default="text")
    p.add_argument("--group", choices=sorted(features.FEATURE_GROUPS), default="All")
    p.add_argument("--ridge", type=float, default=1e-8)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("cv", help="stratified k-fold cross-validation")
    p.add_argument("--corpus", required=True)
    _add_resource_flags(p)
    p.add_argument("--unit", choices=("text", "sentence"), default="text")
    p.add_argument("--group", choices=sorted(features.FEATURE_GROUPS), default="All")
    p.add_argument("--ridge", type=float, default=1e-8)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("predict", help="score every unit of a corpus with a model")
    p.add_argument("corpus_positional", nargs="?", metavar="corpus",
                   help="corpus file (alternative to --corpus)")
    p.add_argument("--corpus")
    p.add_argument("--model", required=True)
    _add_resource_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("distribution", help="per-level distribution of predicted sentence levels")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True, help="sentence-level model")
    _add_resource_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_distribution)

    p = sub.add_parser("gen", help="generate a synthetic corpus bundle")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--docs-per-level", type=int, default=datagen.GenConfig.docs_per_level)
    p.add_argument("--standalone-per-level", type=int, default=datagen.GenConfig.standalone_per_level)
    p.add_argument("--lexicon-size", type=int, default=datagen.GenConfig.lexicon_size)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    return parser


def run_cli(argv: list[str] | None = None) -> int:
    """Entry point returning the exit code (no sys.exit)."""
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except _CliError as exc:
        sys.stderr.write(f"cefrlab: error: {exc}\n")
        return 3


def main() -> None:
    sys.exit(run_cli())
