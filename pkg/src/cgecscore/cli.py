"""Command-line interface.

Subcommands:
  evaluate   score one or more hypothesis files against a corpus
  correlate  Pearson r and two-sided p over a metric table's column pairs
  validate   corpus sanity check with diagnostics

Exit codes: 0 success, 1 usage error, 2 data error. All I/O is UTF-8.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from cgecscore.dataset import (
    CORPUS_FORMATS,
    HYPOTHESIS_FORMATS,
    load_corpus,
    load_hypotheses,
    validate_corpus,
)
from cgecscore.errors import DataError
from cgecscore.metrics import BleuConfig, MeaningPreservationConfig, evaluate_system
from cgecscore.report import (
    build_manifest,
    correlation_payload,
    render_correlation_markdown,
    render_correlation_tsv,
    render_json,
    render_report_markdown,
    render_systems_markdown,
    render_systems_tsv,
    report_payload,
    systems_payload,
)
from cgecscore.stats import ConstantInputError, MetricTable, correlation_matrix
from cgecscore.textcore import NormalizationPolicy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

log = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; this tool reserves 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_policy_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--nfc",
        action="store_true",
        help="apply Unicode canonical composition before comparing",
    )
    parser.add_argument(
        "--strip-internal-whitespace",
        action="store_true",
        help="delete whitespace inside sentences before comparing",
    )


def _add_format_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        action="append",
        choices=("json", "tsv", "markdown"),
        help="output format; repeatable (default: json)",
    )
    parser.add_argument(
        "--out",
        metavar="DIR",
        help="write reports into DIR instead of stdout",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="cgecscore",
        description="Character-level, segmentation-free metrics for Chinese GEC outputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("evaluate", help="score hypothesis files against a corpus")
    p_eval.add_argument("--corpus", required=True, help="corpus file")
    p_eval.add_argument(
        "--corpus-format", choices=CORPUS_FORMATS, default="jsonl"
    )
    p_eval.add_argument(
        "--hyp",
        action="append",
        required=True,
        metavar="NAME=PATH",
        help="hypothesis file; repeatable. Bare PATH is allowed for a single system",
    )
    p_eval.add_argument(
        "--hyp-format", choices=HYPOTHESIS_FORMATS, default="lines"
    )
    p_eval.add_argument(
        "--max-n", type=int, default=4, help="maximum n-gram order (default 4)"
    )
    p_eval.add_argument(
        "--mp-t",
        type=float,
        default=0.85,
        help="meaning-preservation trade-off t in (0,1) (default 0.85)",
    )
    p_eval.add_argument(
        "--jobs", type=int, default=1, help="worker threads per system (default 1)"
    )
    p_eval.add_argument(
        "--per-sentence",
        action="store_true",
        help="include per-instance match/MP values in JSON reports",
    )
    _add_policy_flags(p_eval)
    _add_format_flags(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_corr = sub.add_parser(
        "correlate", help="correlate metric columns across systems"
    )
    p_corr.add_argument("table", help="TSV metric table: header row, first column system")
    p_corr.add_argument(
        "--columns",
        help="comma-separated subset of columns to correlate (default: all)",
    )
    _add_format_flags(p_corr)
    p_corr.set_defaults(func=cmd_correlate)

    p_val = sub.add_parser("validate", help="check a corpus and print diagnostics")
    p_val.add_argument("corpus", help="corpus file")
    p_val.add_argument(
        "--corpus-format", choices=CORPUS_FORMATS, default="jsonl"
    )
    p_val.set_defaults(func=cmd_validate)

    return parser


def _parse_hyp_specs(specs: list[str]) -> list[tuple[str, str]]:
    systems = []
    for spec in specs:
        if "=" in spec:
            name, _, path = spec.partition("=")
            name = name.strip()
            if not name or not path:
                raise ValueError(f"bad --hyp value {spec!r}; expected NAME=PATH")
        else:
            if len(specs) > 1:
                raise ValueError(
                    "multi-system runs require NAME=PATH for every --hyp"
                )
            name, path = Path(spec).stem, spec
        systems.append((name, path))
    names = [n for n, _ in systems]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate system names in --hyp: {names!r}")
    return systems


def _safe_filename(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "._-" else "_" for ch in name)


_EXTENSIONS = {"json": "json", "tsv": "tsv", "markdown": "md"}


def _emit(out_dir: str | None, filename: str, content: str) -> None:
    if out_dir is None:
        sys.stdout.write(content)
    else:
        target = Path(out_dir) / filename
        target.write_text(content, encoding="utf-8")
        print(f"wrote {target}")


def cmd_evaluate(args) -> int:
    if args.jobs < 1:
        raise ValueError(f"--jobs must be >= 1, got {args.jobs}")
    policy = NormalizationPolicy(
        apply_canonical_composition=args.nfc,
        strip_internal_whitespace=args.strip_internal_whitespace,
    )
    bleu_config = BleuConfig(max_order=args.max_n)
    mp_config = MeaningPreservationConfig(t=args.mp_t)

    corpus = load_corpus(args.corpus, format=args.corpus_format)
    problems = [d for d in validate_corpus(corpus) if d.severity == "error"]
    if problems:
        for diag in problems:
            print(f"{args.corpus}: {diag}", file=sys.stderr)
        return EXIT_DATA

    systems = _parse_hyp_specs(args.hyp)
    hypothesis_sets = [
        load_hypotheses(path, corpus, format=args.hyp_format, system_name=name)
        for name, path in systems
    ]

    manifest = build_manifest(
        inputs=[
            {"role": "corpus", "path": args.corpus, "format": args.corpus_format},
            *(
                {"role": "hypotheses", "system": name, "path": path, "format": args.hyp_format}
                for name, path in systems
            ),
        ],
        policy=policy,
        bleu_config=bleu_config,
        mp_config=mp_config,
    )

    reports = [
        evaluate_system(
            hyps,
            corpus,
            bleu_config=bleu_config,
            mp_config=mp_config,
            policy=policy,
            jobs=args.jobs,
            keep_per_sentence=args.per_sentence,
        )
        for hyps in hypothesis_sets
    ]

    formats = args.format or ["json"]
    if args.out is not None:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    for report in reports:
        stem = _safe_filename(report.system_name)
        for fmt_name in formats:
            ext = _EXTENSIONS[fmt_name]
            if fmt_name == "json":
                content = render_json(
                    {"manifest": manifest, "metrics": report_payload(report)}
                )
            elif fmt_name == "markdown":
                content = render_report_markdown(report)
            else:
                content = render_systems_tsv([report])
            _emit(args.out, f"{stem}.report.{ext}", content)
    if len(reports) > 1:
        for fmt_name in formats:
            ext = _EXTENSIONS[fmt_name]
            if fmt_name == "json":
                content = render_json(
                    {"manifest": manifest, "systems": systems_payload(reports)}
                )
            elif fmt_name == "markdown":
                content = render_systems_markdown(reports)
            else:
                content = render_systems_tsv(reports)
            _emit(args.out, f"systems.{ext}", content)
    return EXIT_OK


def cmd_correlate(args) -> int:
    table = MetricTable.from_tsv(
        Path(args.table).read_text(encoding="utf-8"), origin=args.table
    )
    columns = None
    if args.columns:
        columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    matrix = correlation_matrix(table, columns)

    manifest = build_manifest(
        inputs=[{"role": "metric_table", "path": args.table, "format": "tsv"}],
        policy=NormalizationPolicy(),
    )
    formats = args.format or ["json"]
    if args.out is not None:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    for fmt_name in formats:
        ext = _EXTENSIONS[fmt_name]
        if fmt_name == "json":
            content = render_json(
                {"manifest": manifest, "correlations": correlation_payload(matrix)}
            )
        elif fmt_name == "markdown":
            content = render_correlation_markdown(matrix)
        else:
            content = render_correlation_tsv(matrix)
        _emit(args.out, f"correlations.{ext}", content)
    return EXIT_OK


def cmd_validate(args) -> int:
    corpus = load_corpus(args.corpus, format=args.corpus_format)
    diags = validate_corpus(corpus)
    for diag in diags:
        print(str(diag))
    errors = sum(1 for d in diags if d.severity == "error")
    warnings = sum(1 for d in diags if d.severity == "warning")
    print(f"{errors} errors, {warnings} warnings")
    return EXIT_DATA if errors else EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConstantInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc.filename}", file=sys.stderr)
        return EXIT_DATA
    except IsADirectoryError as exc:
        print(f"error: {exc.filename} is a directory", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
