"""Report payloads and renderings.

JSON is the canonical format; TSV and markdown are renderings of the same
payload. Every report embeds a run manifest (tool version, input digests,
normalization policy, metric configs) so no score circulates without the
comparison rules that produced it. The manifest timestamp is the only field
that differs between two runs on identical inputs.

Human-readable formats print reals with 6 significant digits; JSON keeps
full precision.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from cgecscore import __version__
from cgecscore.metrics import BleuConfig, MeaningPreservationConfig, MetricReport
from cgecscore.stats import CorrelationMatrix
from cgecscore.textcore import NormalizationPolicy


def fmt(value: float) -> str:
    """Human-format a real with 6 significant digits."""
    return format(value, ".6g")


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(
    inputs: Sequence[dict],
    policy: NormalizationPolicy,
    bleu_config: BleuConfig | None = None,
    mp_config: MeaningPreservationConfig | None = None,
) -> dict:
    """Assemble the run manifest. `inputs` entries carry role/path (+extras);
    a sha256 digest is added for each."""
    described = []
    for entry in inputs:
        entry = dict(entry)
        entry["sha256"] = file_digest(entry["path"])
        entry["path"] = str(entry["path"])
        described.append(entry)
    manifest = {
        "tool": {"name": "cgecscore", "version": __version__},
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "inputs": described,
        "normalization_policy": policy.as_dict(),
    }
    if bleu_config is not None:
        manifest["bleu"] = {
            "max_order": bleu_config.max_order,
            "weights": list(bleu_config.weights),
        }
    if mp_config is not None:
        manifest["meaning_preservation"] = {"t": mp_config.t}
    return manifest


def report_payload(report: MetricReport) -> dict:
    bleu = report.bleu
    payload = {
        "system": report.system_name,
        "num_instances": report.num_instances,
        "acc_sen": report.acc_sen,
        "bleu_c": {
            "value": bleu.value,
            "brevity_penalty": bleu.brevity.value,
            "brevity_degenerate": bleu.brevity.degenerate,
            "hypothesis_chars": bleu.brevity.hypothesis_chars,
            "reference_chars": bleu.brevity.reference_chars,
            "geometric_mean": bleu.geometric_mean,
            "precisions": [
                {
                    "order": p.order,
                    "numerator": p.numerator,
                    "denominator": p.denominator,
                    "value": p.value,
                }
                for p in bleu.precisions
            ],
            "zero_orders": list(bleu.zero_orders),
            "diagnostics": list(bleu.diagnostics),
        },
        "mp": report.mp,
        "mp_average": report.mp_average,
        "mp_prime": report.mp_prime,
    }
    if report.per_sentence is not None:
        payload["per_sentence"] = [
            {
                "id": s.instance_id,
                "exact_match": s.exact_match,
                "meaning_preservation": s.meaning_preservation,
            }
            for s in report.per_sentence
        ]
    return payload


def render_json(payload: dict) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


_TABLE_COLUMNS = ("acc_sen", "bleu_c", "mp", "mp_prime")


def _table_row_values(report: MetricReport) -> list[float]:
    return [report.acc_sen, report.bleu.value, report.mp, report.mp_prime]


def render_report_markdown(report: MetricReport) -> str:
    lines = [
        f"## {report.system_name}",
        "",
        "| metric | value |",
        "| --- | ---: |",
        f"| instances | {report.num_instances} |",
        f"| acc_sen | {fmt(report.acc_sen)} |",
        f"| bleu_c | {fmt(report.bleu.value)} |",
        f"| brevity_penalty | {fmt(report.bleu.brevity.value)} |",
    ]
    for p in report.bleu.precisions:
        shown = "undefined" if p.value is None else fmt(p.value)
        lines.append(f"| P_{p.order} | {shown} ({p.numerator}/{p.denominator}) |")
    lines += [
        f"| mp | {fmt(report.mp)} |",
        f"| mp_average | {fmt(report.mp_average)} |",
        f"| mp_prime | {fmt(report.mp_prime)} |",
    ]
    for note in report.bleu.diagnostics:
        lines.append(f"- note: {note}")
    return "\n".join(lines) + "\n"


def render_systems_markdown(reports: Sequence[MetricReport]) -> str:
    header = "| system | " + " | ".join(_TABLE_COLUMNS) + " |"
    rule = "| --- |" + " ---: |" * len(_TABLE_COLUMNS)
    lines = [header, rule]
    for report in reports:
        cells = " | ".join(fmt(v) for v in _table_row_values(report))
        lines.append(f"| {report.system_name} | {cells} |")
    return "\n".join(lines) + "\n"


def render_systems_tsv(reports: Sequence[MetricReport]) -> str:
    lines = ["system\t" + "\t".join(_TABLE_COLUMNS)]
    for report in reports:
        cells = "\t".join(repr(v) for v in _table_row_values(report))
        lines.append(f"{report.system_name}\t{cells}")
    return "\n".join(lines) + "\n"


def systems_payload(reports: Sequence[MetricReport]) -> list[dict]:
    return [
        {
            "system": report.system_name,
            "acc_sen": report.acc_sen,
            "bleu_c": report.bleu.value,
            "mp": report.mp,
            "mp_prime": report.mp_prime,
        }
        for report in reports
    ]


def correlation_payload(matrix: CorrelationMatrix) -> dict:
    return {
        "columns": list(matrix.columns),
        "num_systems": matrix.num_systems,
        "pairs": [
            {"a": pair.a, "b": pair.b, "r": pair.r, "p": pair.p}
            for pair in matrix.pairs
        ],
    }


def render_correlation_markdown(matrix: CorrelationMatrix) -> str:
    """Lower-triangular matrix of "r (p)" cells."""
    cols = matrix.columns
    lines = [
        "| | " + " | ".join(cols[:-1]) + " |",
        "| --- |" + " --- |" * (len(cols) - 1),
    ]
    for i, row_name in enumerate(cols[1:], 1):
        cells = []
        for col_name in cols[:-1]:
            if cols.index(col_name) < i:
                pair = matrix.get(row_name, col_name)
                cells.append(f"{pair.r:.4f} ({pair.p:.4f})")
            else:
                cells.append("-")
        lines.append(f"| {row_name} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def render_correlation_tsv(matrix: CorrelationMatrix) -> str:
    lines = ["a\tb\tr\tp"]
    for pair in matrix.pairs:
        lines.append(f"{pair.a}\t{pair.b}\t{pair.r!r}\t{pair.p!r}")
    return "\n".join(lines) + "\n"
