"""Raw result files, plain-text result tables and the statistics summary."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from ..evaluation import (
    bonferroni_dunn,
    friedman_test,
    pearson,
    rank_counts,
    rank_entropy,
    rank_rows,
)
from .config import ACTUAL_BEST, TUPSO
from .runner import EvaluationReport, MemberMetricRow, ResultRow

RAW_FILE = "raw_results.csv"
METRICS_FILE = "member_metrics.csv"
META_FILE = "run_meta.json"
TABLES_FILE = "tables.md"
STATS_FILE = "stats.md"
RAW_HEADER = ["dataset", "method", "repetition", "fold", "auc"]
METRICS_HEADER = ["dataset", "member", "repetition", "fold", "f_measure", "ocf", "accuracy",
                  "oca", "tpr"]
ESTIMATOR_COLUMNS = ["f_measure", "ocf", "accuracy", "oca", "tpr"]


def _real(x):
    return format(float(x), ".17g")


def write_raw(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RAW_HEADER)
        for r in rows:
            w.writerow([r.dataset, r.method, r.repetition, r.fold, _real(r.auc)])


def read_raw(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RAW_HEADER:
            raise ValueError(f"{path}: expected header {RAW_HEADER}, got {header}")
        return [ResultRow(d, m, int(r), int(f), float(a)) for d, m, r, f, a in reader]


def write_member_metrics(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(METRICS_HEADER)
        for r in rows:
            w.writerow([r.dataset, r.member, r.repetition, r.fold]
                       + [_real(getattr(r, c)) for c in ESTIMATOR_COLUMNS])


def read_member_metrics(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        return [MemberMetricRow(d, m, int(r), int(f), *map(float, rest))
                for d, m, r, f, *rest in reader]


def report_from_files(raw_path, members=None):
    """Rebuild a report from a raw results file (and its sibling files)."""
    raw_path = Path(raw_path)
    rows = read_raw(raw_path)
    datasets, methods = [], []
    for r in rows:
        if r.dataset not in datasets:
            datasets.append(r.dataset)
        if r.method not in methods:
            methods.append(r.method)
    meta, metrics = {}, []
    if (raw_path.parent / META_FILE).exists():
        meta = json.loads((raw_path.parent / META_FILE).read_text())
    if (raw_path.parent / METRICS_FILE).exists():
        metrics = read_member_metrics(raw_path.parent / METRICS_FILE)
    if members is None:
        members = [m["name"] for m in meta.get("members", [])]
        if not members:
            members = sorted({m.member for m in metrics}, key=methods.index) if metrics else []
    methods = list(meta.get("methods", methods))
    datasets = list(meta.get("datasets", datasets))
    return EvaluationReport(datasets, methods, rows, metrics, meta.get("failures", []),
                            members, meta)


def auc_table(report, methods=None):
    """Mean AUC over folds per (dataset, method); NaN where nothing ran."""
    methods = list(methods or report.methods)
    acc = {}
    for r in report.rows:
        acc.setdefault((r.dataset, r.method), []).append(r.auc)
    T = np.full((len(report.datasets), len(methods)), np.nan)
    for i, d in enumerate(report.datasets):
        for j, m in enumerate(methods):
            if (d, m) in acc:
                T[i, j] = float(np.mean(acc[(d, m)]))
    return T


def _fmt(x, digits=3):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "n/a"
    return f"{x:.{digits}f}"


def render_table(title, datasets, methods, T):
    ranks = rank_rows(T)
    lines = [f"### {title}", "", "| Dataset | " + " | ".join(methods) + " |",
             "|---|" + "---|" * len(methods)]
    for i, d in enumerate(datasets):
        cells = [
            "n/a" if np.isnan(T[i, j]) else f"{T[i, j]:.3f} ({int(ranks.display[i, j])})"
            for j in range(len(methods))
        ]
        lines.append(f"| {d} | " + " | ".join(cells) + " |")
    lines.append("| Average Rank | " + " | ".join(_fmt(v, 2) for v in ranks.average) + " |")
    lines.append("")
    return "\n".join(lines)


def method_groups(report):
    members = [m for m in report.methods if m in report.members]
    ensembles = [m for m in report.methods if m not in report.members]
    return members, ensembles


def render_tables(report):
    members, ensembles = method_groups(report)
    parts = ["# AUC results", "",
             "Mean AUC over the 5x2 folds; the parenthesised number is the rank "
             "within the table (ties share the best rank).", ""]
    if report.metadata.get("pipeline"):
        parts += [f"Pipeline: {report.metadata['pipeline']}.", ""]
    if members:
        parts.append(render_table("Base classifiers", report.datasets, members,
                                  auc_table(report, members)))
    if ensembles:
        parts.append(render_table("Ensembles", report.datasets, ensembles,
                                  auc_table(report, ensembles)))
    return "\n".join(parts)


def _friedman_lines(name, methods, T):
    ranks = rank_rows(T)
    complete = ranks.complete_rows()
    if complete.shape[0] < 2 or len(methods) < 2:
        return [f"- {name}: Friedman n/a (needs >= 2 complete datasets, have "
                f"{complete.shape[0]})"], ranks, None
    res = friedman_test(ranks)
    tail = " (saturated)" if res.saturated else ""
    return [f"- {name}: chi2_F = {res.statistic:.4f}, F_F = {_fmt(res.f_statistic, 4)}, "
            f"p = {res.p_value:.4g}{tail}, reject at 0.05: {'yes' if res.reject_at_05 else 'no'}"
            ], ranks, res


def _dunn_lines(methods, ranks, control_name):
    if control_name not in methods:
        return [f"- Bonferroni-Dunn vs {control_name}: n/a (method not run)"]
    if ranks.complete_rows().shape[0] < 2:
        return [f"- Bonferroni-Dunn vs {control_name}: n/a (needs >= 2 complete datasets)"]
    res = bonferroni_dunn(ranks, methods.index(control_name))
    lines = [f"Bonferroni-Dunn, control = {control_name} (alpha = 0.05, two-sided; "
             f"'+' row method significantly better than {control_name}, '-' significantly "
             "worse; z < 0 means the control ranks better):", "",
             "| Method | z | p | |", "|---|---|---|---|"]
    for j, m in enumerate(methods):
        if m == control_name:
            continue
        mark = ""
        if res.significant[j]:
            mark = "-" if res.z[j] < 0 else "+"
        lines.append(f"| {m} | {res.z[j]:.4f} | {res.p_values[j]:.4g} | {mark} |")
    lines.append("")
    return lines


def render_stats(report):
    members, ensembles = method_groups(report)
    out = ["# Statistics", ""]
    out.append("## Friedman (Iman-Davenport)")
    out.append("")
    member_ranks = None
    for name, group in (("base classifiers", members), ("ensembles", ensembles)):
        if not group:
            continue
        lines, ranks, _ = _friedman_lines(name, group, auc_table(report, group))
        out.extend(lines)
        if name == "base classifiers":
            member_ranks = ranks
    out.append("")

    out.append("## Post-hoc comparisons")
    out.append("")
    if ensembles:
        ranks = rank_rows(auc_table(report, ensembles))
        out.extend(_dunn_lines(ensembles, ranks, TUPSO))
        out.extend(_dunn_lines(ensembles, ranks, ACTUAL_BEST))
    out.append("")

    out.append("## Rank entropy of base classifiers")
    out.append("")
    if member_ranks is not None and len(members) > 1:
        counts = rank_counts(member_ranks.display, len(members))
        if counts.sum(axis=1).all():
            per_method, per_rank = rank_entropy(counts)
        else:
            per_method = per_rank = np.full(len(members), np.nan)
        header = " | ".join(f"rank {p + 1}" for p in range(len(members)))
        out.append(f"| Classifier | {header} | entropy |")
        out.append("|---|" + "---|" * (len(members) + 1))
        for j, m in enumerate(members):
            out.append(f"| {m} | " + " | ".join(str(c) for c in counts[j])
                       + f" | {_fmt(per_method[j])} |")
        out.append("| Rank entropy | " + " | ".join(_fmt(v) for v in per_rank) + " | |")
        out.append(f"\nMaximum possible entropy: {math.log2(len(members)):.3f} bits.")
    else:
        out.append("n/a")
    out.append("")

    out.append("## Pearson correlation with the actual best classifier")
    out.append("")
    if ACTUAL_BEST in report.methods and len(report.datasets) >= 2:
        T = auc_table(report, report.methods)
        ref = T[:, report.methods.index(ACTUAL_BEST)]
        cells = []
        for j, m in enumerate(report.methods):
            ok = ~np.isnan(T[:, j]) & ~np.isnan(ref)
            try:
                cells.append(f"{m}: {pearson(T[ok, j], ref[ok]):.3f}")
            except ValueError:
                cells.append(f"{m}: n/a")
        out.append("; ".join(cells))
    else:
        out.append("n/a (needs the actual_best baseline and >= 2 datasets)")
    out.append("")

    out.append("## Estimator correlation (test-fold metrics of base classifiers)")
    out.append("")
    if len(report.member_metrics) >= 2:
        M = np.array([[getattr(r, c) for c in ESTIMATOR_COLUMNS] for r in report.member_metrics])
        out.append("| | " + " | ".join(ESTIMATOR_COLUMNS) + " |")
        out.append("|---|" + "---|" * len(ESTIMATOR_COLUMNS))
        for a, ca in enumerate(ESTIMATOR_COLUMNS):
            cells = []
            for b in range(len(ESTIMATOR_COLUMNS)):
                try:
                    cells.append(f"{pearson(M[:, a], M[:, b]):.2f}")
                except ValueError:
                    cells.append("n/a")
            out.append(f"| {ca} | " + " | ".join(cells) + " |")
    else:
        out.append("n/a")
    out.append("")

    if report.failures:
        out.append("## Failures")
        out.append("")
        for d, rep, fold, msg in report.failures:
            out.append(f"- {d} rep {rep} fold {fold}: {msg}")
        out.append("")
    return "\n".join(out)


def emit_reports(report, outdir):
    """Write raw results, member metrics, tables and the stats summary."""
    outdir = Path(outdir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {outdir}: {exc}") from exc
    write_raw(report.rows, outdir / RAW_FILE)
    write_member_metrics(report.member_metrics, outdir / METRICS_FILE)
    meta = dict(report.metadata)
    meta.update({
        "datasets": report.datasets,
        "methods": report.methods,
        "failures": [list(f) for f in report.failures],
        "cells": len(report.rows),
        "expected_cells": report.expected_cells,
    })
    meta.setdefault("members", [{"name": m} for m in report.members])
    (outdir / META_FILE).write_text(json.dumps(meta, indent=1, sort_keys=True))
    (outdir / TABLES_FILE).write_text(render_tables(report))
    (outdir / STATS_FILE).write_text(render_stats(report))
    return [outdir / f for f in (RAW_FILE, METRICS_FILE, META_FILE, TABLES_FILE, STATS_FILE)]
