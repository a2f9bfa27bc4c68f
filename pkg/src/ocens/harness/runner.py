"""End-to-end 5x2 evaluation of members and ensembles on labeled datasets."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .. import __version__, classifiers
from ..combiners import RULES, combine_batch, train_esbe, train_tupso
from ..data import POSITIVE
from ..dataset_io import binarize, fit_encoder, load_csv, make_5x2_plan
from ..estimation import OCA, OCF, performance_from_votes
from ..evaluation import auc
from .config import ACTUAL_BEST, ESBE, RANDOM, TUPSO

log = logging.getLogger(__name__)

PIPELINE = (
    "two most frequent classes kept (more frequent = target); one-hot categoricals; "
    "median imputation and min-max scaling fitted on each training fold's positives, "
    "test values clamped to [0, 1]; 5x2 CV; training on positives only"
)


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    method: str
    repetition: int
    fold: int
    auc: float


@dataclass(frozen=True)
class MemberMetricRow:
    """Per-fold test-set metrics of one member, for estimator correlation."""

    dataset: str
    member: str
    repetition: int
    fold: int
    f_measure: float
    ocf: float
    accuracy: float
    oca: float
    tpr: float


@dataclass
class EvaluationReport:
    datasets: list
    methods: list
    rows: list = field(default_factory=list)
    member_metrics: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    members: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def expected_cells(self):
        return len(self.datasets) * len(self.methods) * 10

    @property
    def partial(self):
        return len(self.rows) < self.expected_cells


def _fold_seed(seed, d_index, rep, fold):
    return int(np.random.SeedSequence([seed, d_index, rep, fold]).generate_state(1)[0])


def two_class_metrics(votes, labels, prior):
    """F-measure, OCF, accuracy, OCA and TPR of one member's test votes.

    OCA/OCF see the whole test fold as the unlabeled sample for
    ``P[f(x)=1]`` and its positives for the TPR.
    """
    votes = np.asarray(votes).astype(bool)
    pos = np.asarray(labels) == POSITIVE
    tp = int(np.sum(votes & pos))
    fp = int(np.sum(votes & ~pos))
    tn = int(np.sum(~votes & ~pos))
    fn = int(np.sum(~votes & pos))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    acc = (tp + tn) / len(votes)
    unl = votes.astype(np.int64)
    est_f = performance_from_votes(votes[pos], OCF, prior, unl)
    est_a = performance_from_votes(votes[pos], OCA, prior, unl)
    return f, est_f.value, acc, est_a.value, recall


def _evaluate_fold(config, data, train_idx, test_idx, inner_seed):
    """AUC for every member and ensemble on one train/test split."""
    train_view = data.subset(train_idx).positives()
    census = train_view.census()
    if census["negative"] or census["unlabeled"]:
        raise AssertionError(f"non-positive instances leaked into training: {census}")
    test = data.subset(test_idx)
    specs = config.members
    members = [classifiers.train(s, train_view) for s in specs]
    S = np.column_stack([m.score(test.X) for m in members])
    thetas = [m.theta for m in members]
    aucs = {s.name: auc(S[:, j], test.y) for j, s in enumerate(specs)}

    need = set(config.ensembles)
    f_t = None
    if need & ({TUPSO} | set(RULES)):
        tupso = train_tupso(specs, train_view, config.k_inner, config.metric, config.meta_spec,
                            prior=config.prior, seed=inner_seed, members=members)
        f_t = tupso.f_t
        if TUPSO in need:
            aucs[TUPSO] = auc(tupso.score(test.X), test.y)
    for rule in RULES:
        if rule in need:
            aucs[rule] = auc(combine_batch(rule, S, thetas, f_t), test.y)
    if ESBE in need:
        esbe = train_esbe(specs, train_view, config.metric, config.prior, seed=inner_seed,
                          members=members)
        aucs[ESBE] = aucs[specs[esbe.dominant].name]

    metrics = []
    for j, s in enumerate(specs):
        metrics.append((s.name, two_class_metrics(S[:, j] >= thetas[j], test.y, config.prior)))
    return aucs, metrics


def run_experiment(config):
    """Run the 5x2 protocol over every configured dataset.

    Stage failures are logged per (dataset, repetition, fold) and leave the
    affected cells missing; the run carries on.
    """
    started = time.perf_counter()
    report = EvaluationReport(
        datasets=[d.name for d in config.datasets],
        methods=config.methods,
        members=[m.name for m in config.members],
    )
    member_names = [m.name for m in config.members]
    for d_index, dcfg in enumerate(config.datasets):
        try:
            table = binarize(
                load_csv(dcfg.path, dcfg.class_column, None, dcfg.delimiter, dcfg.missing),
                dcfg.target,
            )
            plan = make_5x2_plan(len(table.rows), config.seed)
        except Exception as exc:
            log.error("dataset %s unusable: %s", dcfg.name, exc)
            report.failures.append((dcfg.name, -1, -1, f"{type(exc).__name__}: {exc}"))
            continue

        per_member = {name: {} for name in member_names}
        extra_rows = []
        for rep, fold, train_idx, test_idx in plan.folds():
            try:
                data = fit_encoder(table, train_idx).transform(table, dcfg.name)
                aucs, metrics = _evaluate_fold(
                    config, data, train_idx, test_idx, _fold_seed(config.seed, d_index, rep, fold)
                )
            except Exception as exc:
                log.warning("%s rep %d fold %d failed: %s", dcfg.name, rep, fold, exc)
                report.failures.append((dcfg.name, rep, fold, f"{type(exc).__name__}: {exc}"))
                continue
            for method in report.methods:
                if method in aucs:
                    extra_rows.append(ResultRow(dcfg.name, method, rep, fold, aucs[method]))
            for name in member_names:
                per_member[name][(rep, fold)] = aucs[name]
            for name, values in metrics:
                report.member_metrics.append(MemberMetricRow(dcfg.name, name, rep, fold, *values))

        rng = np.random.default_rng([config.seed, d_index, 7919])
        random_pick = member_names[int(rng.integers(len(member_names)))]
        means = [np.mean(list(per_member[n].values())) if per_member[n] else -np.inf
                 for n in member_names]
        best_pick = member_names[int(np.argmax(means))]
        for picked, label in ((random_pick, RANDOM), (best_pick, ACTUAL_BEST)):
            if label in config.ensembles:
                for (rep, fold), value in per_member[picked].items():
                    extra_rows.append(ResultRow(dcfg.name, label, rep, fold, value))
        report.metadata.setdefault("baselines", {})[dcfg.name] = {
            RANDOM: random_pick, ACTUAL_BEST: best_pick,
        }
        report.rows.extend(extra_rows)

    order = {m: i for i, m in enumerate(report.methods)}
    d_order = {d: i for i, d in enumerate(report.datasets)}
    report.rows.sort(key=lambda r: (d_order[r.dataset], order[r.method], r.repetition, r.fold))
    report.metadata.update({
        "version": __version__,
        "seed": config.seed,
        "metric": config.metric,
        "prior": config.prior,
        "k_inner": config.k_inner,
        "members": [
            {"name": m.name, "algorithm": m.algorithm, "params": m.params} for m in config.members
        ],
        "meta_classifier": {"algorithm": config.meta_spec.algorithm,
                            "params": config.meta_spec.params},
        "pipeline": PIPELINE,
        "wall_time_s": round(time.perf_counter() - started, 3),
    })
    return report
