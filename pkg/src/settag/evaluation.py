"""Scenario runner and metrics: accuracy, mean utility, mean set size,
coverage, known/unknown breakdowns, set-size histograms, beta sweeps."""

from __future__ import annotations

import io
from dataclasses import dataclass, fields
from statistics import mean, pstdev

import numpy as np

from .corpus import Corpus, Document, SplitPlan, assemble_scenario
from .setpred import PredictionSet, UtilityConfig, argmax_tag, ubop, utility
from .taggers import Tagger, make_tagger


class EvalError(Exception):
    pass


@dataclass(frozen=True)
class EvalReport:
    scenario: int
    tagger: str
    document: str
    beta: float
    tokens: int
    unknown_fraction: float
    accuracy: float
    utility: float
    set_size: float
    coverage: float
    acc_known: float
    acc_unknown: float
    util_known: float
    util_unknown: float
    size_known: float
    size_unknown: float


REPORT_COLUMNS = [f.name for f in fields(EvalReport)]


@dataclass(frozen=True)
class SetSizeHistogram:
    """Counts of predicted set sizes 1..s, split by word knownness."""

    known: tuple[int, ...]
    unknown: tuple[int, ...]

    def write_tsv(self, out) -> None:
        out.write("size\tcount_known\tcount_unknown\n")
        for i, (k, u) in enumerate(zip(self.known, self.unknown), start=1):
            out.write(f"{i}\t{k}\t{u}\n")


def evaluate(
    predictions: list[PredictionSet],
    gold: list[int],
    posteriors: np.ndarray,
    known_vocab: set[str],
    words: list[str],
    cfg: UtilityConfig,
    scenario: int = 0,
    tagger: str = "?",
    document: str = "?",
) -> tuple[EvalReport, SetSizeHistogram]:
    n = len(predictions)
    if not (n == len(gold) == len(posteriors) == len(words)):
        raise EvalError("predictions, gold, posteriors and words must align")

    correct, covered, utils, sizes, known_mask = [], [], [], [], []
    hist_known = [0] * cfg.s
    hist_unknown = [0] * cfg.s
    for pred, g, p, w in zip(predictions, gold, posteriors, words):
        is_known = w in known_vocab
        known_mask.append(is_known)
        correct.append(argmax_tag(p) == g)
        covered.append(g in pred)
        utils.append(utility(g, pred, cfg))
        sizes.append(len(pred))
        (hist_known if is_known else hist_unknown)[len(pred) - 1] += 1

    def agg(values, mask=None):
        if mask is not None:
            values = [v for v, m in zip(values, mask) if m]
        return mean(values) if values else 0.0

    unk_mask = [not m for m in known_mask]
    report = EvalReport(
        scenario=scenario,
        tagger=tagger,
        document=document,
        beta=cfg.beta,
        tokens=n,
        unknown_fraction=agg([float(m) for m in unk_mask]),
        accuracy=agg([float(c) for c in correct]),
        utility=agg(utils),
        set_size=agg([float(x) for x in sizes]),
        coverage=agg([float(c) for c in covered]),
        acc_known=agg([float(c) for c in correct], known_mask),
        acc_unknown=agg([float(c) for c in correct], unk_mask),
        util_known=agg(utils, known_mask),
        util_unknown=agg(utils, unk_mask),
        size_known=agg([float(x) for x in sizes], known_mask),
        size_unknown=agg([float(x) for x in sizes], unk_mask),
    )
    histogram = SetSizeHistogram(known=tuple(hist_known), unknown=tuple(hist_unknown))
    return report, histogram


def evaluate_document(
    model: Tagger,
    doc: Document,
    beta: float,
    scenario: int,
    posteriors: np.ndarray | None = None,
) -> tuple[EvalReport, SetSizeHistogram]:
    cfg = UtilityConfig(beta=beta, s=model.tagset_.size)
    if posteriors is None:
        posteriors = model.posteriors(doc)
    preds = [ubop(p, cfg) for p in posteriors]
    gold = [t.gold for t in doc.tokens]
    words = [t.normalized for t in doc.tokens]
    return evaluate(
        preds,
        gold,
        posteriors,
        model.vocabulary_,
        words,
        cfg,
        scenario=scenario,
        tagger=model.kind,
        document=doc.name,
    )


def run_scenario(
    corpus: Corpus,
    plan: SplitPlan,
    tagger_kind: str,
    scenario: int,
    beta: float = 1.0,
    target_doc: int | None = None,
    tagger_params: dict | None = None,
) -> tuple[list[EvalReport], list[SetSizeHistogram], Tagger]:
    """Train on the scenario's train set and evaluate each test document."""
    train_docs, test_docs = assemble_scenario(corpus, plan, scenario, target_doc)
    model = make_tagger(tagger_kind, **(tagger_params or {}))
    model.fit(train_docs, corpus.tagset)
    reports, histograms = [], []
    for doc in test_docs:
        rep, hist = evaluate_document(model, doc, beta, scenario)
        reports.append(rep)
        histograms.append(hist)
    return reports, histograms, model


@dataclass(frozen=True)
class SweepRow:
    beta: float
    utility: float
    set_size: float
    utility_std: float
    set_size_std: float


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]


def beta_sweep(
    corpus: Corpus,
    plan: SplitPlan,
    tagger_kind: str,
    betas: list[float],
    tagger_params: dict | None = None,
) -> SweepTable:
    """Scenario-3 sweep: the model trains once, each beta re-runs only the
    set-valued post-processing. Metrics are macro-averaged per document
    first, then across documents."""
    if not betas or sorted(betas) != list(betas) or len(set(betas)) != len(betas):
        raise EvalError("betas must be a non-empty strictly increasing grid")
    train_docs, test_docs = assemble_scenario(corpus, plan, 3, None)
    model = make_tagger(tagger_kind, **(tagger_params or {}))
    model.fit(train_docs, corpus.tagset)
    cached = [model.posteriors(doc) for doc in test_docs]

    rows = []
    for beta in betas:
        utils, sizes = [], []
        for doc, post in zip(test_docs, cached):
            rep, _ = evaluate_document(model, doc, beta, 3, posteriors=post)
            utils.append(rep.utility)
            sizes.append(rep.set_size)
        rows.append(
            SweepRow(
                beta=beta,
                utility=mean(utils),
                set_size=mean(sizes),
                utility_std=pstdev(utils) if len(utils) > 1 else 0.0,
                set_size_std=pstdev(sizes) if len(sizes) > 1 else 0.0,
            )
        )
    return SweepTable(rows=tuple(rows))


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def emit_report(reports: list[EvalReport], fmt: str = "tsv") -> str:
    if fmt == "tsv":
        out = io.StringIO()
        out.write("\t".join(REPORT_COLUMNS) + "\n")
        for rep in reports:
            out.write(
                "\t".join(_fmt(getattr(rep, col)) for col in REPORT_COLUMNS) + "\n"
            )
        return out.getvalue()
    if fmt == "json":
        import json

        return json.dumps(
            [
                {col: getattr(rep, col) for col in REPORT_COLUMNS}
                for rep in reports
            ],
            indent=2,
            sort_keys=True,
        ) + "\n"
    raise EvalError(f"unknown report format: {fmt}")


def emit_sweep(table: SweepTable) -> str:
    out = io.StringIO()
    out.write("beta\tutility\tset_size\tutility_std\tset_size_std\n")
    for row in table.rows:
        out.write(
            f"{row.beta:.6f}\t{row.utility:.6f}\t{row.set_size:.6f}"
            f"\t{row.utility_std:.6f}\t{row.set_size_std:.6f}\n"
        )
    return out.getvalue()
