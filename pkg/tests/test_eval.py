import numpy as np
import pytest

from settag.corpus import SplitPlan
from settag.evaluation import (
    EvalError,
    REPORT_COLUMNS,
    beta_sweep,
    emit_report,
    emit_sweep,
    evaluate,
    run_scenario,
)
from settag.setpred import PredictionSet, UtilityConfig

from .conftest import corpus_from_text


def singleton(tag, eu=1.0):
    return PredictionSet(tags=(tag,), expected_utility=eu)


def posterior(s, top, p=0.9):
    out = np.full(s, (1 - p) / (s - 1))
    out[top] = p
    return out


class TestEvaluate:
    def test_perfect_singletons(self):
        cfg = UtilityConfig(beta=1.0, s=4)
        preds = [singleton(1), singleton(2)]
        gold = [1, 2]
        posts = np.stack([posterior(4, 1), posterior(4, 2)])
        rep, hist = evaluate(preds, gold, posts, {"a"}, ["a", "b"], cfg)
        assert rep.accuracy == rep.utility == rep.coverage == 1.0
        assert rep.set_size == 1.0
        assert hist.known == (2, 0, 0, 0) or hist.known[0] + hist.unknown[0] == 2

    def test_never_covered(self):
        cfg = UtilityConfig(beta=1.0, s=4)
        preds = [PredictionSet(tags=(0, 1), expected_utility=0.5), singleton(2)]
        gold = [3, 3]
        posts = np.stack([posterior(4, 0), posterior(4, 2)])
        rep, _ = evaluate(preds, gold, posts, set(), ["a", "b"], cfg)
        assert rep.utility == 0.0
        assert rep.coverage == 0.0

    def test_hand_computed_mixture(self):
        # one exact singleton plus one covered pair: utility (1 + 2/3) / 2
        cfg = UtilityConfig(beta=1.0, s=4)
        preds = [singleton(0), PredictionSet(tags=(1, 2), expected_utility=0.6)]
        gold = [0, 2]
        posts = np.stack([posterior(4, 0), posterior(4, 1)])
        rep, _ = evaluate(preds, gold, posts, {"a", "b"}, ["a", "b"], cfg)
        assert rep.utility == pytest.approx(5 / 6, abs=1e-12)
        assert rep.set_size == 1.5
        assert rep.coverage == 1.0
        assert rep.accuracy == 0.5  # argmax of second posterior is tag 1

    def test_known_unknown_split(self):
        cfg = UtilityConfig(beta=1.0, s=3)
        preds = [singleton(0), singleton(1)]
        gold = [0, 1]
        posts = np.stack([posterior(3, 0), posterior(3, 1)])
        rep, hist = evaluate(preds, gold, posts, {"known"}, ["known", "new"], cfg)
        assert rep.unknown_fraction == 0.5
        assert rep.acc_known == 1.0 and rep.acc_unknown == 1.0
        assert hist.known == (1, 0, 0) and hist.unknown == (1, 0, 0)

    def test_length_mismatch_rejected(self):
        cfg = UtilityConfig(beta=1.0, s=3)
        with pytest.raises(EvalError):
            evaluate([singleton(0)], [0, 1], np.zeros((2, 3)), set(), ["a", "b"], cfg)


def scenario_corpus():
    # 20 tokens/document so splits are non-trivial
    def doc(prefix):
        lines = []
        for i in range(10):
            lines.append(f"{prefix}{i % 3}\tX" if i % 2 == 0 else f"is\tY")
        return "\n".join(lines * 2) + "\n"

    return corpus_from_text(doc("a"), doc("b"), doc("c"))


class TestRunScenario:
    def test_metric_lattice(self):
        corpus = scenario_corpus()
        plan = SplitPlan.for_corpus(corpus, 0.2, 42)
        for scenario, target in [(1, 0), (2, 0), (3, None)]:
            reports, _, _ = run_scenario(
                corpus, plan, "baseline", scenario, 1.0, target
            )
            for rep in reports:
                assert rep.coverage >= rep.accuracy
                assert rep.utility <= rep.coverage <= 1.0
                assert rep.set_size >= 1.0

    def test_single_document_scenario_1_equals_3(self):
        corpus = corpus_from_text(
            "\n".join(f"w{i % 5}\t{'X' if i % 2 else 'Y'}" for i in range(30)) + "\n"
        )
        plan = SplitPlan.for_corpus(corpus, 0.2, 42)
        r1, _, _ = run_scenario(corpus, plan, "baseline", 1, 1.0, 0)
        r3, _, _ = run_scenario(corpus, plan, "baseline", 3, 1.0)
        assert r1 == [r.__class__(**{**r.__dict__, "scenario": 1}) for r in r3]

    def test_scenario_2_vocabulary_excludes_target_train(self):
        corpus = scenario_corpus()
        plan = SplitPlan.for_corpus(corpus, 0.2, 42)
        _, _, model = run_scenario(corpus, plan, "baseline", 2, 1.0, 0)
        own_train_words = {
            t.normalized
            for t in corpus.documents[0].tokens
            if t.normalized.startswith("a")
        }
        assert not (own_train_words & model.vocabulary_)

    def test_baseline_toy_metrics_by_hand(self):
        # train: is->Y twice, a0->X once; test token "is" gold Y
        corpus = corpus_from_text(
            "a0\tX\nis\tY\nis\tY\na0\tX\nis\tY\n"
        )
        plan = SplitPlan(test_fraction=0.2, seed=0, cuts=(("doc0", 2),))
        reports, _, _ = run_scenario(corpus, plan, "baseline", 3, 1.0)
        rep = reports[0]
        # the held-out token is "is" with gold Y, trained P(Y|is)=1
        assert rep.tokens == 1
        assert rep.accuracy == 1.0
        assert rep.utility == 1.0
        assert rep.set_size == 1.0

    def test_determinism(self):
        corpus = scenario_corpus()
        plan = SplitPlan.for_corpus(corpus, 0.2, 42)
        a = run_scenario(corpus, plan, "hmm", 3, 1.0)[0]
        b = run_scenario(corpus, plan, "hmm", 3, 1.0)[0]
        assert a == b


class TestBetaSweep:
    def test_single_beta_matches_scenario_3(self):
        corpus = scenario_corpus()
        plan = SplitPlan.for_corpus(corpus, 0.2, 42)
        table = beta_sweep(corpus, plan, "baseline", [1.0])
        reports, _, _ = run_scenario(corpus, plan, "baseline", 3, 1.0)
        from statistics import mean

        assert table.rows[0].utility == pytest.approx(
            mean(r.utility for r in reports), abs=1e-12
        )
        assert table.rows[0].set_size == pytest.approx(
            mean(r.set_size for r in reports), abs=1e-12
        )

    def test_set_size_non_decreasing(self):
        corpus = scenario_corpus()
        plan = SplitPlan.for_corpus(corpus, 0.2, 42)
        table = beta_sweep(corpus, plan, "hmm", [0.25, 0.5, 1, 2, 4])
        sizes = [row.set_size for row in table.rows]
        assert sizes == sorted(sizes)

    def test_tiny_beta_degenerates_to_argmax(self):
        corpus = scenario_corpus()
        plan = SplitPlan.for_corpus(corpus, 0.2, 42)
        table = beta_sweep(corpus, plan, "hmm", [0.01])
        assert table.rows[0].set_size == pytest.approx(1.0, abs=1e-9)

    def test_rejects_bad_grid(self):
        corpus = scenario_corpus()
        plan = SplitPlan.for_corpus(corpus, 0.2, 42)
        with pytest.raises(EvalError):
            beta_sweep(corpus, plan, "baseline", [])
        with pytest.raises(EvalError):
            beta_sweep(corpus, plan, "baseline", [2.0, 1.0])


class TestEmit:
    def test_empty_reports_header_only(self):
        assert emit_report([]) == "\t".join(REPORT_COLUMNS) + "\n"

    def test_rows_in_input_order_and_parseable(self):
        corpus = scenario_corpus()
        plan = SplitPlan.for_corpus(corpus, 0.2, 42)
        reports, _, _ = run_scenario(corpus, plan, "baseline", 3, 1.0)
        text = emit_report(reports)
        lines = text.strip().split("\n")
        assert len(lines) == 1 + len(reports)
        header = lines[0].split("\t")
        assert header == REPORT_COLUMNS
        row = dict(zip(header, lines[1].split("\t")))
        assert float(row["accuracy"]) == pytest.approx(reports[0].accuracy, abs=1e-6)
        assert row["document"] == reports[0].document

    def test_unknown_format_rejected(self):
        with pytest.raises(EvalError):
            emit_report([], fmt="xml")

    def test_sweep_tsv(self):
        corpus = scenario_corpus()
        plan = SplitPlan.for_corpus(corpus, 0.2, 42)
        table = beta_sweep(corpus, plan, "baseline", [0.5, 1.0])
        lines = emit_sweep(table).strip().split("\n")
        assert lines[0].startswith("beta\t")
        assert len(lines) == 3
