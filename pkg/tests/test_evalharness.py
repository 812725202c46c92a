import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from claimgraph.errors import InputError, MetricError, ParseError
from claimgraph.evalharness import (
    EvalReport,
    METHODS,
    SummEvalRecord,
    balanced_accuracy,
    binarize_consistency,
    confusion,
    load_summeval,
    run_method,
    stratified_subset,
    sweep_threshold,
    token_stats,
    write_report,
)
from claimgraph.providers import ProviderSet, StubOptions, provider_calls, reset_provider_calls

FIXTURE = Path(__file__).parent / "fixtures" / "summeval_sample.jsonl"

LABELS = ("consistent", "hallucinated")


def brute_force_balanced_accuracy(preds, labels):
    """Independent oracle: explicit confusion counts, no shared code path."""
    tp = sum(1 for p, l in zip(preds, labels) if p == "consistent" and l == "consistent")
    fn = sum(1 for p, l in zip(preds, labels) if p == "hallucinated" and l == "consistent")
    tn = sum(1 for p, l in zip(preds, labels) if p == "hallucinated" and l == "hallucinated")
    fp = sum(1 for p, l in zip(preds, labels) if p == "consistent" and l == "hallucinated")
    return (tp / (tp + fn) + tn / (tn + fp)) / 2


class TestLoadSummeval:
    def test_fixture_loads_all_records(self):
        records = load_summeval(FIXTURE)
        assert len(records) == 6
        assert records[0].record_id == "cnndm-test-001::M0"
        assert records[0].expert_consistency == (5, 5, 5)
        assert records[1].expert_consistency == (5, 4, 5)
        assert "Alice opened the store" in records[0].source_text

    def test_file_order_preserved(self):
        records = load_summeval(FIXTURE)
        assert [r.model_id for r in records] == ["M0", "M1", "M0", "M1", "M0", "M1"]

    def test_three_well_formed_lines(self, tmp_path):
        path = tmp_path / "three.jsonl"
        lines = FIXTURE.read_text().strip().splitlines()[:3]
        path.write_text("\n".join(lines) + "\n")
        assert len(load_summeval(path)) == 3

    def test_truncated_json_names_line(self, tmp_path):
        path = tmp_path / "broken.jsonl"
        good = FIXTURE.read_text().strip().splitlines()[0]
        path.write_text(good + "\n" + good[: len(good) // 2] + "\n")
        with pytest.raises(ParseError) as err:
            load_summeval(path)
        assert err.value.line_number == 2
        assert "line 2" in str(err.value)

    def test_missing_annotations_skipped_with_warning(self, tmp_path, caplog):
        path = tmp_path / "gappy.jsonl"
        good = FIXTURE.read_text().strip().splitlines()[0]
        bare = json.dumps({"id": "x", "model_id": "M9", "text": "a b.", "decoded": "a."})
        path.write_text(good + "\n" + bare + "\n")
        with caplog.at_level("WARNING"):
            records = load_summeval(path)
        assert len(records) == 1
        assert "skipped" in caplog.text

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(InputError):
            load_summeval(tmp_path / "nope.jsonl")


class TestBinarize:
    @pytest.mark.parametrize("ratings,expected", [
        ([5, 5, 5], "consistent"),
        ([5, 5, 4], "hallucinated"),
        ([5], "consistent"),
        ([1, 1, 1], "hallucinated"),
        ([4, 5, 5], "hallucinated"),
    ])
    def test_unanimity_rule(self, ratings, expected):
        assert binarize_consistency(ratings) == expected

    def test_out_of_range_rejected(self):
        with pytest.raises(InputError):
            binarize_consistency([5, 6])
        with pytest.raises(InputError):
            binarize_consistency([0])

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            binarize_consistency([])


class TestBalancedAccuracy:
    def test_perfect_predictions(self):
        labels = ["consistent", "hallucinated", "consistent"]
        assert balanced_accuracy(labels, labels) == 1.0

    def test_constant_predictor_scores_half(self):
        labels = ["consistent", "hallucinated", "hallucinated"]
        preds = ["consistent"] * 3
        assert balanced_accuracy(preds, labels) == 0.5

    def test_mixed_recalls(self):
        # recall_consistent = 0.5, recall_hallucinated = 1.0
        labels = ["consistent", "consistent", "hallucinated"]
        preds = ["consistent", "hallucinated", "hallucinated"]
        assert balanced_accuracy(preds, labels) == 0.75

    def test_single_class_labels_rejected(self):
        with pytest.raises(MetricError):
            balanced_accuracy(["consistent"], ["consistent"])

    def test_length_mismatch_rejected(self):
        with pytest.raises(InputError):
            balanced_accuracy(["consistent"], ["consistent", "hallucinated"])

    def test_oracle_agreement_1000_random_pairs(self):
        rng = random.Random(1234)
        preds = [rng.choice(LABELS) for _ in range(1000)]
        labels = [rng.choice(LABELS) for _ in range(1000)]
        assert balanced_accuracy(preds, labels) == brute_force_balanced_accuracy(preds, labels)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from(LABELS), st.sampled_from(LABELS)),
                    min_size=2, max_size=100))
    def test_class_permutation_symmetry(self, pairs):
        preds = [p for p, _ in pairs]
        labels = [l for _, l in pairs]
        if len(set(labels)) < 2:
            return
        swap = {"consistent": "hallucinated", "hallucinated": "consistent"}
        flipped = balanced_accuracy([swap[p] for p in preds], [swap[l] for l in labels])
        assert balanced_accuracy(preds, labels) == pytest.approx(flipped, abs=1e-12)

    def test_confusion_totals(self):
        rng = random.Random(5)
        preds = [rng.choice(LABELS) for _ in range(200)]
        labels = [rng.choice(LABELS) for _ in range(200)]
        tp, tn, fp, fn = confusion(preds, labels)
        assert tp + tn + fp + fn == 200


class TestSweepThreshold:
    def test_perfectly_separable(self):
        scores = [0.9, 0.8, 0.2, 0.1]
        labels = ["consistent", "consistent", "hallucinated", "hallucinated"]
        result = sweep_threshold(scores, labels)
        assert result.best_ba == 1.0

    def test_curve_has_99_points(self):
        scores = [0.9, 0.1]
        labels = ["consistent", "hallucinated"]
        result = sweep_threshold(scores, labels)
        assert len(result.curve) == 99
        assert result.curve[0][0] == 0.01
        assert result.curve[-1][0] == 0.99

    def test_ties_take_smallest_threshold(self):
        scores = [1.0, 0.0]
        labels = ["consistent", "hallucinated"]
        result = sweep_threshold(scores, labels)
        assert result.best_ba == 1.0
        assert result.best_threshold == 0.01

    def test_random_scores_near_half_against_oracle(self):
        rng = random.Random(77)
        scores = [rng.random() for _ in range(200)]
        labels = [rng.choice(LABELS) for _ in range(200)]
        result = sweep_threshold(scores, labels)
        # oracle: recompute every grid point independently
        best = -1.0
        for i in range(1, 100):
            t = round(i * 0.01, 2)
            preds = ["consistent" if s >= t else "hallucinated" for s in scores]
            best = max(best, brute_force_balanced_accuracy(preds, labels))
        assert result.best_ba == pytest.approx(best, abs=1e-12)
        assert abs(result.best_ba - 0.5) < 0.15  # labels independent of scores


class TestTokenStats:
    def test_whitespace_means(self):
        records = [
            SummEvalRecord("a", "one two three four", "one two", "M0", (5,)),
            SummEvalRecord("b", "five six", "seven eight nine function", "M0", (5,)),
        ]
        mean_summary, mean_source = token_stats(records)
        assert mean_summary == 3.0
        assert mean_source == 3.0


class TestRunMethod:
    def test_sici_0_deterministic_counts(self, stub_providers):
        records = load_summeval(FIXTURE)
        report = run_method(records, "sici_0", stub_providers, threshold=0.5)
        assert (report.tp, report.tn, report.fp, report.fn) == (2, 2, 1, 1)
        assert report.balanced_accuracy == pytest.approx(2 / 3)
        assert report.n == 6
        again = run_method(records, "sici_0", stub_providers, threshold=0.5)
        assert again.per_example == report.per_example
        assert again.balanced_accuracy == report.balanced_accuracy

    def test_hhem_baseline_runs(self, stub_providers):
        records = load_summeval(FIXTURE)
        report = run_method(records, "hhem_baseline", stub_providers)
        assert report.method_name == "hhem_baseline"
        assert report.n == 6
        assert report.tp + report.tn + report.fp + report.fn == 6

    def test_sici_1_runs(self, stub_providers):
        records = load_summeval(FIXTURE)
        report = run_method(records, "sici_1", stub_providers)
        assert report.n == 6

    def test_grapheval_plus_failure_injection_predicts_hallucinated(self):
        providers = ProviderSet.stubs(stub_options=StubOptions(fail_extraction=True))
        records = load_summeval(FIXTURE)
        report = run_method(records, "grapheval_plus", providers)
        assert all(pred == "hallucinated" for _, _, pred, _ in report.per_example)
        assert all(score == 0.0 for _, score, _, _ in report.per_example)

    def test_unknown_method_rejected(self, stub_providers):
        records = load_summeval(FIXTURE)
        with pytest.raises(InputError, match="valid methods"):
            run_method(records, "nonsense", stub_providers)

    def test_wall_clock_recorded(self, stub_providers):
        records = load_summeval(FIXTURE)
        report = run_method(records, "sici_0", stub_providers)
        assert report.wall_clock_seconds >= 0.0

    def test_workers_match_serial(self, stub_providers):
        records = load_summeval(FIXTURE)
        serial = run_method(records, "sici_0", stub_providers, workers=1)
        parallel = run_method(records, "sici_0", stub_providers, workers=4)
        assert serial.per_example == parallel.per_example

    def test_resume_from_scores_file(self, tmp_path, stub_providers):
        records = load_summeval(FIXTURE)
        report_dir = tmp_path / "run"
        first = run_method(records, "sici_0", stub_providers, report_dir=report_dir)
        reset_provider_calls()
        second = run_method(records, "sici_0", stub_providers, report_dir=report_dir)
        assert provider_calls() == 0  # all records resumed from scores.jsonl
        assert second.per_example == first.per_example

    def test_report_files_written(self, tmp_path, stub_providers):
        records = load_summeval(FIXTURE)
        report_dir = tmp_path / "run"
        run_method(records, "sici_0", stub_providers, report_dir=report_dir)
        assert (report_dir / "report.json").exists()
        assert (report_dir / "report.csv").exists()
        assert (report_dir / "per_example.csv").exists()
        assert (report_dir / "config.json").exists()
        payload = json.loads((report_dir / "report.json").read_text())
        assert payload["method_name"] == "sici_0"
        assert payload["tp"] + payload["tn"] + payload["fp"] + payload["fn"] == payload["n"]

    def test_cache_makes_second_run_cheaper_and_faster(self, tmp_path):
        providers = ProviderSet.stubs(
            cache_dir=str(tmp_path / "cache"),
            stub_options=StubOptions(latency_s=0.002),
        )
        records = load_summeval(FIXTURE)
        reset_provider_calls()
        first = run_method(records, "sici_0", providers)
        first_calls = provider_calls()
        assert first_calls > 0
        reset_provider_calls()
        second = run_method(records, "sici_0", providers)
        assert provider_calls() == 0
        assert second.wall_clock_seconds < first.wall_clock_seconds
        assert second.per_example == first.per_example


class TestStratifiedSubset:
    def test_preserves_ratio_and_is_deterministic(self):
        records = load_summeval(FIXTURE) * 10  # 60 records, 30 consistent
        subset_a = stratified_subset(records, 20, seed=3)
        subset_b = stratified_subset(records, 20, seed=3)
        assert [r.record_id for r in subset_a] == [r.record_id for r in subset_b]
        labels = [binarize_consistency(r.expert_consistency) for r in subset_a]
        assert 0.3 <= labels.count("consistent") / len(labels) <= 0.7


class TestWriteReport:
    def test_sweep_curve_csv(self, tmp_path):
        report = EvalReport("sici_0", 2, 1, 1, 0, 0, 1.0, 0.5, 0.1,
                            per_example=(("a", 0.9, "consistent", "consistent"),
                                         ("b", 0.1, "hallucinated", "hallucinated")))
        sweep = sweep_threshold([0.9, 0.1], ["consistent", "hallucinated"])
        write_report(report, tmp_path, sweep=sweep)
        rows = (tmp_path / "curve.csv").read_text().strip().splitlines()
        assert len(rows) == 100  # header + 99 grid points
