import json
import random

import pytest

from logrefine.core import ClusterTemplatePair, MinedClustering, tokenize
from logrefine.corpus import baseline_parse, generate_synthetic
from logrefine.feedback import FeedbackCounters, GroundTruth, SimulatedFeedback
from logrefine.metrics import (
    RefinementReport,
    complexity_stats,
    diagnose,
    error_census,
    group_accuracy,
    message_accuracy,
    separation_complexity_stats,
)
from logrefine.refine import separation


def gt_four_logs():
    # Ground truth: {0,1} with "a b", {2} with "c d", {3} with "e f".
    return GroundTruth((0, 0, 1, 2), (("a", "b"), ("c", "d"), ("e", "f")))


class TestDiagnose:
    def test_worked_example_mixed(self):
        gt = gt_four_logs()
        d = diagnose(ClusterTemplatePair({2, 3}, ()), gt)
        assert d.purity == "mixed"
        assert d.fullness is None
        assert d.completeness == "loss"
        assert d.error_class == "loss-mixed"

    def test_worked_example_partial(self):
        gt = gt_four_logs()
        d = diagnose(ClusterTemplatePair({0}, ("a", "b")), gt)
        assert d.purity == "pure"
        assert d.fullness == "partial"
        assert d.completeness == "complete"
        assert d.error_class == "complete-partial"

    def test_exact_cluster_correct(self):
        gt = gt_four_logs()
        d = diagnose(ClusterTemplatePair({0, 1}, ("a", "b")), gt)
        assert (d.purity, d.fullness, d.completeness) == ("pure", "full", "complete")
        assert d.error_class == "correct"
        assert d.matched_gt_cluster == 0

    def test_loss_pure(self):
        gt = gt_four_logs()
        d = diagnose(ClusterTemplatePair({0, 1}, ("a",)), gt)
        assert d.error_class == "loss-pure"

    def test_unknown_index_rejected(self):
        with pytest.raises(ValueError, match="unknown log"):
            diagnose(ClusterTemplatePair({9}, ()), gt_four_logs())

    def test_empty_members_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            diagnose(ClusterTemplatePair(set(), ()), gt_four_logs())


def clustering(pairs, n):
    return MinedClustering([ClusterTemplatePair(set(m), tuple(t)) for m, t in pairs], n)


class TestGroupAccuracy:
    def test_perfect(self):
        gt = gt_four_logs()
        mc = clustering([({0, 1}, ("a", "b")), ({2}, ("c", "d")), ({3}, ("e", "f"))], 4)
        assert group_accuracy(mc, gt) == 1.0

    def test_worked_example_zero(self):
        # Mined {1},{2},{3,4} vs truth {1,2},{3},{4} (0-based here).
        gt = gt_four_logs()
        mc = clustering([({0}, ()), ({1}, ()), ({2, 3}, ())], 4)
        assert group_accuracy(mc, gt) == 0.0

    def test_half_credit(self):
        gt = gt_four_logs()
        mc = clustering([({0, 1}, ()), ({2, 3}, ())], 4)
        assert group_accuracy(mc, gt) == 0.5

    def test_one_iff_partitions_identical(self):
        rng = random.Random(17)
        for _ in range(50):
            store, gt = generate_synthetic(
                rng.randint(1, 5), rng.randint(1, 6), 1, seed=rng.randrange(10**5)
            )
            mc = baseline_parse(store)
            ga = group_accuracy(mc, gt)
            identical = {frozenset(p.members) for p in mc.pairs} == set(gt.members)
            assert (ga == 1.0) == identical


class TestMessageAccuracy:
    def test_perfect(self):
        gt = gt_four_logs()
        mc = clustering([({0, 1}, ("a", "x", "b")), ({2}, ("c", "d")), ({3}, ("e", "f"))], 4)
        assert message_accuracy(mc, gt) == 1.0

    def test_template_missing_user_token_scores_zero(self):
        gt = GroundTruth(
            (0, 0), (tokenize("Failed password from port user"),)
        )
        mc = clustering([({0, 1}, tokenize("Failed password from port"))], 2)
        assert message_accuracy(mc, gt) == 0.0

    def test_half(self):
        gt = gt_four_logs()
        mc = clustering([({0, 1}, ("a", "b")), ({2, 3}, ())], 4)
        assert message_accuracy(mc, gt) == 0.5


class TestCensus:
    def test_counts_partition_pairs(self):
        gt = gt_four_logs()
        pairs = [
            ClusterTemplatePair({0, 1}, ("a", "b")),  # correct
            ClusterTemplatePair({2}, ("c",)),         # loss-pure
            ClusterTemplatePair({3}, ("e", "f")),     # correct (full singleton)
        ]
        census = error_census(pairs, gt)
        assert sum(census.values()) == len(pairs)
        assert census["correct"] == 2
        assert census["loss-pure"] == 1

    def test_complete_mixed_bucket_monitored(self):
        gt = gt_four_logs()
        # Mixed members but the template still embeds a ground-truth template.
        pairs = [ClusterTemplatePair({0, 2}, ("a", "b", "c", "d"))]
        census = error_census(pairs, gt)
        assert census["complete-mixed"] == 1
        assert sum(census.values()) == 1


class TestComplexityStats:
    def test_single_perfect_pair(self):
        gt = gt_four_logs()
        stats = complexity_stats(
            [ClusterTemplatePair({0, 1}, ("a", "b"))], gt, FeedbackCounters()
        )
        assert stats["n_distinct_templates"] == 1
        assert stats["redundancy"] == 1
        assert stats["d_max_surplus"] == 0

    def test_duplicated_templates(self):
        gt = gt_four_logs()
        pairs = [
            ClusterTemplatePair({0}, ("a", "b")),
            ClusterTemplatePair({1}, ("a", "b", "x")),
            ClusterTemplatePair({2}, ("c", "d")),
            ClusterTemplatePair({2}, ("c", "d")),
            ClusterTemplatePair({3}, ("e", "f")),
            ClusterTemplatePair({3}, ("q", "e", "f")),
        ]
        stats = complexity_stats(pairs, gt, FeedbackCounters())
        assert stats["n_distinct_templates"] == 3
        assert stats["redundancy"] == 2
        assert stats["d_max_surplus"] == 1

    def test_loss_templates_excluded(self):
        gt = gt_four_logs()
        pairs = [ClusterTemplatePair({0}, ("zzz",))]
        stats = complexity_stats(pairs, gt, FeedbackCounters())
        assert stats["n_distinct_templates"] == 0
        assert stats["redundancy"] == 0.0

    def test_simulator_selections_rank_one(self):
        store, gt = generate_synthetic(5, 10, 2, seed=23)
        fb = SimulatedFeedback(gt)
        separation(set(range(len(store))), store, fb)
        stats = separation_complexity_stats(range(len(store)), store, gt, fb.counters)
        assert stats["n_templates_present"] == 5
        assert stats["redundancy"] == 10
        assert stats["d_max_surplus"] == 2
        if fb.counters.selected_ranks:
            assert stats["avg_selected_rank"] == 1.0


class TestReport:
    def test_build_and_serialize(self):
        store, gt = generate_synthetic(3, 6, 1, seed=29)
        base = baseline_parse(store)
        fb = SimulatedFeedback(gt)
        from logrefine.refine import pipeline

        refined = pipeline(base.copy(), store, fb, n_repeat=1)
        report = RefinementReport.build(base, refined, gt, fb.counters)
        doc = json.loads(report.to_json())
        assert doc["version"] == 1
        assert 0.0 <= doc["ga_before"] <= doc["ga_after"] <= 1.0
        assert sum(doc["census_before"].values()) == doc["n_pairs_before"]
        assert sum(doc["census_after"].values()) == doc["n_pairs_after"]
        assert doc["counters"]["n_total"] == (
            doc["counters"]["n_message_loss"]
            + doc["counters"]["n_select"]
            + doc["counters"]["n_dummy_token"]
        )

    def test_json_is_stable(self):
        store, gt = generate_synthetic(2, 4, 1, seed=31)
        base = baseline_parse(store)
        fb = SimulatedFeedback(gt)
        report = RefinementReport.build(base, base, gt, fb.counters)
        assert report.to_json() == report.to_json()
