import pytest
from sklearn.base import clone

from logrefine.corpus import generate_synthetic
from logrefine.estimators import BaselineTemplateMiner, InteractiveRefiner
from logrefine.feedback import SimulatedFeedback


def corpus_lines(seed=0, k=4, logs=8, slots=2):
    store, gt = generate_synthetic(k, logs, slots, seed=seed)
    lines = [store.raw(n) for n in range(len(store))]
    y = [" ".join(gt.template_of_log(n)) for n in range(len(store))]
    return lines, y, store, gt


class TestBaselineTemplateMiner:
    def test_fit_sets_attributes(self):
        lines, _, _, _ = corpus_lines()
        est = BaselineTemplateMiner().fit(lines)
        assert len(est.labels_) == len(lines)
        assert len(est.templates_) == len(est.clustering_.pairs)
        est.clustering_.validate()

    def test_labels_align_with_clustering(self):
        lines, _, _, _ = corpus_lines(seed=1)
        est = BaselineTemplateMiner().fit(lines)
        for i, pair in enumerate(est.clustering_.pairs):
            for n in pair.members:
                assert est.labels_[n] == i

    def test_get_params_round_trip(self):
        est = BaselineTemplateMiner(split_p=0.5, random_state=7)
        params = est.get_params()
        assert params["split_p"] == 0.5
        assert params["random_state"] == 7
        cloned = clone(est)
        assert cloned.get_params() == params

    def test_fit_predict(self):
        lines, _, _, _ = corpus_lines(seed=2)
        labels = BaselineTemplateMiner().fit_predict(lines)
        assert len(labels) == len(lines)


class TestInteractiveRefiner:
    def test_refines_to_ground_truth(self):
        lines, y, _, gt = corpus_lines(seed=3)
        est = InteractiveRefiner(
            n_repeat=20, split_p=0.5, merge_p=0.5, truncate_p=0.5, random_state=3
        )
        est.fit(lines, y)
        assert est.report_ is not None
        assert est.report_.ga_after == 1.0
        assert est.report_.ma_after == 1.0
        assert {frozenset(p.members) for p in est.clustering_.pairs} == {
            frozenset(m) for m in gt.members
        }

    def test_accepts_ground_truth_object(self):
        lines, _, _, gt = corpus_lines(seed=4)
        est = InteractiveRefiner(n_repeat=5).fit(lines, gt)
        assert est.report_ is not None

    def test_explicit_provider_without_truth(self):
        lines, _, _, gt = corpus_lines(seed=5)
        est = InteractiveRefiner(provider=SimulatedFeedback(gt), n_repeat=5)
        est.fit(lines)
        assert est.report_ is None
        assert est.counters_.total() >= 0
        est.clustering_.validate()

    def test_requires_truth_or_provider(self):
        lines, _, _, _ = corpus_lines(seed=6)
        with pytest.raises(ValueError, match="ground truth"):
            InteractiveRefiner().fit(lines)

    def test_base_clustering_passthrough(self):
        lines, y, store, gt = corpus_lines(seed=7)
        from logrefine.corpus import baseline_parse

        base = baseline_parse(store)
        est = InteractiveRefiner(base=base, n_repeat=3).fit(lines, y)
        # The caller's clustering must stay untouched.
        base.validate()
        assert est.clustering_ is not base

    def test_mismatched_y_rejected(self):
        lines, y, _, _ = corpus_lines(seed=8)
        with pytest.raises(ValueError, match="entries"):
            InteractiveRefiner().fit(lines, y[:-1])

    def test_clone_compatible(self):
        est = InteractiveRefiner(n_repeat=2, truncate_p=0.3)
        assert clone(est).get_params() == est.get_params()
