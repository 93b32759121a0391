"""Scikit-learn-style wrappers around the miner and the refinement loop.

Both estimators take raw log lines (any iterable of strings) as X.  The
refiner's y is per-line ground-truth template strings (``<*>`` markers
allowed), which back the simulated feedback; alternatively pass a ready
GroundTruth or a custom provider.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator

from .core import LogStore, MinedClustering, render_template, tokenize
from .corpus import CorruptionKnobs, baseline_parse, canonicalize_template
from .feedback import FeedbackProvider, GroundTruth, SimulatedFeedback
from .metrics import RefinementReport
from .refine import pipeline


def _as_store(X) -> LogStore:
    if isinstance(X, LogStore):
        return X
    lines = [str(line) for line in X]
    return LogStore(tuple(tokenize(line) for line in lines), tuple(lines))


def _as_ground_truth(y, n_logs: int) -> GroundTruth:
    if isinstance(y, GroundTruth):
        return y
    raw = [str(v) for v in y]
    if len(raw) != n_logs:
        raise ValueError(f"y has {len(raw)} entries for {n_logs} logs")
    ids: dict[str, int] = {}
    templates = []
    cluster_of = []
    for value in raw:
        k = ids.setdefault(value, len(ids))
        if k == len(templates):
            templates.append(canonicalize_template(value))
        cluster_of.append(k)
    return GroundTruth(tuple(cluster_of), tuple(templates))


def _labels(mc: MinedClustering) -> list[int]:
    labels = [0] * mc.n_logs
    for i, pair in enumerate(mc.pairs):
        for n in pair.members:
            labels[n] = i
    return labels


def _rendered_templates(mc: MinedClustering, store: LogStore) -> list[str]:
    out = []
    for pair in mc.pairs:
        samples = [store[n] for n in sorted(pair.members)[:5]]
        try:
            out.append(render_template(pair.template, samples))
        except ValueError:
            out.append(" ".join(pair.template))  # template does not embed; show plain
    return out


class BaselineTemplateMiner(BaseEstimator):
    """Deterministic bucket miner; the corruption knobs inject known errors.

    After ``fit``: ``clustering_`` (MinedClustering), ``labels_`` (cluster
    index per line) and ``templates_`` (rendered with ``<*>`` gaps).
    """

    def __init__(self, split_p=0.0, merge_p=0.0, truncate_p=0.0, random_state=0):
        self.split_p = split_p
        self.merge_p = merge_p
        self.truncate_p = truncate_p
        self.random_state = random_state

    def fit(self, X, y=None):
        store = _as_store(X)
        knobs = CorruptionKnobs(self.split_p, self.merge_p, self.truncate_p)
        self.store_ = store
        self.clustering_ = baseline_parse(store, knobs, seed=self.random_state)
        self.labels_ = _labels(self.clustering_)
        self.templates_ = _rendered_templates(self.clustering_, store)
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X, y).labels_


class InteractiveRefiner(BaseEstimator):
    """Refines a base clustering through feedback until its errors are gone.

    With no explicit ``provider``, ``fit`` builds the ground-truth simulator
    from y.  With no explicit ``base`` clustering, the built-in miner runs
    first (optionally corrupted via the knob parameters, which exist mostly
    for demos and tests).
    """

    def __init__(
        self,
        n_repeat=0,
        provider=None,
        base=None,
        split_p=0.0,
        merge_p=0.0,
        truncate_p=0.0,
        random_state=0,
    ):
        self.n_repeat = n_repeat
        self.provider = provider
        self.base = base
        self.split_p = split_p
        self.merge_p = merge_p
        self.truncate_p = truncate_p
        self.random_state = random_state

    def fit(self, X, y=None):
        store = _as_store(X)
        if self.base is None:
            knobs = CorruptionKnobs(self.split_p, self.merge_p, self.truncate_p)
            base = baseline_parse(store, knobs, seed=self.random_state)
        elif isinstance(self.base, MinedClustering):
            base = self.base.copy()
        else:
            raise TypeError("base must be a MinedClustering or None")

        gt = None
        if y is not None:
            gt = _as_ground_truth(y, len(store))
        provider: FeedbackProvider
        if self.provider is not None:
            provider = self.provider
        elif gt is not None:
            provider = SimulatedFeedback(gt)
        else:
            raise ValueError("need y (ground truth) or an explicit provider")

        self.store_ = store
        self.base_clustering_ = base
        self.clustering_ = pipeline(base.copy(), store, provider, self.n_repeat)
        self.labels_ = _labels(self.clustering_)
        self.templates_ = _rendered_templates(self.clustering_, store)
        self.counters_ = provider.counters
        self.report_ = (
            RefinementReport.build(base, self.clustering_, gt, provider.counters)
            if gt is not None
            else None
        )
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X, y).labels_
