"""Online boosting over incremental trees, with imbalance-adjusted instance
weights and fairness-driven decision-boundary adjustment.

Training follows the smooth online-boosting recurrence: each instance runs
through the learners in order with weight w_i, where

    q_i = q_{i-1} + y * H_i(x) - gamma / (2 + gamma)
    w_{i+1} = min((1 - gamma)^(q_i / 2), 1)

and, when imbalance adjustment is on, w_{i+1} is divided by (1 + ocis) for
positive instances and (1 - ocis) for negative ones, so the minority class
gains weight as the decayed class masses diverge. With the adjustment off
this is exactly the plain smooth-boosting update.

Classification thresholds the ensemble confidence (1 + mean margin) / 2 at
0.5, except for protected instances when a fairness notion is active: those
use the adjusted boundary theta, chosen from the confidences of recently
rejected protected instances kept in a bounded FIFO window. Whenever the
cumulative fairness value exceeds the tolerance against the protected
group, theta is set to the n-th highest window confidence, n being the
number of decisions that would need to flip to restore parity; otherwise
theta rests at the neutral 0.5.
"""

from __future__ import annotations

from bisect import insort, bisect_left
from collections import deque
from dataclasses import dataclass

from .data import POSITIVE, NEGATIVE
from .fairness import FairnessLedger, Notion, UndefinedRateError
from .imbalance import ImbalanceMonitor
from .tree import HoeffdingTree, TreeParams

# divisor floor for (1 +/- ocis) on single-class stream prefixes
_DIVISOR_FLOOR = 1e-3


@dataclass(frozen=True)
class EnsembleParams:
    learners: int = 20
    gamma: float = 0.1
    imbalance_adjust: bool = True
    notion: Notion | None = None
    epsilon: float = 1e-4
    window: int = 2000
    decay: float = 0.9           # imbalance monitor decay
    smoothing: float = 1.0       # fairness-ledger denominator correction
    chunk: int | None = None     # chunked mitigation ledger (short-term mode)
    hard_votes: bool = False     # consume learner outputs as sign(margin)

    def __post_init__(self):
        if self.learners < 1:
            raise ValueError("need at least one learner")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must be in (0, 1)")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be >= 0")
        if self.window < 1:
            raise ValueError("window capacity must be >= 1")


class BoundaryWindow:
    """Sliding window over the last `capacity` stream arrivals, holding
    (confidence, seq) entries for rejected protected instances.

    Entries leave in strict seq order once they fall out of the horizon
    (seq <= now - capacity), so at most `capacity` entries exist at a time.
    The n-th highest confidence is served from a parallel sorted list.
    """

    __slots__ = ("capacity", "_fifo", "_sorted")

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._fifo = deque()
        self._sorted = []

    def __len__(self) -> int:
        return len(self._fifo)

    def expire(self, now: int) -> None:
        """Drop entries older than the horizon ending at seq `now`."""
        fifo = self._fifo
        cutoff = now - self.capacity
        while fifo and fifo[0][1] <= cutoff:
            old_conf, _ = fifo.popleft()
            del self._sorted[bisect_left(self._sorted, old_conf)]

    def push(self, confidence: float, seq: int) -> None:
        self.expire(seq)
        self._fifo.append((confidence, seq))
        insort(self._sorted, confidence)

    def kth_highest(self, k: int) -> float:
        """Confidence of the k-th most confident entry (1-based); the single
        highest when the window holds fewer than k entries."""
        vals = self._sorted
        if not vals:
            raise IndexError("empty window")
        if k > len(vals):
            return vals[-1]
        return vals[len(vals) - k]

    def entries(self):
        return list(self._fifo)


class BoostedEnsemble:
    """Sequentially boosted trees with optional imbalance and fairness modes."""

    def __init__(self, params: EnsembleParams, kinds,
                 tree_params: TreeParams | None = None, learner_factory=None):
        self.params = params
        if learner_factory is None:
            tp = tree_params or TreeParams()
            learner_factory = lambda: HoeffdingTree(kinds, tp)
        self.learners = [learner_factory() for _ in range(params.learners)]
        self.theta = 0.5
        self.monitor = ImbalanceMonitor(params.decay)
        self.ledger = FairnessLedger(params.smoothing, params.chunk)
        self.window = BoundaryWindow(params.window)
        self._seq = 0
        self._cached = None  # (features, score) from the last predict

    # ----------------------------------------------------------------- score

    def score(self, features) -> float:
        """Ensemble confidence for the positive class, in [0, 1]."""
        total = 0.0
        if self.params.hard_votes:
            for learner in self.learners:
                total += 1.0 if learner.predict_margin(features) >= 0.0 else -1.0
        else:
            for learner in self.learners:
                total += learner.predict_margin(features)
        return (1.0 + total / len(self.learners)) / 2.0

    def predict(self, features, group: bool) -> int:
        s = self.score(features)
        self._cached = (features, s)
        notion = self.params.notion
        if group and notion is not None:
            if notion is Notion.PEQ:
                # the protected boundary gates the negative class here
                return NEGATIVE if (1.0 - s) > self.theta else POSITIVE
            return POSITIVE if s >= self.theta else NEGATIVE
        return POSITIVE if s >= 0.5 else NEGATIVE

    # ----------------------------------------------------------------- train

    def train_instance(self, features, label: int, ocis: float) -> None:
        """One boosting pass over the learners (the weight recurrence above)."""
        p = self.params
        gamma = p.gamma
        drift = gamma / (2.0 + gamma)
        base = 1.0 - gamma
        adjust = p.imbalance_adjust
        if adjust:
            pos_div = max(1.0 + ocis, _DIVISOR_FLOOR)
            neg_div = max(1.0 - ocis, _DIVISOR_FLOOR)
        hard = p.hard_votes
        w = 1.0
        q = 0.0
        for learner in self.learners:
            learner.train_weighted(features, label, w)
            h = learner.predict_margin(features)
            if hard:
                h = 1.0 if h >= 0.0 else -1.0
            q += label * h - drift
            w = base ** (q * 0.5)
            if w > 1.0:
                w = 1.0
            if adjust:
                w = w / pos_div if label == POSITIVE else w / neg_div

    def learn(self, features, group: bool, label: int, predicted: int) -> None:
        """Full per-instance update: fairness bookkeeping, boundary
        adjustment, imbalance update, then boosted training."""
        self._seq += 1
        if self.params.notion is not None:
            self.ledger.record(group, label, predicted)
            self._observe_and_adjust(features, group, label, predicted)
        self.monitor.update(label)
        self.train_instance(features, label, self.monitor.ocis())

    def _observe_and_adjust(self, features, group, label, predicted) -> None:
        notion = self.params.notion
        self.window.expire(self._seq)
        if group:
            cached = self._cached
            if cached is not None and cached[0] is features:
                s = cached[1]
            else:
                s = self.score(features)
            if notion is Notion.PEQ:
                if label == NEGATIVE and predicted == POSITIVE:
                    self.window.push(1.0 - s, self._seq)
            elif predicted == NEGATIVE and (notion is Notion.SP or label == POSITIVE):
                self.window.push(s, self._seq)

        value = self.ledger.value(notion)
        theta = 0.5
        if value > self.params.epsilon:
            try:
                n = self.ledger.required_flips(notion)
            except UndefinedRateError:
                n = None
            if n is not None and n > 0 and len(self.window) > 0:
                theta = self.window.kth_highest(n)
        self.theta = theta


_METHODS = ("fabboo", "osboost", "ofib", "cfbb", "imbalance_only")


def method_params(method: str, notion: Notion | None, *, learners: int = 20,
                  gamma: float = 0.1, decay: float = 0.9, window: int = 2000,
                  epsilon: float = 1e-4, smoothing: float = 1.0,
                  chunk_size: int = 1000) -> EnsembleParams:
    """Ensemble configuration for each named method variant.

    osboost: plain boosting; imbalance_only: imbalance adjustment without a
    fairness notion; ofib: fairness without imbalance adjustment; cfbb:
    fairness on a chunked (short-term) ledger; fabboo: the full method.
    """
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}")
    fairness_methods = ("fabboo", "ofib", "cfbb")
    if method in fairness_methods and notion is None:
        raise ValueError(f"method {method!r} requires a fairness notion")
    if method not in fairness_methods and notion is not None:
        raise ValueError(f"method {method!r} does not take a fairness notion")
    return EnsembleParams(
        learners=learners,
        gamma=gamma,
        imbalance_adjust=method in ("fabboo", "cfbb", "imbalance_only"),
        notion=notion,
        epsilon=epsilon,
        window=window,
        decay=decay,
        smoothing=smoothing,
        chunk=chunk_size if method == "cfbb" else None,
    )
