"""Decayed class-mass tracking over the whole stream history.

Each arriving label updates both per-class masses:

    w_y <- decay * w_y + (1 - decay) * [label == y]

and the imbalance statistic is w_pos - w_neg, in [-1, 1]: 0 for a balanced
stream, +/-1 when one class is absent. Larger decay means longer memory.
Masses start at 0, so they do not sum to 1 until the (1 - decay^t) transient
has washed out.
"""

from __future__ import annotations

from .data import POSITIVE


class ImbalanceMonitor:
    __slots__ = ("w_pos", "w_neg", "decay", "updates_seen")

    def __init__(self, decay: float = 0.9):
        if not 0.0 <= decay < 1.0:
            raise ValueError("decay must be in [0, 1)")
        self.decay = decay
        self.w_pos = 0.0
        self.w_neg = 0.0
        self.updates_seen = 0

    def update(self, label: int) -> None:
        d = self.decay
        keep = 1.0 - d
        if label == POSITIVE:
            self.w_pos = d * self.w_pos + keep
            self.w_neg = d * self.w_neg
        else:
            self.w_pos = d * self.w_pos
            self.w_neg = d * self.w_neg + keep
        self.updates_seen += 1

    def ocis(self) -> float:
        return self.w_pos - self.w_neg
