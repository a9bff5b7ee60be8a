"""Streaming confusion counts and the derived predictive metrics."""

from __future__ import annotations

import math

from .data import POSITIVE


class ConfusionCounts:
    __slots__ = ("tp", "fp", "tn", "fn")

    def __init__(self, tp: int = 0, fp: int = 0, tn: int = 0, fn: int = 0):
        self.tp, self.fp, self.tn, self.fn = tp, fp, tn, fn

    def update(self, true_label: int, predicted_label: int) -> None:
        if predicted_label == POSITIVE:
            if true_label == POSITIVE:
                self.tp += 1
            else:
                self.fp += 1
        else:
            if true_label == POSITIVE:
                self.fn += 1
            else:
                self.tn += 1

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def metrics(counts: ConfusionCounts) -> dict[str, float]:
    """Balanced accuracy, gmean, recall and Cohen's kappa from the counts.

    Rates with a zero denominator are defined as 0; kappa is 0 when the
    chance agreement reaches 1 (degenerate margins).
    """
    tp, fp, tn, fn = counts.tp, counts.fp, counts.tn, counts.fn
    total = tp + fp + tn + fn
    recall = tp / (tp + fn) if tp + fn else 0.0
    tnr = tn / (tn + fp) if tn + fp else 0.0
    bal_acc = (recall + tnr) / 2.0
    gmean = math.sqrt(recall * tnr)
    if total:
        p_o = (tp + tn) / total
        p_e = ((tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)) / (total * total)
        kappa = (p_o - p_e) / (1.0 - p_e) if p_e != 1.0 else 0.0
    else:
        kappa = 0.0
    return {"bal_acc": bal_acc, "gmean": gmean, "recall": recall, "kappa": kappa}
