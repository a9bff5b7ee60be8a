"""Group/outcome counters and the cumulative parity-based fairness metrics.

The ledger keeps lifetime counts of prediction events per group (protected
z vs non-protected). Three metrics are derived, each a rate difference
"non-protected minus protected" in [-1, 1], smoothed by adding `smoothing`
to every denominator:

    statistical parity   positive-prediction rate difference
    equal opportunity    true-positive-rate difference
    predictive equality  true-negative-rate difference

`required_flips` inverts each metric for the number of protected decisions
that would have to flip to restore parity right now. It uses the raw
(unsmoothed) counts and exact integer arithmetic:

    floor(base_z * favorable_zbar / base_zbar - favorable_z)

and may be negative when the protected group is ahead (reverse
discrimination).

In chunked mode all counters reset every `chunk_size` recorded events, so
the metrics reflect only the current chunk (short-term monitoring).
"""

from __future__ import annotations

from enum import Enum

from .data import POSITIVE


class Notion(Enum):
    SP = "sp"
    EQOP = "eqop"
    PEQ = "peq"


class UndefinedRateError(Exception):
    """The non-protected conditioning count is zero; callers must treat
    this as 'no adjustment'."""


class FairnessLedger:
    __slots__ = (
        "smoothing", "chunk_size", "_in_chunk",
        "seen_z", "seen_pos_z", "seen_neg_z", "pred_pos_z", "tp_z", "tn_z",
        "seen_o", "seen_pos_o", "seen_neg_o", "pred_pos_o", "tp_o", "tn_o",
    )

    def __init__(self, smoothing: float = 1.0, chunk_size: int | None = None):
        if smoothing < 0:
            raise ValueError("smoothing must be >= 0")
        if chunk_size is not None and chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        self.smoothing = smoothing
        self.chunk_size = chunk_size
        self._reset_counters()

    def _reset_counters(self) -> None:
        self._in_chunk = 0
        self.seen_z = self.seen_pos_z = self.seen_neg_z = 0
        self.pred_pos_z = self.tp_z = self.tn_z = 0
        self.seen_o = self.seen_pos_o = self.seen_neg_o = 0
        self.pred_pos_o = self.tp_o = self.tn_o = 0

    def record(self, group: bool, true_label: int, predicted_label: int) -> None:
        if self.chunk_size is not None and self._in_chunk == self.chunk_size:
            self._reset_counters()
        self._in_chunk += 1
        pos = true_label == POSITIVE
        pred_pos = predicted_label == POSITIVE
        if group:
            self.seen_z += 1
            if pos:
                self.seen_pos_z += 1
                if pred_pos:
                    self.tp_z += 1
            else:
                self.seen_neg_z += 1
                if not pred_pos:
                    self.tn_z += 1
            if pred_pos:
                self.pred_pos_z += 1
        else:
            self.seen_o += 1
            if pos:
                self.seen_pos_o += 1
                if pred_pos:
                    self.tp_o += 1
            else:
                self.seen_neg_o += 1
                if not pred_pos:
                    self.tn_o += 1
            if pred_pos:
                self.pred_pos_o += 1

    def _rates(self, notion: Notion) -> tuple[int, int, int, int]:
        """(favorable_zbar, base_zbar, favorable_z, base_z) raw counts."""
        if notion is Notion.SP:
            return self.pred_pos_o, self.seen_o, self.pred_pos_z, self.seen_z
        if notion is Notion.EQOP:
            return self.tp_o, self.seen_pos_o, self.tp_z, self.seen_pos_z
        return self.tn_o, self.seen_neg_o, self.tn_z, self.seen_neg_z

    def value(self, notion: Notion) -> float:
        """Smoothed cumulative rate difference, non-protected minus protected.

        With smoothing 0 a zero-base rate is defined as 0.
        """
        fav_o, base_o, fav_z, base_z = self._rates(notion)
        l = self.smoothing
        rate_o = fav_o / (base_o + l) if base_o + l > 0 else 0.0
        rate_z = fav_z / (base_z + l) if base_z + l > 0 else 0.0
        return rate_o - rate_z

    def required_flips(self, notion: Notion) -> int:
        """Protected outcomes to flip for parity now; exact integer floor."""
        fav_o, base_o, fav_z, base_z = self._rates(notion)
        if base_o == 0:
            raise UndefinedRateError(f"no non-protected base events for {notion.value}")
        # floor(base_z * fav_o / base_o - fav_z) without float rounding
        return (base_z * fav_o - fav_z * base_o) // base_o
