"""Incremental, weight-aware decision tree with blind drift adaptation.

Leaves accumulate weighted per-class statistics (Gaussian estimators for
numeric attributes, value tallies for categorical ones) and are split once
the information-gain margin over the runner-up attribute clears the
Hoeffding bound sqrt(ln(1/delta) / (2 * weight)) for binary entropy, or the
bound itself drops under the tie threshold. Numeric splits are binary on a
threshold chosen among quantile points of the pooled per-class Gaussian;
categorical splits are multi-way on the observed alphabet.

Drift handling is blind: every node tracks an exponentially decayed error
of its subtree. When that error climbs more than a few sigma above the best
level seen (Bernoulli std of the decayed mean), a fresh alternate subtree
starts growing beside the node; once the alternate has absorbed enough
weight and beats the incumbent by a clear margin it replaces the subtree
in place. Stationary data leaves the structure untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

from .data import DataError, POSITIVE

_SQRT2 = math.sqrt(2.0)
_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class TreeParams:
    split_confidence: float = 1e-7   # delta of the Hoeffding bound
    grace_weight: float = 200.0      # weight between split attempts at a leaf
    tie_threshold: float = 0.05
    split_candidates: int = 10       # numeric candidate thresholds per attribute
    adaptive: bool = True
    drift_decay: float = 0.995
    warn_sigmas: float = 3.0
    replace_margin: float = 0.01     # decayed-error advantage needed to promote
    alt_min_weight: float = 300.0    # evaluation weight before promotion/discard
    alt_discard_weight: float = 5000.0  # give up on an undecided alternate
    drift_warmup: float = 200.0      # weight before a node may raise warnings

    def __post_init__(self):
        if not 0.0 < self.split_confidence < 1.0:
            raise ValueError("split_confidence must be in (0, 1)")
        for name in ("grace_weight", "tie_threshold", "split_candidates",
                     "alt_min_weight", "drift_warmup"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


class _Node:
    __slots__ = ("split_attr", "threshold", "children", "cat_children",
                 "wp", "wn", "num_stats", "cat_stats", "weight_since",
                 "err", "err_min", "warm", "seen_w", "alt")

    def __init__(self, n_numeric: int, n_categorical: int):
        self.split_attr = None
        self.threshold = None
        self.children = None
        self.cat_children = None
        self.wp = 0.0
        self.wn = 0.0
        # per numeric attr: [W+, mean+, M2+, W-, mean-, M2-]
        self.num_stats = [[0.0] * 6 for _ in range(n_numeric)]
        # per categorical attr: value -> [w+, w-]
        self.cat_stats = [dict() for _ in range(n_categorical)]
        self.weight_since = 0.0
        self.err = 0.0
        self.err_min = math.inf
        self.warm = 1.0   # decay**seen_weight, for bias correction
        self.seen_w = 0.0
        self.alt = None

    def corrected_err(self) -> float:
        denom = 1.0 - self.warm
        return self.err / denom if denom > 1e-9 else 0.0


def _entropy2(a: float, b: float) -> float:
    """Binary entropy (bits) of a two-class weight pair."""
    if a <= 0.0 or b <= 0.0:
        return 0.0
    w = a + b
    pa = a / w
    pb = b / w
    return -(pa * math.log(pa) + pb * math.log(pb)) / _LOG2


def _norm_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / _SQRT2))


class HoeffdingTree:
    """Weight-aware streaming decision tree over a fixed attribute schema.

    `kinds` gives the per-position attribute kind ("num" or "cat") of the
    feature vectors this tree will see.
    """

    def __init__(self, kinds, params: TreeParams | None = None):
        self.params = params or TreeParams()
        self.kinds = tuple(kinds)
        self.numeric_idx = tuple(i for i, k in enumerate(self.kinds) if k == "num")
        self.cat_idx = tuple(i for i, k in enumerate(self.kinds) if k == "cat")
        if len(self.numeric_idx) + len(self.cat_idx) != len(self.kinds):
            raise DataError("attribute kinds must be 'num' or 'cat'")
        # slot of each attribute inside the per-kind stat lists
        self._slot = {}
        for s, i in enumerate(self.numeric_idx):
            self._slot[i] = s
        for s, i in enumerate(self.cat_idx):
            self._slot[i] = s
        self.root = self._new_leaf()
        self.replacements = 0
        nd = NormalDist()
        k = self.params.split_candidates
        self._quantile_z = tuple(nd.inv_cdf((i + 1) / (k + 1)) for i in range(k))
        self._ln_inv_delta = math.log(1.0 / self.params.split_confidence)

    def _new_leaf(self) -> _Node:
        return _Node(len(self.numeric_idx), len(self.cat_idx))

    # ------------------------------------------------------------------ train

    def train_weighted(self, x, label: int, weight: float) -> None:
        if weight < 0.0:
            raise ValueError("weight must be >= 0")
        if weight == 0.0:
            return
        if len(x) != len(self.kinds):
            raise DataError(f"expected {len(self.kinds)} attributes, got {len(x)}")
        aw = self.params.drift_decay ** weight if self.params.adaptive else 1.0
        self._train_subtree(self.root, x, label, weight, aw,
                            allow_alts=self.params.adaptive)

    def _train_subtree(self, node, x, label, w, aw, allow_alts) -> None:
        adaptive = self.params.adaptive
        path = [node] if adaptive else None
        n = node
        while n.split_attr is not None:
            v = x[n.split_attr]
            if n.threshold is not None:
                n = n.children[0] if v <= n.threshold else n.children[1]
            else:
                child = n.cat_children.get(v)
                if child is None:
                    child = self._new_leaf()
                    n.cat_children[v] = child
                n = child
            if adaptive:
                path.append(n)
        leaf = n

        if adaptive:
            correct = (leaf.wp >= leaf.wn) == (label == POSITIVE)
            errbit = 0.0 if correct else 1.0
            keep = 1.0 - aw
            warmup = self.params.drift_warmup
            for nd in path:
                nd.err = aw * nd.err + keep * errbit
                nd.warm *= aw
                nd.seen_w += w
                if nd.seen_w >= warmup and nd.err < nd.err_min:
                    nd.err_min = nd.err

        # leaf statistics
        pos = label == POSITIVE
        if pos:
            leaf.wp += w
        else:
            leaf.wn += w
        off = 0 if pos else 3
        num_stats = leaf.num_stats
        for s, i in enumerate(self.numeric_idx):
            st = num_stats[s]
            xv = x[i]
            nw = st[off] + w
            st[off] = nw
            delta = xv - st[off + 1]
            st[off + 1] += (w / nw) * delta
            st[off + 2] += w * delta * (xv - st[off + 1])
        cat_stats = leaf.cat_stats
        for s, i in enumerate(self.cat_idx):
            d = cat_stats[s]
            cell = d.get(x[i])
            if cell is None:
                d[x[i]] = [w, 0.0] if pos else [0.0, w]
            else:
                cell[0 if pos else 1] += w

        leaf.weight_since += w
        if leaf.weight_since >= self.params.grace_weight:
            leaf.weight_since = 0.0
            self._attempt_split(leaf)

        if allow_alts:
            for nd in path:
                if nd.alt is None:
                    if self._warning(nd):
                        nd.alt = self._new_leaf()
                else:
                    self._train_subtree(nd.alt, x, label, w, aw, allow_alts=False)
                    if self._resolve_alternate(nd):
                        break  # subtree replaced; deeper path nodes are gone

    # ---------------------------------------------------------------- splits

    def _attempt_split(self, leaf) -> None:
        wp, wn = leaf.wp, leaf.wn
        if wp <= 0.0 or wn <= 0.0:
            return
        total = wp + wn
        h0 = _entropy2(wp, wn)
        best_gain = 0.0
        second_gain = 0.0
        best_attr = -1
        best_threshold = 0.0
        best_is_numeric = True

        for s, i in enumerate(self.numeric_idx):
            g, thr = self._best_numeric_split(leaf.num_stats[s], total, h0)
            if g > best_gain:
                second_gain = best_gain
                best_gain, best_attr, best_threshold, best_is_numeric = g, i, thr, True
            elif g > second_gain:
                second_gain = g
        for s, i in enumerate(self.cat_idx):
            g = self._categorical_gain(leaf.cat_stats[s], total, h0)
            if g > best_gain:
                second_gain = best_gain
                best_gain, best_attr, best_is_numeric = g, i, False
            elif g > second_gain:
                second_gain = g

        if best_attr < 0 or best_gain <= 1e-12:
            return
        bound = math.sqrt(self._ln_inv_delta / (2.0 * total))
        if best_gain - second_gain > bound or bound < self.params.tie_threshold:
            leaf.split_attr = best_attr
            if best_is_numeric:
                leaf.threshold = best_threshold
                leaf.children = [self._new_leaf(), self._new_leaf()]
            else:
                leaf.threshold = None
                values = leaf.cat_stats[self._slot[best_attr]].keys()
                leaf.cat_children = {v: self._new_leaf() for v in values}
            leaf.num_stats = None
            leaf.cat_stats = None

    def _best_numeric_split(self, st, total, h0):
        wp, mp, m2p, wn, mn, m2n = st
        mean = (wp * mp + wn * mn) / total
        ex2 = (wp * (m2p / wp + mp * mp) if wp > 0.0 else 0.0) + \
              (wn * (m2n / wn + mn * mn) if wn > 0.0 else 0.0)
        var = ex2 / total - mean * mean
        if var <= 0.0:
            return 0.0, 0.0
        sd = math.sqrt(var)
        sdp = math.sqrt(m2p / wp) if wp > 0.0 else 0.0
        sdn = math.sqrt(m2n / wn) if wn > 0.0 else 0.0
        best_gain = 0.0
        best_thr = 0.0
        for z in self._quantile_z:
            thr = mean + sd * z
            if sdp > 0.0:
                lp = wp * _norm_cdf((thr - mp) / sdp)
            else:
                lp = wp if mp <= thr else 0.0
            if sdn > 0.0:
                ln = wn * _norm_cdf((thr - mn) / sdn)
            else:
                ln = wn if mn <= thr else 0.0
            left = lp + ln
            right = total - left
            if left <= 0.0 or right <= 0.0:
                continue
            gain = h0 - (left / total) * _entropy2(lp, ln) \
                      - (right / total) * _entropy2(wp - lp, wn - ln)
            if gain > best_gain:
                best_gain, best_thr = gain, thr
        return best_gain, best_thr

    @staticmethod
    def _categorical_gain(d, total, h0):
        if len(d) < 2:
            return 0.0
        rem = 0.0
        for cp, cn in d.values():
            rem += ((cp + cn) / total) * _entropy2(cp, cn)
        return h0 - rem

    # ----------------------------------------------------------------- drift

    def _warning(self, nd) -> bool:
        if nd.seen_w < self.params.drift_warmup or nd.err_min is math.inf:
            return False
        em = nd.err_min
        d = self.params.drift_decay
        var = max(em * (1.0 - em), 0.0025) * (1.0 - d) / (1.0 + d)
        return nd.err > em + self.params.warn_sigmas * math.sqrt(var)

    def _resolve_alternate(self, nd) -> bool:
        alt = nd.alt
        if not self._warning(nd):
            # the anomaly that spawned the alternate has subsided
            nd.alt = None
            return False
        if alt.seen_w < self.params.alt_min_weight:
            return False
        main_err = nd.corrected_err()
        alt_err = alt.corrected_err()
        # the advantage must clear both the flat margin and the combined
        # noise of the two decayed estimates (the challenger's is young)
        d = self.params.drift_decay
        unit = (1.0 - d) / (1.0 + d)
        var = (max(main_err * (1.0 - main_err), 0.0025)
               + max(alt_err * (1.0 - alt_err), 0.0025)) * unit
        needed = max(self.params.replace_margin,
                     self.params.warn_sigmas * math.sqrt(var))
        if main_err - alt_err >= needed:
            # promote: the alternate's content takes the node's place
            nd.split_attr = alt.split_attr
            nd.threshold = alt.threshold
            nd.children = alt.children
            nd.cat_children = alt.cat_children
            nd.wp, nd.wn = alt.wp, alt.wn
            nd.num_stats = alt.num_stats
            nd.cat_stats = alt.cat_stats
            nd.weight_since = alt.weight_since
            nd.err, nd.warm, nd.seen_w = alt.err, alt.warm, alt.seen_w
            nd.err_min = math.inf
            nd.alt = None
            self.replacements += 1
            return True
        if alt_err - main_err >= self.params.replace_margin \
                or alt.seen_w >= self.params.alt_discard_weight:
            nd.alt = None
        return False

    # --------------------------------------------------------------- predict

    def predict_margin(self, x) -> float:
        """2 * P(positive | leaf) - 1, Laplace-smoothed; empty leaves give 0."""
        n = self.root
        while n.split_attr is not None:
            v = x[n.split_attr]
            if n.threshold is not None:
                n = n.children[0] if v <= n.threshold else n.children[1]
            else:
                n = n.cat_children.get(v)
                if n is None:
                    return 0.0
        return (n.wp - n.wn) / (n.wp + n.wn + 2.0)

    # ----------------------------------------------------------------- debug

    def describe(self) -> str:
        """Indented structure dump, for debugging and golden comparisons."""
        lines = []

        def walk(n, depth, tag):
            pad = "  " * depth
            if n.split_attr is None:
                lines.append(f"{pad}{tag}leaf +:{n.wp:.6g} -:{n.wn:.6g}")
            elif n.threshold is not None:
                lines.append(f"{pad}{tag}x{n.split_attr} <= {n.threshold:.6g}")
                walk(n.children[0], depth + 1, "L ")
                walk(n.children[1], depth + 1, "R ")
            else:
                lines.append(f"{pad}{tag}x{n.split_attr} multiway")
                for v in sorted(n.cat_children):
                    walk(n.cat_children[v], depth + 1, f"{v}: ")

        walk(self.root, 0, "")
        return "\n".join(lines)


class TreeClassifier:
    """A single tree exposed through the online-classifier protocol."""

    def __init__(self, kinds, params: TreeParams | None = None):
        self.tree = HoeffdingTree(kinds, params)

    def predict(self, features, group: bool) -> int:
        return POSITIVE if self.tree.predict_margin(features) >= 0.0 else -1

    def learn(self, features, group: bool, label: int, predicted: int) -> None:
        self.tree.train_weighted(features, label, 1.0)
