"""First-test-then-train driver wiring models, monitors and metrics.

For every arriving instance the driver asks the model for a prediction,
records it into the confusion counts and the reporting fairness ledger,
updates the reporting imbalance monitor with the revealed label, and only
then lets the model learn. The model never sees a label before it has
predicted the instance, and never sees future instances.

The per-step trace (one row every `stride` steps) and the final summary are
both derived from the same streaming counters, so summary values can be
recomputed offline from a stride-1 trace.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Protocol

from .data import Instance
from .fairness import FairnessLedger, Notion
from .imbalance import ImbalanceMonitor
from .metrics import ConfusionCounts, metrics


class OnlineClassifier(Protocol):
    def predict(self, features, group: bool) -> int: ...
    def learn(self, features, group: bool, label: int, predicted: int) -> None: ...


@dataclass(frozen=True)
class EvalConfig:
    stride: int = 1
    trace_notion: Notion = Notion.SP   # which fairness value the trace carries
    decay: float = 0.9                 # reporting imbalance-monitor decay
    smoothing: float = 1.0             # reporting fairness-ledger smoothing

    def __post_init__(self):
        if self.stride < 1:
            raise ValueError("stride must be >= 1")


class TraceRow(NamedTuple):
    t: int
    pred: int
    label: int
    group: int
    ocis: float
    cum_metric: float
    theta: float
    bal_acc: float
    gmean: float
    recall: float
    kappa: float


TRACE_HEADER = "t,pred,label,group,ocis,cum_metric,theta,bal_acc,gmean,recall,kappa"


@dataclass
class Summary:
    instances: int
    tp: int
    fp: int
    tn: int
    fn: int
    bal_acc: float
    gmean: float
    recall: float
    kappa: float
    cum_sp: float
    cum_eqop: float
    cum_peq: float
    final_theta: float
    wall_s: float

    def to_text(self) -> str:
        lines = [f"{k} = {v!r}" for k, v in vars(self).items()]
        return "\n".join(lines) + "\n"


def run_prequential(model: OnlineClassifier, source: Iterable[Instance],
                    config: EvalConfig = EvalConfig(),
                    trace: list[TraceRow] | None = None):
    """Evaluate `model` prequentially over `source`.

    Returns (trace, summary). Pass `trace` to keep the partial trace when a
    model or source error aborts the run (the exception propagates).
    """
    if trace is None:
        trace = []
    counts = ConfusionCounts()
    ledger = FairnessLedger(config.smoothing)
    monitor = ImbalanceMonitor(config.decay)
    stride = config.stride
    notion = config.trace_notion
    t = 0
    t0 = time.perf_counter()
    for inst in source:
        t += 1
        features, group, label = inst.features, inst.group, inst.label
        pred = model.predict(features, group)
        counts.update(label, pred)
        ledger.record(group, label, pred)
        monitor.update(label)
        model.learn(features, group, label, pred)
        if t % stride == 0:
            m = metrics(counts)
            trace.append(TraceRow(
                t, pred, label, int(group),
                monitor.ocis(), ledger.value(notion),
                getattr(model, "theta", 0.5),
                m["bal_acc"], m["gmean"], m["recall"], m["kappa"]))
    wall = time.perf_counter() - t0
    m = metrics(counts)
    summary = Summary(
        instances=t,
        tp=counts.tp, fp=counts.fp, tn=counts.tn, fn=counts.fn,
        bal_acc=m["bal_acc"], gmean=m["gmean"],
        recall=m["recall"], kappa=m["kappa"],
        cum_sp=ledger.value(Notion.SP),
        cum_eqop=ledger.value(Notion.EQOP),
        cum_peq=ledger.value(Notion.PEQ),
        final_theta=getattr(model, "theta", 0.5),
        wall_s=wall,
    )
    return trace, summary


def write_trace(path, rows: Iterable[TraceRow]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(TRACE_HEADER + "\n")
        for r in rows:
            fh.write(f"{r.t},{r.pred},{r.label},{r.group},{r.ocis:.6f},"
                     f"{r.cum_metric:.6f},{r.theta:.6f},{r.bal_acc:.6f},"
                     f"{r.gmean:.6f},{r.recall:.6f},{r.kappa:.6f}\n")
