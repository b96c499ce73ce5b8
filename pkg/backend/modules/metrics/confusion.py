"""
Confusion-matrix accounting with Drone as the positive class.

accuracy    = (TP + TN) / (TP + TN + FP + FN)
sensitivity = TP / (TP + FN)
precision   = TP / (TP + FP)

A metric whose denominator is zero is reported as None (undefined), never
NaN and never a 0/1 convention.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from common.errors import EmptyEvaluation, LengthMismatch
from config import settings
from dataset import Label


def format_metric(value: Optional[float]) -> str:
    # repr keeps every float round-trippable
    return settings.UNDEFINED_TEXT if value is None else repr(float(value))


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def swap_positive(self) -> 'ConfusionMatrix':
        """The same counts read with Bird as the positive class."""
        return ConfusionMatrix(tp=self.tn, tn=self.tp, fp=self.fn, fn=self.fp)


@dataclass(frozen=True)
class MetricReport:
    accuracy: Optional[float]
    sensitivity: Optional[float]
    precision: Optional[float]
    misclassified_ids: List[str] = field(default_factory=list)

    def summary(self) -> str:
        return (f"accuracy={format_metric(self.accuracy)} "
                f"sensitivity={format_metric(self.sensitivity)} "
                f"precision={format_metric(self.precision)}")


def confusion(preds: Sequence, truth: Sequence) -> ConfusionMatrix:
    if len(preds) != len(truth):
        raise LengthMismatch(f"{len(preds)} predictions for {len(truth)} labels")
    if not preds:
        raise EmptyEvaluation("nothing to evaluate")
    tp = tn = fp = fn = 0
    for p, t in zip(preds, truth):
        p_drone = Label(int(p)) is Label.DRONE
        t_drone = Label(int(t)) is Label.DRONE
        if p_drone and t_drone:
            tp += 1
        elif not p_drone and not t_drone:
            tn += 1
        elif p_drone:
            fp += 1
        else:
            fn += 1
    return ConfusionMatrix(tp, tn, fp, fn)


def _ratio(numerator: int, denominator: int) -> Optional[float]:
    if denominator == 0:
        return None
    return numerator / denominator


def report(cm: ConfusionMatrix, misclassified_ids: Sequence[str] = ()) -> MetricReport:
    return MetricReport(
        accuracy=_ratio(cm.tp + cm.tn, cm.total),
        sensitivity=_ratio(cm.tp, cm.tp + cm.fn),
        precision=_ratio(cm.tp, cm.tp + cm.fp),
        misclassified_ids=list(misclassified_ids),
    )


def evaluate(preds: Sequence, truth: Sequence, ids: Sequence[str]):
    """Confusion matrix plus report listing every misclassified sample id."""
    if len(ids) != len(truth):
        raise LengthMismatch(f"{len(ids)} ids for {len(truth)} labels")
    cm = confusion(preds, truth)
    wrong = [i for i, p, t in zip(ids, preds, truth) if int(p) != int(t)]
    return cm, report(cm, wrong)
