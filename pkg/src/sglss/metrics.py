"""Selection-quality and estimation-error metrics."""

import math
from dataclasses import dataclass

import numpy as np

from .model import ValidationError


@dataclass
class SelectionMetrics:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float | None  # None marks undefined (no positives selected)
    recall: float | None
    f1: float | None

    def as_dict(self):
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def precision_recall_f1(selected, truth):
    """Counts and ratios; undefined ratios are None, never 0."""
    sel = np.asarray(selected).astype(bool).ravel()
    tru = np.asarray(truth).astype(bool).ravel()
    if sel.shape != tru.shape:
        raise ValidationError(
            f"precision_recall_f1: size mismatch {sel.shape} vs {tru.shape}"
        )
    tp = int(np.sum(sel & tru))
    fp = int(np.sum(sel & ~tru))
    fn = int(np.sum(~sel & tru))
    tn = int(np.sum(~sel & ~tru))
    precision = tp / (tp + fp) if tp + fp > 0 else None
    recall = tp / (tp + fn) if tp + fn > 0 else None
    f1 = None
    if precision is not None and recall is not None and precision + recall > 0:
        f1 = 2.0 * precision * recall / (precision + recall)
    elif precision is not None and recall is not None:
        f1 = 0.0
    return SelectionMetrics(
        tp=tp, fp=fp, fn=fn, tn=tn, precision=precision, recall=recall, f1=f1
    )


def mse(truth, estimate):
    """Mean squared difference over all entries."""
    t = np.asarray(truth, dtype=np.float64)
    e = np.asarray(estimate, dtype=np.float64)
    if t.shape != e.shape:
        raise ValidationError(f"mse: shape mismatch {t.shape} vs {e.shape}")
    diff = t - e
    return float(np.mean(diff * diff))


def selection_report(selected_global, selected_local, influential_true, support_true):
    """Global metrics over the q covariates plus local metrics per truly
    influential covariate (1-based keys), with their mean where defined."""
    global_m = precision_recall_f1(selected_global, influential_true)
    local = {}
    f1s = []
    influential = np.flatnonzero(np.asarray(influential_true))
    for j in influential:
        m = precision_recall_f1(selected_local[j], support_true[j])
        local[str(j + 1)] = m.as_dict()
        if m.f1 is not None:
            f1s.append(m.f1)
    return {
        "global": global_m.as_dict(),
        "local": local,
        "local_f1_mean": float(np.mean(f1s)) if f1s else None,
    }


def mean_se(values):
    """Mean and standard error, skipping undefined (None/NaN) entries."""
    vals = [v for v in values if v is not None and not (isinstance(v, float) and math.isnan(v))]
    n_def = len(vals)
    if n_def == 0:
        return {"mean": None, "se": None, "n": 0}
    arr = np.asarray(vals, dtype=np.float64)
    se = float(arr.std(ddof=1) / math.sqrt(n_def)) if n_def > 1 else None
    return {"mean": float(arr.mean()), "se": se, "n": n_def}
