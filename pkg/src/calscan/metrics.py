"""Detection-quality metrics: precision/recall/F-score and detection power."""

from __future__ import annotations

import numpy as np

from .graph import NodeSet


def prf(true_set: NodeSet, detected: NodeSet) -> tuple[float, float, float]:
    """Precision, recall, and F-score of a detected node set against the truth.

    Empty detections score (0, 0, 0); an empty truth set is an error.
    """
    if not true_set:
        raise ValueError("true set is empty")
    if not detected:
        return (0.0, 0.0, 0.0)
    inter = len(set(true_set) & set(detected))
    precision = inter / len(detected)
    recall = inter / len(true_set)
    f = 2 * precision * recall / (precision + recall) if inter else 0.0
    return (precision, recall, f)


def detection_power(alt_scores, null_scores, level: float = 0.05) -> float:
    """Fraction of alternative runs whose score is significant against the nulls.

    Each alternative score gets p = (proportion of null scores strictly
    greater); power is the fraction with p < level.  Ties count against the
    alternative (conservative).
    """
    nulls = np.asarray(null_scores, dtype=float)
    alts = np.asarray(alt_scores, dtype=float)
    if nulls.size == 0:
        raise ValueError("null score set is empty")
    if alts.size == 0:
        raise ValueError("alternative score set is empty")
    pvals = (nulls[None, :] > alts[:, None]).mean(axis=1)
    return float((pvals < level).mean())
