"""Streaming evaluation: prequential accuracy, rule-count average, purity.

Accuracy is maintained recursively, one sample at a time, against the
estimate the classifier produced before adapting to that sample. An
"unknown" estimate is always scored wrong. A 5x6 confusion matrix keeps
per-class detail, with a sixth column for unknowns.

purity_score is the stand-in metric for fully unlabeled runs: each rule
is assigned its majority truth class over the whole run, then samples are
scored against their winning rule's majority class.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

N_CLASSES = 5
UNKNOWN_COL = N_CLASSES


@dataclass
class StreamScore:
    """Recursive per-stream score: accuracy, average rule count, confusion.

    acc and c_avg are running means over (separately counted) update
    calls; confusion rows are truth classes 1..5, columns are predicted
    classes 1..5 plus a final unknown column.
    """

    acc: float = 0.0
    c_avg: float = 0.0
    h: int = 0
    confusion: np.ndarray = field(
        default_factory=lambda: np.zeros((N_CLASSES, N_CLASSES + 1), dtype=int)
    )
    _cavg_calls: int = 0

    def update_accuracy(self, predicted: int | None, truth: int) -> None:
        """Fold one estimate into the running accuracy and confusion.

        predicted may be None (unknown), which scores 0 and lands in the
        unknown column.
        """
        if not 1 <= int(truth) <= N_CLASSES:
            raise ValueError(f"truth class out of range: {truth}")
        self.h += 1
        tau = 1.0 if predicted == truth else 0.0
        self.acc += (tau - self.acc) / self.h
        col = UNKNOWN_COL if predicted is None else int(predicted) - 1
        self.confusion[int(truth) - 1, col] += 1

    def update_cavg(self, c_now: int) -> None:
        """Fold the current rule count into its running mean."""
        self._cavg_calls += 1
        self.c_avg += (c_now - self.c_avg) / self._cavg_calls


def purity_score(assignments) -> float:
    """Majority-vote purity of (winning rule id, truth class) pairs.

    Each rule id is mapped to its most frequent truth class across the
    run; the score is the fraction of samples whose truth equals their
    rule's majority class. A tie inside a rule scores the same whichever
    tied class is picked. Raises on empty input.
    """
    pairs = list(assignments)
    if not pairs:
        raise ValueError("assignments must be non-empty")
    by_rule: dict = defaultdict(Counter)
    for rule_id, truth in pairs:
        by_rule[rule_id][truth] += 1
    hits = 0
    for counts in by_rule.values():
        hits += max(counts.values())
    return hits / len(pairs)


def mean_ci99(values) -> tuple[float, float]:
    """Mean and 99% Student-t confidence half-width of a small sample."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise ValueError("values must be non-empty")
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, 0.0
    half = float(
        stats.t.ppf(0.995, arr.size - 1) * arr.std(ddof=1) / np.sqrt(arr.size)
    )
    return mean, half
