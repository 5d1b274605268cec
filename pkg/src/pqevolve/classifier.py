"""Evolving Gaussian fuzzy rule base for online semi-supervised classification.

Each rule holds one Gaussian membership function per attribute and an
optional class label. A sample's activation of a rule is the minimum
membership across attributes. Learning is single-pass: every sample first
yields a class estimate from the current base, then either updates the
most compatible active rule or creates a new one, tags unlabeled active
rules when the sample carries a label, adapts the activation threshold to
the average dispersion, drops long-inactive rules, and merges the closest
compatible pair.

Rules keep stable integer ids across the run; a merge retires both parent
ids and issues a fresh one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SIGMA_MAX = 1.0 / (2.0 * math.pi)
SIGMA_MIN = 1.0 / (4.0 * math.pi)
RHO_FLOOR = 1e-4


def _vec(x) -> np.ndarray:
    if hasattr(x, "as_array"):
        return x.as_array()
    return np.asarray(x, dtype=float)


@dataclass
class GaussianMF:
    """Height-1 Gaussian membership function with modal value mu."""

    mu: float
    sigma: float


def membership(mf: GaussianMF, x: float) -> float:
    """Membership degree exp(-(x - mu)^2 / (2 sigma^2)), in [0, 1]."""
    if mf.sigma <= 0:
        raise ValueError("sigma must be positive")
    z = (x - mf.mu) / mf.sigma
    return float(math.exp(-0.5 * z * z))


@dataclass
class Rule:
    """One fuzzy rule: per-attribute Gaussians plus an optional class.

    update_count is the number of samples absorbed (1 at creation);
    last_active_step is the 1-based stream index that last created,
    updated, or merged-into this rule.
    """

    rule_id: int
    mu: np.ndarray
    sigma: np.ndarray
    class_label: int | None
    update_count: int
    last_active_step: int

    @property
    def mfs(self) -> list[GaussianMF]:
        return [GaussianMF(float(m), float(s)) for m, s in zip(self.mu, self.sigma)]


def activation(rule: Rule, x) -> float:
    """Rule activation: minimum membership over all attributes."""
    xv = _vec(x)
    if xv.shape != rule.mu.shape:
        raise ValueError("dimension mismatch")
    z = (xv - rule.mu) / rule.sigma
    return float(np.exp(-0.5 * np.max(z * z)))


def granule_distance(a: Rule, b: Rule) -> float:
    """Distance between two rules' granules.

    Per attribute: |mu_a - mu_b| + sigma_a + sigma_b - 2 sqrt(sigma_a
    sigma_b); the dispersion part is (sqrt(sigma_a) - sqrt(sigma_b))^2.
    Averaged over attributes. Zero iff the granules coincide.
    """
    if a.mu.shape != b.mu.shape:
        raise ValueError("dimension mismatch")
    spread = (np.sqrt(a.sigma) - np.sqrt(b.sigma)) ** 2
    return float(np.mean(np.abs(a.mu - b.mu) + spread))


@dataclass
class ClassEstimate:
    """Estimate for one sample: class, winning rule id, its activation.

    predicted is None when the base is empty or the winning rule has no
    label yet.
    """

    predicted: int | None
    winning_rule: int | None
    activation: float


@dataclass
class MergeEvent:
    """Record of the most recent merge: parent ids and the new rule id."""

    parent_a: int
    parent_b: int
    merged: int
    distance: float


class RuleBase:
    """Evolving set of Gaussian fuzzy rules with online learning.

    Parameters
    ----------
    rho0 : float
        Initial activation threshold, in (0, 1].
    merge_threshold : float
        Granule distance below which the closest compatible pair merges.
    inactivity_horizon : float
        Steps a rule may stay inactive before deletion; math.inf disables.
    """

    def __init__(
        self,
        rho0: float = 0.1,
        merge_threshold: float = 0.1,
        inactivity_horizon: float = 200.0,
    ):
        if not 0.0 < rho0 <= 1.0:
            raise ValueError("rho0 must be in (0, 1]")
        if merge_threshold < 0.0:
            raise ValueError("merge_threshold must be non-negative")
        if inactivity_horizon <= 0.0:
            raise ValueError("inactivity_horizon must be positive")
        self.rules: list[Rule] = []
        self.rho = float(rho0)
        self.prev_avg_sigma: float | None = None
        self.merge_threshold = float(merge_threshold)
        self.inactivity_horizon = float(inactivity_horizon)
        self.step = 0
        self.last_merge: MergeEvent | None = None
        self._next_id = 0

    # -- introspection -------------------------------------------------

    def __len__(self) -> int:
        return len(self.rules)

    def find_rule(self, rule_id: int) -> Rule:
        for rule in self.rules:
            if rule.rule_id == rule_id:
                return rule
        raise ValueError(f"no rule with id {rule_id}")

    def activations(self, x) -> np.ndarray:
        """Activation of every rule at x, in rule-list order."""
        xv = _vec(x)
        if not self.rules:
            return np.zeros(0)
        mu = np.stack([r.mu for r in self.rules])
        sigma = np.stack([r.sigma for r in self.rules])
        if xv.shape != mu.shape[1:]:
            raise ValueError("dimension mismatch")
        z = (xv - mu) / sigma
        return np.exp(-0.5 * np.max(z * z, axis=1))

    def classify(self, x) -> ClassEstimate:
        """Estimate the class of x without changing the base.

        The winner is the most active rule (lowest index on ties); the
        estimate is unknown (None) when the base is empty or the winner
        is unlabeled.
        """
        return self._estimate(self.activations(x))

    def _estimate(self, acts: np.ndarray) -> ClassEstimate:
        if acts.size == 0:
            return ClassEstimate(predicted=None, winning_rule=None, activation=0.0)
        i = int(np.argmax(acts))
        winner = self.rules[i]
        return ClassEstimate(
            predicted=winner.class_label,
            winning_rule=winner.rule_id,
            activation=float(acts[i]),
        )

    # -- structural operations ------------------------------------------

    def create_rule(self, x, label: int | None = None) -> int:
        """Add a rule centered on x with maximal dispersion 1/(2 pi).

        Returns the new rule's id. The label may be None (unlabeled).
        """
        xv = _vec(x).copy()
        if self.rules and xv.shape != self.rules[0].mu.shape:
            raise ValueError("dimension mismatch")
        rule = Rule(
            rule_id=self._next_id,
            mu=xv,
            sigma=np.full(xv.shape, SIGMA_MAX),
            class_label=None if label is None else int(label),
            update_count=1,
            last_active_step=self.step + 1,
        )
        self._next_id += 1
        self.rules.append(rule)
        return rule.rule_id

    def select_rule(self, x, label: int | None = None, acts=None) -> int | None:
        """Pick the rule a sample should update, or None.

        Only rules with activation above rho qualify. An unlabeled sample
        takes the most active one. A labeled sample takes the most active
        whose class matches or is still undefined, scanning downward in
        activation; None means every active rule carries a conflicting
        label (the caller then creates a rule). Ties break toward the
        lower rule index.
        """
        if acts is None:
            acts = self.activations(x)
        order = sorted(range(len(self.rules)), key=lambda i: (-acts[i], i))
        for i in order:
            if acts[i] <= self.rho:
                break
            rule = self.rules[i]
            if label is None or rule.class_label is None or rule.class_label == label:
                return rule.rule_id
        return None

    def update_rule(self, rule_id: int, x) -> None:
        """Absorb x into a rule: recursive mean and dispersion update.

        With the incremented count w, mu becomes ((w-1) mu + x)/w and
        sigma^2 becomes ((w-1)/w) sigma^2 + (1/w)(x - mu_old)^2, then
        each sigma is clamped into [1/(4 pi), 1/(2 pi)].
        """
        rule = self.find_rule(rule_id)
        xv = _vec(x)
        if xv.shape != rule.mu.shape:
            raise ValueError("dimension mismatch")
        rule.update_count += 1
        w = rule.update_count
        innov = xv - rule.mu
        rule.mu = rule.mu + innov / w
        var = ((w - 1) / w) * rule.sigma**2 + (1.0 / w) * innov**2
        rule.sigma = np.clip(np.sqrt(var), SIGMA_MIN, SIGMA_MAX)
        rule.last_active_step = self.step + 1

    def tag_active(self, x, label: int) -> int:
        """Give every active unlabeled rule this label; returns how many."""
        if label is None:
            raise ValueError("label is required")
        acts = self.activations(x)
        tagged = 0
        for rule, act in zip(self.rules, acts):
            if act > self.rho and rule.class_label is None:
                rule.class_label = int(label)
                tagged += 1
        return tagged

    def update_rho(self) -> None:
        """Scale rho by the change in average dispersion.

        rho(new) = rho(old) * sigma_avg(now) / sigma_avg(previous call),
        clamped into [1e-4, 1]. The first call only records sigma_avg.
        No-op on an empty base.
        """
        if not self.rules:
            return
        avg = float(np.mean([np.mean(r.sigma) for r in self.rules]))
        if self.prev_avg_sigma is not None:
            self.rho = min(1.0, max(RHO_FLOOR, self.rho * avg / self.prev_avg_sigma))
        self.prev_avg_sigma = avg

    def delete_inactive(self) -> int:
        """Drop rules idle longer than the horizon; returns how many."""
        if math.isinf(self.inactivity_horizon):
            return 0
        keep = [
            r
            for r in self.rules
            if self.step - r.last_active_step <= self.inactivity_horizon
        ]
        removed = len(self.rules) - len(keep)
        self.rules = keep
        return removed

    def merge_closest(self) -> int | None:
        """Merge the closest compatible rule pair if close enough.

        Pairs are compatible when both are unlabeled or share a class.
        If the smallest granule distance is below the threshold, the pair
        is replaced by one rule: mu is the dispersion-ratio weighted mean
        (weights sigma_a/sigma_b and sigma_b/sigma_a), sigma is the sum
        clamped to at most 1/(2 pi), the counts add, and the newest
        activity stamp wins. Returns the merged rule's id, or None.
        """
        self.last_merge = None
        c = len(self.rules)
        if c < 2:
            return None

        mu = np.stack([r.mu for r in self.rules])
        sig = np.stack([r.sigma for r in self.rules])
        labels = np.array(
            [-1 if r.class_label is None else r.class_label for r in self.rules]
        )
        root = np.sqrt(sig)
        dist = np.mean(
            np.abs(mu[:, None] - mu[None, :]) + (root[:, None] - root[None, :]) ** 2,
            axis=2,
        )
        compatible = labels[:, None] == labels[None, :]
        iu = np.triu_indices(c, k=1)
        mask = compatible[iu]
        if not mask.any():
            return None
        pair_dists = dist[iu]
        pair_dists[~mask] = np.inf
        k = int(np.argmin(pair_dists))
        if pair_dists[k] >= self.merge_threshold:
            return None

        a = self.rules[iu[0][k]]
        b = self.rules[iu[1][k]]
        wa = a.sigma / b.sigma
        wb = b.sigma / a.sigma
        merged = Rule(
            rule_id=self._next_id,
            mu=(wa * a.mu + wb * b.mu) / (wa + wb),
            sigma=np.minimum(a.sigma + b.sigma, SIGMA_MAX),
            class_label=a.class_label if a.class_label is not None else b.class_label,
            update_count=a.update_count + b.update_count,
            last_active_step=max(a.last_active_step, b.last_active_step),
        )
        self._next_id += 1
        self.rules = [r for r in self.rules if r is not a and r is not b]
        self.rules.append(merged)
        self.last_merge = MergeEvent(
            parent_a=a.rule_id,
            parent_b=b.rule_id,
            merged=merged.rule_id,
            distance=float(pair_dists[k]),
        )
        return merged.rule_id

    # -- online learning -------------------------------------------------

    def learn(self, x, label: int | None = None) -> ClassEstimate:
        """Process one sample: estimate its class, then adapt the base.

        The returned estimate is computed before any adaptation, so it
        scores the model as it stood when the sample arrived. Adaptation
        then either updates the selected active rule or creates a new one
        (also when a labeled sample conflicts with every active rule's
        class), tags active unlabeled rules with an arriving label,
        rescales rho, deletes inactive rules, and merges the closest
        compatible pair.
        """
        xv = _vec(x)
        acts = self.activations(xv)
        estimate = self._estimate(acts)

        if acts.size and float(np.max(acts)) > self.rho:
            chosen = self.select_rule(xv, label, acts)
            if chosen is None:
                self.create_rule(xv, label)
            else:
                self.update_rule(chosen, xv)
            if label is not None:
                self.tag_active(xv, label)
        else:
            self.create_rule(xv, label)

        self.update_rho()
        self.delete_inactive()
        self.merge_closest()
        self.step += 1
        return estimate

    def snapshot(self) -> dict:
        """Plain-data view of the base for export or inspection."""
        return {
            "step": self.step,
            "rho": self.rho,
            "rules": [
                {
                    "rule_id": r.rule_id,
                    "class_label": r.class_label,
                    "mu": [float(v) for v in r.mu],
                    "sigma": [float(v) for v in r.sigma],
                    "update_count": r.update_count,
                    "last_active_step": r.last_active_step,
                }
                for r in self.rules
            ],
        }
