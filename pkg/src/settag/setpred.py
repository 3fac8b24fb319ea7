"""Utility-based set-valued prediction: turn a posterior over tags into
the subset maximizing expected utility under a set-size penalty."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_BETA = 64.0


@dataclass(frozen=True)
class UtilityConfig:
    """Set-size penalty family: reward g(k) = 1 - ((k-1)/(s-1))**beta."""

    beta: float
    s: int

    def __post_init__(self):
        if not 0 < self.beta <= MAX_BETA:
            raise ValueError(f"beta must lie in (0, {MAX_BETA}]")
        if self.s < 1:
            raise ValueError("tag set size must be >= 1")


@dataclass(frozen=True)
class PredictionSet:
    """Tag ids in descending posterior order plus the achieved expected utility."""

    tags: tuple[int, ...]
    expected_utility: float

    def __len__(self) -> int:
        return len(self.tags)

    def __contains__(self, tag: int) -> bool:
        return tag in self.tags


def g_beta(k: int, cfg: UtilityConfig) -> float:
    """Set-size reward: 1 at k=1, 0 at k=s, strictly decreasing between."""
    if not 1 <= k <= cfg.s:
        raise ValueError(f"set size {k} out of range [1, {cfg.s}]")
    if k == 1:
        return 1.0
    return 1.0 - ((k - 1) / (cfg.s - 1)) ** cfg.beta


def utility(gold: int, predicted: PredictionSet, cfg: UtilityConfig) -> float:
    if gold not in predicted.tags:
        return 0.0
    return g_beta(len(predicted), cfg)


def expected_utility(posterior, subset, cfg: UtilityConfig) -> float:
    """g(|subset|) times the posterior mass captured by the subset."""
    subset = list(subset)
    if not subset or len(set(subset)) != len(subset):
        raise ValueError("subset must be non-empty and duplicate-free")
    p = np.asarray(posterior, dtype=float)
    return g_beta(len(subset), cfg) * float(p[subset].sum())


def _sorted_tags(p: np.ndarray) -> np.ndarray:
    # descending probability, ties by ascending tag id
    return np.lexsort((np.arange(len(p)), -p))


def ubop(posterior, cfg: UtilityConfig) -> PredictionSet:
    """Top-k search for the Bayes-optimal prediction set.

    Every prefix of the probability-sorted tags is evaluated and the one
    with the highest expected utility is returned; ties prefer the
    smaller set.
    """
    p = np.asarray(posterior, dtype=float)
    order = _sorted_tags(p)
    if cfg.s == 1:
        return PredictionSet(tags=(0,), expected_utility=float(p[0]))
    # best size-k set is always the top-k prefix, so scanning every prefix
    # is an exhaustive search over candidate optima; ties keep the
    # smallest set
    best_eu = float(p[order[0]])
    best_k = 1
    mass = best_eu
    for k in range(2, cfg.s + 1):
        mass += float(p[order[k - 1]])
        eu = g_beta(k, cfg) * mass
        if eu > best_eu:
            best_eu = eu
            best_k = k
    return PredictionSet(
        tags=tuple(int(t) for t in order[:best_k]), expected_utility=best_eu
    )


def argmax_tag(posterior) -> int:
    """Point prediction: index of the largest entry, ties by lowest id."""
    p = np.asarray(posterior, dtype=float)
    return int(np.argmax(p))
