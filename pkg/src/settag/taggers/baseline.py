"""Frequency baseline: per-word relative tag frequencies, global tag
prior for unknown words."""

from __future__ import annotations

from collections import Counter, defaultdict

import numpy as np

from ..corpus import Document
from .base import Tagger


class BaselineTagger(Tagger):
    kind = "baseline"

    def __init__(self):
        pass

    def _fit(self, documents: list[Document]) -> None:
        word_tag: dict[str, Counter] = defaultdict(Counter)
        tag_counts: Counter = Counter()
        for doc in documents:
            for tok in doc.tokens:
                if tok.gold is None:
                    continue
                word_tag[tok.normalized][tok.gold] += 1
                tag_counts[tok.gold] += 1
        total = sum(tag_counts.values())
        s = self.tagset_.size

        prior = np.zeros(s)
        for tag, n in tag_counts.items():
            prior[tag] = n / total
        self.prior_ = prior

        self.word_probs_ = {}
        for word, counts in word_tag.items():
            n_word = sum(counts.values())
            probs = np.zeros(s)
            for tag, n in counts.items():
                probs[tag] = n / n_word
            self.word_probs_[word] = probs

    def posterior_for_word(self, word: str) -> np.ndarray:
        self._check_fitted()
        probs = self.word_probs_.get(word)
        if probs is None:
            return self.prior_.copy()
        return probs.copy()

    def _posteriors(self, doc: Document) -> np.ndarray:
        return np.stack([self.posterior_for_word(t.normalized) for t in doc.tokens])

    def _state(self) -> dict:
        return {
            "prior": self.prior_.tolist(),
            "words": {w: p.tolist() for w, p in sorted(self.word_probs_.items())},
        }

    def _load_state(self, state: dict) -> None:
        self.prior_ = np.array(state["prior"])
        self.word_probs_ = {w: np.array(p) for w, p in state["words"].items()}
