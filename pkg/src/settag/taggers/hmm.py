"""Trigram hidden Markov model tagger.

Transitions mix trigram/bigram/unigram estimates via deleted
interpolation; unknown words are scored through a suffix model built
from rare training words. Per-token posterior marginals come from the
forward-backward algorithm run in log space.
"""

from __future__ import annotations

from collections import Counter, defaultdict

import numpy as np
from scipy.special import logsumexp

from ..corpus import Document
from .base import Tagger

LOG_ZERO = -1e30


def forward_backward(log_trans: np.ndarray, log_em: np.ndarray) -> np.ndarray:
    """Posterior marginals of a second-order chain.

    log_trans[a, b, c] = log P(tag c | previous tags a, b) where index K
    (the last row/column of the first two axes) is the begin-of-document
    state. log_em has shape (l, K). Returns (l, K) probabilities.
    """
    l, K = log_em.shape
    bos = K

    # alpha[b, c]: log mass of prefixes ending in tags (b, c) at position i
    alpha = np.full((l, K + 1, K), LOG_ZERO)
    alpha[0, bos, :] = log_trans[bos, bos, :] + log_em[0]
    for i in range(1, l):
        prev = alpha[i - 1]  # (K+1, K)
        # new prev-state b ranges over real tags only
        scores = prev[:, :, None] + log_trans[:, :K, :]  # (K+1, K, K)
        alpha[i, :K, :] = logsumexp(scores, axis=0) + log_em[i][None, :]

    beta = np.full((l, K + 1, K), LOG_ZERO)
    beta[l - 1, :, :] = 0.0
    for i in range(l - 2, -1, -1):
        nxt = beta[i + 1, :K, :] + log_em[i + 1][None, :]  # (K, K) over (c, d)
        beta[i] = logsumexp(log_trans[:, :K, :] + nxt[None, :, :], axis=2)

    log_post = logsumexp(alpha + beta, axis=1)  # (l, K)
    log_post -= logsumexp(log_post, axis=1, keepdims=True)
    return np.exp(log_post)


class HmmTagger(Tagger):
    kind = "hmm"

    def __init__(self, epsilon=0.1, max_suffix_len=4, rare_threshold=2):
        self.epsilon = epsilon
        self.max_suffix_len = max_suffix_len
        self.rare_threshold = rare_threshold

    # -- training ---------------------------------------------------------

    def _fit(self, documents: list[Document]) -> None:
        support = {int(t): j for j, t in enumerate(self.support_)}
        K = len(support)

        tri: Counter = Counter()
        big: Counter = Counter()
        uni: Counter = Counter()
        ctx2: Counter = Counter()
        ctx1: Counter = Counter()
        emit: dict[str, Counter] = defaultdict(Counter)
        word_freq: Counter = Counter()

        for doc in documents:
            tags = [support[t.gold] for t in doc.tokens]
            pad = [K, K] + tags
            for i in range(len(tags)):
                tri[(pad[i], pad[i + 1], pad[i + 2])] += 1
                big[(pad[i + 1], pad[i + 2])] += 1
                uni[pad[i + 2]] += 1
                ctx2[(pad[i], pad[i + 1])] += 1
                ctx1[pad[i + 1]] += 1
            for tok in doc.tokens:
                emit[tok.normalized][support[tok.gold]] += 1
                word_freq[tok.normalized] += 1

        self.trigram_ = dict(tri)
        self.bigram_ = dict(big)
        self.unigram_ = dict(uni)
        self.ctx2_ = dict(ctx2)
        self.ctx1_ = dict(ctx1)
        self.emissions_ = {w: dict(c) for w, c in emit.items()}

        # suffix statistics from rare words, per suffix length 0..L
        suffix: list[dict[str, Counter]] = [
            defaultdict(Counter) for _ in range(self.max_suffix_len + 1)
        ]
        for word, counts in emit.items():
            if word_freq[word] > self.rare_threshold:
                continue
            for k in range(min(self.max_suffix_len, len(word)) + 1):
                suf = word[len(word) - k:] if k else ""
                for tag, n in counts.items():
                    suffix[k][suf][tag] += n
        self.suffix_counts_ = [
            {s: dict(c) for s, c in level.items()} for level in suffix
        ]
        self._build()

    def _build(self) -> None:
        """Derive dense log tables from the stored counts."""
        K = len(self.support_)
        total = sum(self.unigram_.values())

        # unconditional tag distribution over support indices
        p_uni = np.zeros(K)
        for t, n in self.unigram_.items():
            p_uni[t] = n / total
        self.p_uni_ = p_uni

        lam = self._deleted_interpolation(total)
        self.lambdas_ = lam

        trans = np.zeros((K + 1, K + 1, K))
        trans += lam[0] * p_uni[None, None, :]
        for (b, c), n in self.bigram_.items():
            trans[:, b, c] += lam[1] * n / self.ctx1_[b]
        for (a, b, c), n in self.trigram_.items():
            trans[a, b, c] += lam[2] * n / self.ctx2_[(a, b)]
        norm = trans.sum(axis=2, keepdims=True)
        np.divide(trans, norm, out=trans, where=norm > 0)
        with np.errstate(divide="ignore"):
            self.log_trans_ = np.where(trans > 0, np.log(np.maximum(trans, 1e-300)), LOG_ZERO)

        # suffix interpolation weight, TnT style
        if K > 1:
            self.theta_ = float(np.sum((p_uni - p_uni.mean()) ** 2) / (K - 1))
        else:
            self.theta_ = 1.0
        self.tag_totals_ = {t: n for t, n in self.unigram_.items()}
        self.n_vocab_ = len(self.emissions_)

    def _deleted_interpolation(self, total: int) -> np.ndarray:
        lam = np.zeros(3)  # (unigram, bigram, trigram)
        for (a, b, c), n in self.trigram_.items():
            c2 = self.ctx2_[(a, b)]
            c1 = self.ctx1_[b]
            v3 = (n - 1) / (c2 - 1) if c2 > 1 else 0.0
            v2 = (self.bigram_[(b, c)] - 1) / (c1 - 1) if c1 > 1 else 0.0
            v1 = (self.unigram_[c] - 1) / (total - 1) if total > 1 else 0.0
            best = max(v1, v2, v3)
            winners = [i for i, v in enumerate((v1, v2, v3)) if v == best]
            for i in winners:
                lam[i] += n / len(winners)
        if lam.sum() == 0:
            lam[0] = 1.0
        return lam / lam.sum()

    # -- inference --------------------------------------------------------

    def _log_emission(self, word: str) -> np.ndarray:
        """Log emission scores over support indices (unnormalized)."""
        K = len(self.support_)
        eps = self.epsilon
        counts = self.emissions_.get(word)
        if counts is not None:
            scores = np.empty(K)
            for j in range(K):
                scores[j] = (counts.get(j, 0) + eps) / (
                    self.tag_totals_[j] + eps * self.n_vocab_
                )
            return np.log(scores)
        return np.log(np.maximum(self._unknown_scores(word), 1e-300))

    def _unknown_scores(self, word: str) -> np.ndarray:
        K = len(self.support_)
        # P(tag | suffix) by recursive interpolation over suffix lengths
        base = self.suffix_counts_[0].get("")
        p = np.zeros(K)
        if base:
            n = sum(base.values())
            for t, c in base.items():
                p[t] = c / n
        else:
            p = self.p_uni_.copy()
        for k in range(1, min(self.max_suffix_len, len(word)) + 1):
            suf = word[len(word) - k:]
            counts = self.suffix_counts_[k].get(suf)
            if counts is None:
                break
            ml = np.zeros(K)
            n = sum(counts.values())
            for t, c in counts.items():
                ml[t] = c / n
            p = (ml + self.theta_ * p) / (1.0 + self.theta_)
        # Bayes inversion to emission scale: P(w|t) proportional to P(t|s)/P(t)
        scores = np.where(self.p_uni_ > 0, p / np.maximum(self.p_uni_, 1e-300), 0.0)
        if scores.sum() == 0:
            scores = self.p_uni_.copy()
        return scores

    def _posteriors(self, doc: Document) -> np.ndarray:
        log_em = np.stack([self._log_emission(t.normalized) for t in doc.tokens])
        marg = forward_backward(self.log_trans_, log_em)
        return self._expand(marg)

    # -- serialization ----------------------------------------------------

    def _state(self) -> dict:
        return {
            "trigram": [[*k, v] for k, v in sorted(self.trigram_.items())],
            "bigram": [[*k, v] for k, v in sorted(self.bigram_.items())],
            "unigram": [[k, v] for k, v in sorted(self.unigram_.items())],
            "ctx2": [[*k, v] for k, v in sorted(self.ctx2_.items())],
            "ctx1": [[k, v] for k, v in sorted(self.ctx1_.items())],
            "emissions": {
                w: sorted((t, n) for t, n in c.items())
                for w, c in sorted(self.emissions_.items())
            },
            "suffix": [
                {s: sorted((t, n) for t, n in c.items()) for s, c in sorted(level.items())}
                for level in self.suffix_counts_
            ],
        }

    def _load_state(self, state: dict) -> None:
        self.trigram_ = {tuple(row[:3]): row[3] for row in state["trigram"]}
        self.bigram_ = {tuple(row[:2]): row[2] for row in state["bigram"]}
        self.unigram_ = {row[0]: row[1] for row in state["unigram"]}
        self.ctx2_ = {tuple(row[:2]): row[2] for row in state["ctx2"]}
        self.ctx1_ = {row[0]: row[1] for row in state["ctx1"]}
        self.emissions_ = {
            w: {t: n for t, n in pairs} for w, pairs in state["emissions"].items()
        }
        self.suffix_counts_ = [
            {s: {t: n for t, n in pairs} for s, pairs in level.items()}
            for level in state["suffix"]
        ]
        self._build()
