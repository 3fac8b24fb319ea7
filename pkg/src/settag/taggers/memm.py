"""Maximum-entropy Markov model tagger.

Per-position multinomial logistic regression over sparse binary features
of the word, its neighbors, and neighboring tags. Sequential decoding is
approximated by two greedy sweeps; posteriors are then computed per
token with the neighbor tags fixed, reducing tagging to independent
multi-class classification.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from ..corpus import Document
from .base import Tagger, TaggerError

BOUNDARY = "<B>"   # position outside the document
UNSET = "<U>"      # right-context tag not yet predicted

MAX_AFFIX_LEN = 4
WORD_WINDOW = 2


def extract_features(words: list[str], i: int, tags: dict[int, str]) -> list[str]:
    """Active feature strings for position i.

    `tags` maps absolute positions to tag labels; offsets -2, -1 and +1
    are consulted. Positions outside the document contribute BOUNDARY,
    in-document positions missing from `tags` contribute UNSET.
    """
    w = words[i]
    lw = w.lower()
    feats = [f"w={w}", f"lw={lw}"]
    for k in range(1, min(MAX_AFFIX_LEN, len(w)) + 1):
        feats.append(f"p{k}={lw[:k]}")
        feats.append(f"s{k}={lw[-k:]}")
    if any(ch.isdigit() for ch in w):
        feats.append("has_digit")
    if any(not ch.isalnum() for ch in w):
        feats.append("has_punct")
    for off in range(-WORD_WINDOW, WORD_WINDOW + 1):
        if off == 0:
            continue
        j = i + off
        neighbor = words[j] if 0 <= j < len(words) else BOUNDARY
        feats.append(f"w{off:+d}={neighbor}")
    for off in (-2, -1, +1):
        j = i + off
        if 0 <= j < len(words):
            tag = tags.get(j, UNSET)
        else:
            tag = BOUNDARY
        feats.append(f"t{off:+d}={tag}")
    return feats


def softmax_loss_grad(X, y, W, l2):
    """Mean regularized negative log-likelihood and its gradient in W."""
    n = X.shape[0]
    scores = X @ W.T
    scores = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(scores)
    P = exp / exp.sum(axis=1, keepdims=True)
    nll = -np.mean(scores[np.arange(n), y] - np.log(exp.sum(axis=1)))
    loss = nll + 0.5 * l2 * float((W * W).sum())
    Y = np.zeros_like(P)
    Y[np.arange(n), y] = 1.0
    grad = ((P - Y).T @ X) / n + l2 * W
    return loss, np.asarray(grad)


class MemmTagger(Tagger):
    kind = "memm"

    def __init__(self, l2=1e-2, iterations=200, step_size=0.5):
        self.l2 = l2
        self.iterations = iterations
        self.step_size = step_size

    # -- training ---------------------------------------------------------

    def _feature_matrix(self, rows: list[list[str]], grow: bool) -> sparse.csr_matrix:
        indptr = [0]
        indices = []
        for feats in rows:
            for f in feats:
                idx = self.feature_index_.get(f)
                if idx is None:
                    if not grow:
                        continue
                    idx = len(self.feature_index_)
                    self.feature_index_[f] = idx
                indices.append(idx)
            indptr.append(len(indices))
        n_feat = max(len(self.feature_index_), 1)
        return sparse.csr_matrix(
            (np.ones(len(indices)), indices, indptr),
            shape=(len(rows), n_feat),
        )

    def _fit(self, documents: list[Document]) -> None:
        support = {int(t): j for j, t in enumerate(self.support_)}
        K = len(support)
        labels = self.tagset_.labels

        rows, y = [], []
        for doc in documents:
            words = [t.normalized for t in doc.tokens]
            gold_tags = {
                j: labels[t.gold] for j, t in enumerate(doc.tokens) if t.gold is not None
            }
            for j, tok in enumerate(doc.tokens):
                if tok.gold is None:
                    continue
                rows.append(extract_features(words, j, gold_tags))
                y.append(support[tok.gold])

        self.feature_index_ = {}
        X = self._feature_matrix(rows, grow=True)
        y = np.array(y)
        n, F = X.shape

        W = np.zeros((K, F))

        def loss_grad(W):
            return softmax_loss_grad(X, y, W, self.l2)

        step = self.step_size
        loss, grad = loss_grad(W)
        if not np.isfinite(loss):
            raise TaggerError("non-finite training loss at initialization")
        self.loss_history_ = [loss]
        for _ in range(self.iterations):
            while True:
                W_new = W - step * grad
                new_loss, new_grad = loss_grad(W_new)
                if not np.isfinite(new_loss):
                    raise TaggerError("non-finite training loss")
                if new_loss <= loss:
                    break
                step *= 0.5
                if step < 1e-12:
                    break
            if new_loss > loss:
                break
            W, loss, grad = W_new, new_loss, new_grad
            self.loss_history_.append(loss)
        self.weights_ = W

    # -- inference --------------------------------------------------------

    def _scores(self, words: list[str], i: int, tags: dict[int, str]) -> np.ndarray:
        feats = extract_features(words, i, tags)
        idxs = [self.feature_index_[f] for f in feats if f in self.feature_index_]
        return self.weights_[:, idxs].sum(axis=1)

    def first_pass(self, doc: Document) -> list[int]:
        """Greedy two-sweep decoding; returns one support-tag id per token."""
        self._check_fitted()
        words = [t.normalized for t in doc.tokens]
        labels = self.tagset_.labels
        l = len(words)

        # sweep 1: left context from predictions made so far, right unset
        tags: dict[int, str] = {}
        pred = []
        for i in range(l):
            j = int(np.argmax(self._scores(words, i, tags)))
            pred.append(j)
            tags[i] = labels[self.support_[j]]
        # sweep 2: right context filled with sweep-1 tags
        sweep1 = dict(tags)
        tags = {}
        pred2 = []
        for i in range(l):
            ctx = dict(tags)
            if i + 1 < l:
                ctx[i + 1] = sweep1[i + 1]
            j = int(np.argmax(self._scores(words, i, ctx)))
            pred2.append(j)
            tags[i] = labels[self.support_[j]]
        return [int(self.support_[j]) for j in pred2]

    def posteriors_with_context(self, doc: Document, context: list[int]) -> np.ndarray:
        """Softmax posteriors with neighbor tags fixed to `context` (tag ids)."""
        self._check_fitted()
        if len(context) != len(doc):
            raise TaggerError("context length must match document length")
        words = [t.normalized for t in doc.tokens]
        labels = self.tagset_.labels
        tags = {j: labels[t] for j, t in enumerate(context)}
        out = np.empty((len(words), len(self.support_)))
        for i in range(len(words)):
            scores = self._scores(words, i, tags)
            scores = scores - scores.max()
            exp = np.exp(scores)
            out[i] = exp / exp.sum()
        return self._expand(out)

    def _posteriors(self, doc: Document) -> np.ndarray:
        return self.posteriors_with_context(doc, self.first_pass(doc))

    # -- serialization ----------------------------------------------------

    def _state(self) -> dict:
        return {
            "features": sorted(self.feature_index_.items(), key=lambda kv: kv[1]),
            "weights": self.weights_.tolist(),
        }

    def _load_state(self, state: dict) -> None:
        self.feature_index_ = {f: i for f, i in state["features"]}
        self.weights_ = np.array(state["weights"])
