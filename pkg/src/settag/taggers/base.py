"""Common tagger contract: fit on training documents, emit one posterior
row per token. Models are immutable after fit and safe to share."""

from __future__ import annotations

import inspect
import json

import numpy as np

from ..corpus import Document, TagSet

FORMAT_VERSION = 1


class TaggerError(Exception):
    pass


class Tagger:
    """Base estimator. Subclasses implement _fit() and _posteriors().

    After fit, `tagset_` holds the full tag inventory and `support_` the
    sorted ids actually observed in training; posteriors place zero mass
    outside `support_`.
    """

    kind: str = "abstract"

    def get_params(self) -> dict:
        names = [
            p
            for p in inspect.signature(type(self).__init__).parameters
            if p != "self"
        ]
        return {name: getattr(self, name) for name in names}

    def set_params(self, **params) -> "Tagger":
        for name, value in params.items():
            if name not in self.get_params():
                raise TaggerError(f"unknown parameter: {name}")
            setattr(self, name, value)
        return self

    def fit(self, documents: list[Document], tagset: TagSet) -> "Tagger":
        if not documents or all(len(d) == 0 for d in documents):
            raise TaggerError("no training data")
        self.tagset_ = tagset
        seen = sorted(
            {t.gold for d in documents for t in d.tokens if t.gold is not None}
        )
        if not seen:
            raise TaggerError("training data carries no gold tags")
        self.support_ = np.array(seen, dtype=int)
        self.vocabulary_ = {
            t.normalized for d in documents for t in d.tokens
        }
        self._fit(documents)
        return self

    def posteriors(self, doc: Document) -> np.ndarray:
        """(l, s) matrix; every row sums to 1 with support on trained tags."""
        self._check_fitted()
        probs = self._posteriors(doc)
        assert probs.shape == (len(doc), self.tagset_.size)
        return probs

    def _check_fitted(self):
        if not hasattr(self, "tagset_"):
            raise TaggerError(f"{type(self).__name__} is not fitted")

    def _fit(self, documents: list[Document]) -> None:
        raise NotImplementedError

    def _posteriors(self, doc: Document) -> np.ndarray:
        raise NotImplementedError

    def _expand(self, support_probs: np.ndarray) -> np.ndarray:
        """Scatter (l, |support|) rows into full (l, s) posterior rows."""
        full = np.zeros((support_probs.shape[0], self.tagset_.size))
        full[:, self.support_] = support_probs
        return full

    # -- serialization ----------------------------------------------------

    def _state(self) -> dict:
        raise NotImplementedError

    def _load_state(self, state: dict) -> None:
        raise NotImplementedError

    def save(self, path: str) -> None:
        self._check_fitted()
        payload = {
            "format_version": FORMAT_VERSION,
            "kind": self.kind,
            "params": self.get_params(),
            "tagset": list(self.tagset_.labels),
            "support": self.support_.tolist(),
            "vocabulary": sorted(self.vocabulary_),
            "state": self._state(),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True)
            fh.write("\n")


def load_model(path: str) -> Tagger:
    from . import TAGGER_KINDS

    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise TaggerError(
            f"unsupported model format version {version!r} in {path}"
        )
    try:
        cls = TAGGER_KINDS[payload["kind"]]
    except KeyError:
        raise TaggerError(f"unknown tagger kind in {path}") from None
    model = cls(**payload["params"])
    model.tagset_ = TagSet(tuple(payload["tagset"]))
    model.support_ = np.array(payload["support"], dtype=int)
    model.vocabulary_ = set(payload["vocabulary"])
    model._load_state(payload["state"])
    return model
