from .base import Tagger, TaggerError, load_model
from .baseline import BaselineTagger
from .hmm import HmmTagger
from .memm import MemmTagger

TAGGER_KINDS = {
    "baseline": BaselineTagger,
    "hmm": HmmTagger,
    "memm": MemmTagger,
}


def make_tagger(kind: str, **params) -> Tagger:
    try:
        cls = TAGGER_KINDS[kind]
    except KeyError:
        raise TaggerError(f"unknown tagger kind: {kind}") from None
    return cls(**params)


__all__ = [
    "Tagger",
    "TaggerError",
    "BaselineTagger",
    "HmmTagger",
    "MemmTagger",
    "TAGGER_KINDS",
    "make_tagger",
    "load_model",
]
