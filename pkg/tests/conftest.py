import io
from pathlib import Path

import pytest

from settag.corpus import Corpus, SplitPlan, parse_corpus, read_corpus

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
BUNDLED_FILES = sorted(str(p) for p in DATA_DIR.glob("*.tsv"))


def corpus_from_text(*texts: str, names=None) -> Corpus:
    names = names or [f"doc{i}" for i in range(len(texts))]
    return parse_corpus(
        (name, io.StringIO(text)) for name, text in zip(names, texts)
    )


@pytest.fixture(scope="session")
def bundled_corpus() -> Corpus:
    return read_corpus(BUNDLED_FILES)


@pytest.fixture(scope="session")
def bundled_plan(bundled_corpus) -> SplitPlan:
    return SplitPlan.for_corpus(bundled_corpus, 0.2, 42)


@pytest.fixture
def toy_corpus() -> Corpus:
    # small three-document corpus with an ambiguous word ("is")
    return corpus_from_text(
        "Dat\tDDS\nis\tVAFIN\nvredebrake\tNA\nDat\tDDS\nis\tVKFIN\ngud\tNA\n"
        "he\tPPER\nis\tVAFIN\nold\tADJA\nDat\tDDS\nis\tVAFIN\nrecht\tNA\n",
        "he\tPPER\nsecht\tVVFIN\ndat\tKON\nDat\tDDS\nis\tVAFIN\ngud\tNA\n"
        "se\tPPER\nis\tVKFIN\njunk\tADJA\nDat\tDDS\nis\tVAFIN\nwater\tNA\n",
        "Dat\tDDS\nrecht\tNA\nis\tVAFIN\nold\tADJA\nhe\tPPER\nsecht\tVVFIN\n"
        "dat\tKON\nse\tPPER\nis\tVKFIN\ngud\tNA\nDat\tDDS\nis\tVAFIN\n",
        names=["a", "b", "c"],
    )
