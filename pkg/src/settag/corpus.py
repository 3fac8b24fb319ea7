"""Corpus model: tab-separated token/tag documents, orthographic
normalization by Levenshtein clustering, and train/test splitting."""

from __future__ import annotations

import json
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, TextIO


class CorpusError(Exception):
    """Raised for malformed corpus files and invalid split requests."""


@dataclass(frozen=True)
class TagSet:
    """Ordered inventory of tag labels; ids are positions in `labels`."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) < 1:
            raise CorpusError("tag set must contain at least one label")
        if len(set(self.labels)) != len(self.labels):
            raise CorpusError("duplicate tag labels")
        if list(self.labels) != sorted(self.labels):
            raise CorpusError("tag labels must be sorted")

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "TagSet":
        return cls(tuple(sorted(set(labels))))

    @property
    def size(self) -> int:
        return len(self.labels)

    def id_of(self, label: str) -> int:
        try:
            return self._index[label]
        except AttributeError:
            object.__setattr__(
                self, "_index", {lab: i for i, lab in enumerate(self.labels)}
            )
            return self._index[label]

    def __contains__(self, label: str) -> bool:
        return label in set(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    gold: Optional[int] = None

    def __post_init__(self):
        if not self.surface or not self.normalized:
            raise CorpusError("token forms must be non-empty")


@dataclass(frozen=True)
class Document:
    name: str
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if len(self.tokens) < 1:
            raise CorpusError(f"empty document: {self.name}")

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    tagset: TagSet

    def __post_init__(self):
        if len(self.documents) < 1:
            raise CorpusError("corpus must contain at least one document")
        s = self.tagset.size
        for doc in self.documents:
            for tok in doc.tokens:
                if tok.gold is not None and not (0 <= tok.gold < s):
                    raise CorpusError(
                        f"gold tag id {tok.gold} out of range in {doc.name}"
                    )

    def document(self, name: str) -> Document:
        for doc in self.documents:
            if doc.name == name:
                return doc
        raise CorpusError(f"no such document: {name}")


def parse_document(name: str, stream: Iterable[str]) -> list[tuple[str, str]]:
    """Parse one `token<TAB>tag` file into (surface, tag label) pairs.

    Blank lines are ignored; any other line must contain exactly one tab.
    """
    pairs = []
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise CorpusError(
                f"{name}:{lineno}: expected 'token<TAB>tag', got {line!r}"
            )
        surface, tag = parts
        if not surface or not tag:
            raise CorpusError(f"{name}:{lineno}: empty token or tag")
        pairs.append((surface, tag))
    if not pairs:
        raise CorpusError(f"empty document: {name}")
    return pairs


def parse_corpus(files: Iterable[tuple[str, Iterable[str]]]) -> Corpus:
    """Build a Corpus from (name, line stream) pairs, one document each.

    The tag set is the sorted union of gold tags observed across all files.
    """
    parsed = [(name, parse_document(name, stream)) for name, stream in files]
    if not parsed:
        raise CorpusError("no documents given")
    tagset = TagSet.from_labels(
        tag for _, pairs in parsed for _, tag in pairs
    )
    docs = []
    for name, pairs in parsed:
        tokens = tuple(
            Token(surface=w, normalized=w, gold=tagset.id_of(t))
            for w, t in pairs
        )
        docs.append(Document(name=name, tokens=tokens))
    return Corpus(documents=tuple(docs), tagset=tagset)


def read_corpus(paths: Iterable[str]) -> Corpus:
    def gen():
        for path in paths:
            with open(path, encoding="utf-8") as fh:
                yield path, list(fh)

    return parse_corpus(gen())


def serialize_document(doc: Document, tagset: TagSet, out: TextIO) -> None:
    for tok in doc.tokens:
        tag = tagset.labels[tok.gold] if tok.gold is not None else "-"
        out.write(f"{tok.surface}\t{tag}\n")


def levenshtein(a: str, b: str) -> int:
    """Minimum edit distance (insert/delete/substitute) over code points."""
    if len(a) > len(b):
        a, b = b, a
    if not a:
        return len(b)
    prev = list(range(len(a) + 1))
    for i, cb in enumerate(b, start=1):
        cur = [i] + [0] * len(a)
        for j, ca in enumerate(a, start=1):
            cur[j] = min(
                prev[j] + 1,
                cur[j - 1] + 1,
                prev[j - 1] + (ca != cb),
            )
        prev = cur
    return prev[len(a)]


@dataclass(frozen=True)
class Cluster:
    representative: str
    members: tuple[tuple[str, int], ...]  # (form, frequency)
    max_distance: int


@dataclass(frozen=True)
class ClusterReport:
    clusters: tuple[Cluster, ...]

    def write_tsv(self, out: TextIO) -> None:
        out.write("representative\tmember\tfrequency\tdistance\n")
        for cl in self.clusters:
            for form, freq in cl.members:
                d = levenshtein(cl.representative.lower(), form.lower())
                out.write(f"{cl.representative}\t{form}\t{freq}\t{d}\n")


def _display_form(variants: Counter) -> str:
    # most frequent original casing, ties lexicographically smallest
    return min(variants, key=lambda v: (-variants[v], v))


def normalize_orthography(
    corpus: Corpus, max_distance: int, min_frequency: int = 2
) -> tuple[Corpus, ClusterReport]:
    """Cluster spelling variants and rewrite every token's normalized form.

    Forms are compared case-insensitively; single-linkage components are
    built from form pairs within `max_distance`, where at least one side
    has frequency >= `min_frequency` (seed forms). Each cluster maps to
    its most frequent member, ties broken lexicographically.
    """
    if max_distance < 1:
        raise CorpusError("max_distance must be >= 1")

    freq: Counter = Counter()
    casing: dict[str, Counter] = defaultdict(Counter)
    for doc in corpus.documents:
        for tok in doc.tokens:
            key = tok.normalized.lower()
            freq[key] += 1
            casing[key][tok.normalized] += 1

    forms = sorted(freq)
    parent = {f: f for f in forms}

    def find(f: str) -> str:
        while parent[f] != f:
            parent[f] = parent[parent[f]]
            f = parent[f]
        return f

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    # length buckets prune the quadratic scan
    by_len: dict[int, list[str]] = defaultdict(list)
    for f in forms:
        by_len[len(f)].append(f)
    for f in forms:
        seed = freq[f] >= min_frequency
        for ln in range(len(f), len(f) + max_distance + 1):
            for g in by_len.get(ln, ()):
                if g <= f and ln == len(f):
                    continue
                if not (seed or freq[g] >= min_frequency):
                    continue
                if levenshtein(f, g) <= max_distance:
                    union(f, g)

    groups: dict[str, list[str]] = defaultdict(list)
    for f in forms:
        groups[find(f)].append(f)

    mapping: dict[str, str] = {}
    clusters = []
    for members in groups.values():
        if len(members) < 2:
            continue
        rep_key = min(members, key=lambda m: (-freq[m], m))
        rep = _display_form(casing[rep_key])
        maxd = max(
            levenshtein(a, b)
            for i, a in enumerate(members)
            for b in members[i + 1:]
        )
        for m in members:
            mapping[m] = rep
        clusters.append(
            Cluster(
                representative=rep,
                members=tuple(
                    (_display_form(casing[m]), freq[m])
                    for m in sorted(members, key=lambda m: (-freq[m], m))
                ),
                max_distance=maxd,
            )
        )
    clusters.sort(key=lambda c: c.representative)

    if not mapping:
        return corpus, ClusterReport(clusters=())

    new_docs = []
    for doc in corpus.documents:
        toks = tuple(
            replace(tok, normalized=mapping.get(tok.normalized.lower(), tok.normalized))
            for tok in doc.tokens
        )
        new_docs.append(Document(name=doc.name, tokens=toks))
    normalized = Corpus(documents=tuple(new_docs), tagset=corpus.tagset)
    return normalized, ClusterReport(clusters=tuple(clusters))


@dataclass(frozen=True)
class SplitSpec:
    """Where to cut one document: test = tokens[cut : cut + floor(f*l))."""

    test_fraction: float
    cut: int
    seed: int

    def __post_init__(self):
        if not 0 < self.test_fraction < 1:
            raise CorpusError("test_fraction must lie in (0, 1)")


def draw_split(doc: Document, test_fraction: float, seed: int) -> SplitSpec:
    """Draw a cut point uniformly from its legal range, per-document RNG."""
    l = len(doc)
    hi = int((1 - test_fraction) * l)
    if int(test_fraction * l) < 1 or hi < 1:
        raise CorpusError(f"document {doc.name} too small to split")
    rng = random.Random(f"{seed}:{doc.name}")
    return SplitSpec(test_fraction=test_fraction, cut=rng.randint(1, hi), seed=seed)


def split_document(doc: Document, spec: SplitSpec) -> tuple[Document, Document]:
    l = len(doc)
    n_test = int(spec.test_fraction * l)
    if n_test < 1:
        raise CorpusError(f"document {doc.name} too small for a test segment")
    if not 1 <= spec.cut <= int((1 - spec.test_fraction) * l):
        raise CorpusError(f"cut point {spec.cut} out of range for {doc.name}")
    lo, hi = spec.cut, spec.cut + n_test
    train = doc.tokens[:lo] + doc.tokens[hi:]
    test = doc.tokens[lo:hi]
    return (
        Document(name=f"{doc.name}#train", tokens=train),
        Document(name=f"{doc.name}#test", tokens=test),
    )


@dataclass(frozen=True)
class SplitPlan:
    """Resolved cut points for every document, replayable bit-exactly."""

    test_fraction: float
    seed: int
    cuts: tuple[tuple[str, int], ...]  # (document name, cut)

    @classmethod
    def for_corpus(
        cls, corpus: Corpus, test_fraction: float = 0.2, seed: int = 42
    ) -> "SplitPlan":
        cuts = tuple(
            (doc.name, draw_split(doc, test_fraction, seed).cut)
            for doc in corpus.documents
        )
        return cls(test_fraction=test_fraction, seed=seed, cuts=cuts)

    def spec_for(self, name: str) -> SplitSpec:
        for doc_name, cut in self.cuts:
            if doc_name == name:
                return SplitSpec(self.test_fraction, cut, self.seed)
        raise CorpusError(f"no split recorded for document {name}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "test_fraction": self.test_fraction,
                "seed": self.seed,
                "cuts": {name: cut for name, cut in self.cuts},
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "SplitPlan":
        raw = json.loads(text)
        return cls(
            test_fraction=raw["test_fraction"],
            seed=raw["seed"],
            cuts=tuple(sorted(raw["cuts"].items())),
        )


def assemble_scenario(
    corpus: Corpus,
    plan: SplitPlan,
    scenario: int,
    target_doc: Optional[int] = None,
) -> tuple[list[Document], list[Document]]:
    """Train/test documents for one of the three evaluation scenarios.

    1: train and test within document `target_doc`.
    2: train on every other document's train portion, test on `target_doc`.
    3: train on all train portions, test on every test portion.
    """
    n = len(corpus.documents)
    if scenario in (1, 2):
        if target_doc is None:
            raise CorpusError(f"scenario {scenario} requires a target document")
        if not 0 <= target_doc < n:
            raise CorpusError(f"target document index {target_doc} out of range")
    elif scenario != 3:
        raise CorpusError(f"unknown scenario: {scenario}")

    splits = [
        split_document(doc, plan.spec_for(doc.name)) for doc in corpus.documents
    ]
    if scenario == 1:
        train, test = splits[target_doc]
        return [train], [test]
    if scenario == 2:
        return (
            [tr for j, (tr, _) in enumerate(splits) if j != target_doc],
            [splits[target_doc][1]],
        )
    return [tr for tr, _ in splits], [te for _, te in splits]
