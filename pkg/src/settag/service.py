"""HTTP annotation service: serves UBOP candidate sets for a trained
model and records human corrections in an append-only log."""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import JSONResponse, PlainTextResponse

from .corpus import Corpus, Document, Token, read_corpus
from .setpred import MAX_BETA, UtilityConfig, argmax_tag, ubop
from .taggers import Tagger, load_model

SCHEMA_VERSION = 1
MAX_TOKENS_PER_REQUEST = 5000


def _record_id(doc_id: str, index: int, annotator: str, timestamp_ms: int) -> str:
    key = f"{doc_id}:{index}:{annotator}:{timestamp_ms}"
    return hashlib.sha1(key.encode("utf-8")).hexdigest()[:16]


class AnnotationLog:
    """Append-only JSONL log, replayed on startup; appends are serialized."""

    def __init__(self, path: str):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.records: dict[str, dict] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        self.records[rec["id"]] = rec

    def append(self, rec: dict) -> tuple[str, bool]:
        rec_id = _record_id(
            rec["document_id"], rec["token_index"], rec["annotator"], rec["timestamp_ms"]
        )
        with self._lock:
            if rec_id in self.records:
                return rec_id, False
            rec = {"id": rec_id, **rec}
            self.records[rec_id] = rec
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
            return rec_id, True

    def latest_per_token(self, doc_id: str) -> dict[int, str]:
        chosen: dict[int, tuple[int, int, str]] = {}
        for order, rec in enumerate(self.records.values()):
            if rec["document_id"] != doc_id:
                continue
            key = rec["token_index"]
            stamp = (rec["timestamp_ms"], order, rec["chosen_tag"])
            if key not in chosen or stamp > chosen[key]:
                chosen[key] = stamp
        return {idx: tag for idx, (_, _, tag) in chosen.items()}


class Session:
    """Shared read-only model + documents, plus the mutable annotation log."""

    def __init__(self, model: Tagger, corpus: Corpus, log: AnnotationLog):
        self.model = model
        self.corpus = corpus
        self.log = log
        self._posteriors = {}

    def doc(self, doc_id: str) -> Document | None:
        for d in self.corpus.documents:
            if Path(d.name).name == doc_id or d.name == doc_id:
                return d
        return None

    def posteriors(self, doc: Document):
        if doc.name not in self._posteriors:
            self._posteriors[doc.name] = self.model.posteriors(doc)
        return self._posteriors[doc.name]

    def candidate_sets(self, posteriors, beta: float):
        cfg = UtilityConfig(beta=beta, s=self.model.tagset_.size)
        labels = self.model.tagset_.labels
        out = []
        for p in posteriors:
            pred = ubop(p, cfg)
            out.append(
                {
                    "candidates": [
                        {"tag": labels[t], "probability": float(p[t])}
                        for t in pred.tags
                    ],
                    "expected_utility": pred.expected_utility,
                }
            )
        return out


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"schema_version": SCHEMA_VERSION, "error": message},
    )


def create_app(model_path: str, corpus_paths: list[str], log_path: str) -> FastAPI:
    model = load_model(model_path)
    corpus = read_corpus(corpus_paths)
    session = Session(model, corpus, AnnotationLog(log_path))
    app = FastAPI(title="settag annotation service")
    app.state.session = session

    @app.get("/api/tagset")
    def get_tagset():
        return {
            "schema_version": SCHEMA_VERSION,
            "labels": list(model.tagset_.labels),
        }

    @app.get("/api/documents")
    def get_documents():
        return {
            "schema_version": SCHEMA_VERSION,
            "documents": [
                {"id": Path(d.name).name, "name": d.name, "tokens": len(d)}
                for d in corpus.documents
            ],
        }

    @app.get("/api/documents/{doc_id}")
    def get_document(doc_id: str, beta: float = 1.0):
        doc = session.doc(doc_id)
        if doc is None:
            return _error(404, f"unknown document: {doc_id}")
        if not 0 < beta <= MAX_BETA:
            return _error(400, f"beta must lie in (0, {MAX_BETA}]")
        sets = session.candidate_sets(session.posteriors(doc), beta)
        decided = session.log.latest_per_token(doc_id)
        return {
            "schema_version": SCHEMA_VERSION,
            "id": doc_id,
            "beta": beta,
            "tokens": [
                {
                    "index": i,
                    "surface": tok.surface,
                    "decided_tag": decided.get(i),
                    **cands,
                }
                for i, (tok, cands) in enumerate(zip(doc.tokens, sets))
            ],
        }

    @app.post("/api/tag")
    async def post_tag(payload: dict):
        if session.model is None:
            return _error(503, "model not loaded")
        tokens = payload.get("tokens")
        beta = payload.get("beta", 1.0)
        if not isinstance(tokens, list) or not all(
            isinstance(t, str) and t for t in tokens
        ):
            return _error(400, "tokens must be a list of non-empty strings")
        if len(tokens) == 0:
            return _error(400, "tokens must not be empty")
        if len(tokens) > MAX_TOKENS_PER_REQUEST:
            return _error(413, f"at most {MAX_TOKENS_PER_REQUEST} tokens per request")
        if not isinstance(beta, (int, float)) or not 0 < beta <= MAX_BETA:
            return _error(400, f"beta must lie in (0, {MAX_BETA}]")
        doc = Document(
            name="request",
            tokens=tuple(Token(surface=t, normalized=t) for t in tokens),
        )
        posts = session.model.posteriors(doc)
        return {
            "schema_version": SCHEMA_VERSION,
            "beta": beta,
            "tokens": session.candidate_sets(posts, float(beta)),
        }

    @app.post("/api/annotations")
    async def post_annotation(payload: dict):
        required = ("document_id", "token_index", "chosen_tag", "annotator", "timestamp_ms")
        if not all(k in payload for k in required):
            return _error(400, f"required fields: {', '.join(required)}")
        doc = session.doc(payload["document_id"])
        if doc is None:
            return _error(404, f"unknown document: {payload['document_id']}")
        index = payload["token_index"]
        if not isinstance(index, int) or not 0 <= index < len(doc):
            return _error(422, f"token index {index!r} out of range")
        if payload["chosen_tag"] not in model.tagset_:
            return _error(422, f"unknown tag: {payload['chosen_tag']}")
        rec = {
            "document_id": payload["document_id"],
            "token_index": index,
            "chosen_tag": payload["chosen_tag"],
            "annotator": str(payload["annotator"]),
            "timestamp_ms": int(payload["timestamp_ms"]),
            "shown_candidates": payload.get("shown_candidates", []),
            "override": bool(payload.get("override", False)),
        }
        rec_id, created = session.log.append(rec)
        return JSONResponse(
            status_code=201,
            content={"schema_version": SCHEMA_VERSION, "id": rec_id, "created": created},
        )

    @app.get("/api/export/{doc_id}")
    def get_export(doc_id: str):
        doc = session.doc(doc_id)
        if doc is None:
            return _error(404, f"unknown document: {doc_id}")
        posts = session.posteriors(doc)
        labels = model.tagset_.labels
        decided = session.log.latest_per_token(doc_id)
        lines = []
        for i, (tok, p) in enumerate(zip(doc.tokens, posts)):
            tag = decided.get(i) or labels[argmax_tag(p)]
            lines.append(f"{tok.surface}\t{tag}")
        return PlainTextResponse("\n".join(lines) + "\n")

    return app
