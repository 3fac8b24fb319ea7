"""Command-line interface: normalize, train, tag, eval, sweep, serve.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import evaluation
from .corpus import (
    CorpusError,
    Document,
    SplitPlan,
    Token,
    normalize_orthography,
    read_corpus,
)
from .evaluation import EvalError, beta_sweep, emit_report, emit_sweep, run_scenario
from .setpred import UtilityConfig, ubop
from .taggers import TAGGER_KINDS, TaggerError, load_model, make_tagger


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="settag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_corpus(p):
        p.add_argument("--corpus", nargs="+", required=True, help="corpus TSV files")

    def add_split(p):
        p.add_argument("--fraction", type=float, default=0.2)
        p.add_argument("--seed", type=int, default=42)

    p = sub.add_parser("normalize", help="cluster spelling variants")
    add_corpus(p)
    p.add_argument("--max-distance", type=int, default=2)
    p.add_argument("--min-frequency", type=int, default=2)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("train", help="train a tagger on the given corpus")
    add_corpus(p)
    p.add_argument("--tagger", choices=sorted(TAGGER_KINDS), default="hmm")
    p.add_argument("--out", required=True, help="model file")

    p = sub.add_parser("tag", help="tag documents with UBOP candidate sets")
    add_corpus(p)
    p.add_argument("--model", required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("eval", help="run an evaluation scenario")
    p.add_argument("--corpus", nargs="+", help="corpus TSV files")
    p.add_argument("--tagged", help="evaluate a file produced by `tag`")
    p.add_argument("--model", help="model file (required with --tagged)")
    p.add_argument("--tagger", choices=sorted(TAGGER_KINDS), default="hmm")
    p.add_argument("--scenario", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--target", type=int, help="target document index (scenarios 1, 2)")
    p.add_argument("--beta", type=float, default=1.0)
    add_split(p)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--out", default="-")

    p = sub.add_parser("sweep", help="scenario-3 beta sweep")
    add_corpus(p)
    p.add_argument("--tagger", choices=sorted(TAGGER_KINDS), default="hmm")
    p.add_argument("--betas", default="0.25,0.5,1,2,4")
    add_split(p)
    p.add_argument("--out", default="-")

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    add_corpus(p)
    p.add_argument("--model", required=True)
    p.add_argument("--log", default="annotations.jsonl")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_normalize(args) -> None:
    if args.max_distance < 1:
        raise UsageError("--max-distance must be >= 1")
    corpus = read_corpus(args.corpus)
    normalized, report = normalize_orthography(
        corpus, args.max_distance, args.min_frequency
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for doc in normalized.documents:
        path = out_dir / Path(doc.name).name
        with open(path, "w", encoding="utf-8") as fh:
            for tok in doc.tokens:
                tag = (
                    normalized.tagset.labels[tok.gold]
                    if tok.gold is not None
                    else "-"
                )
                fh.write(f"{tok.normalized}\t{tag}\n")
    with open(out_dir / "clusters.tsv", "w", encoding="utf-8") as fh:
        report.write_tsv(fh)


def cmd_train(args) -> None:
    corpus = read_corpus(args.corpus)
    model = make_tagger(args.tagger)
    model.fit(list(corpus.documents), corpus.tagset)
    model.save(args.out)


def _read_maybe_tagged(path: str) -> list[tuple[str, str | None]]:
    """token<TAB>tag lines; a bare token line means no gold tag."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) == 1:
                rows.append((parts[0], None))
            elif len(parts) == 2:
                rows.append((parts[0], parts[1] if parts[1] != "-" else None))
            else:
                raise CorpusError(f"{path}:{lineno}: too many fields")
    if not rows:
        raise CorpusError(f"empty document: {path}")
    return rows


def cmd_tag(args) -> None:
    model = load_model(args.model)
    tagset = model.tagset_
    cfg = UtilityConfig(beta=args.beta, s=tagset.size)
    lines = []
    for path in args.corpus:
        rows = _read_maybe_tagged(path)
        tokens = tuple(
            Token(
                surface=w,
                normalized=w,
                gold=tagset.id_of(t) if t is not None and t in tagset else None,
            )
            for w, t in rows
        )
        doc = Document(name=path, tokens=tokens)
        posts = model.posteriors(doc)
        lines.append(f"# document\t{path}")
        for (w, gold_label), p in zip(rows, posts):
            pred = ubop(p, cfg)
            cands = ",".join(
                f"{tagset.labels[t]}:{p[t]:.6f}" for t in pred.tags
            )
            lines.append(f"{w}\t{gold_label or '-'}\t{cands}")
    _write("\n".join(lines) + "\n", args.out)


def _eval_tagged(args) -> None:
    if not args.model:
        raise UsageError("--tagged requires --model")
    model = load_model(args.model)
    tagset = model.tagset_
    cfg = UtilityConfig(beta=args.beta, s=tagset.size)
    import numpy as np

    from .setpred import PredictionSet, g_beta

    sections: dict[str, list] = {}
    current = "tagged"
    with open(args.tagged, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("# document\t"):
                current = line.split("\t", 1)[1]
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise CorpusError(f"{args.tagged}:{lineno}: expected 3 fields")
            word, gold, cands = parts
            pairs = []
            for item in cands.split(","):
                label, prob = item.rsplit(":", 1)
                pairs.append((tagset.id_of(label), float(prob)))
            sections.setdefault(current, []).append((word, gold, pairs))

    reports = []
    for name, rows in sections.items():
        preds, gold_ids, posts, words = [], [], [], []
        for word, gold, pairs in rows:
            if gold == "-":
                continue
            tags = tuple(t for t, _ in pairs)
            eu = g_beta(len(tags), cfg) * sum(pr for _, pr in pairs)
            preds.append(PredictionSet(tags=tags, expected_utility=eu))
            gold_ids.append(tagset.id_of(gold))
            p = np.zeros(tagset.size)
            for t, pr in pairs:
                p[t] = pr
            posts.append(p)
            words.append(word)
        if not preds:
            raise CorpusError(f"{args.tagged}: no gold-tagged tokens in {name}")
        rep, _ = evaluation.evaluate(
            preds,
            gold_ids,
            np.stack(posts),
            model.vocabulary_,
            words,
            cfg,
            scenario=0,
            tagger=model.kind,
            document=name,
        )
        reports.append(rep)
    _write(emit_report(reports, args.format), args.out)


def cmd_eval(args) -> None:
    if args.tagged:
        _eval_tagged(args)
        return
    if not args.corpus:
        raise UsageError("eval needs --corpus or --tagged")
    if args.scenario in (1, 2) and args.target is None:
        raise UsageError(f"scenario {args.scenario} requires --target")
    corpus = read_corpus(args.corpus)
    plan = SplitPlan.for_corpus(corpus, args.fraction, args.seed)
    reports, _, _ = run_scenario(
        corpus, plan, args.tagger, args.scenario, args.beta, args.target
    )
    _write(emit_report(reports, args.format), args.out)


def cmd_sweep(args) -> None:
    try:
        betas = [float(b) for b in args.betas.split(",") if b.strip()]
    except ValueError:
        raise UsageError(f"bad --betas grid: {args.betas!r}") from None
    corpus = read_corpus(args.corpus)
    plan = SplitPlan.for_corpus(corpus, args.fraction, args.seed)
    table = beta_sweep(corpus, plan, args.tagger, betas)
    _write(emit_sweep(table), args.out)


def cmd_serve(args) -> None:
    import uvicorn

    from .service import create_app

    app = create_app(args.model, args.corpus, args.log)
    uvicorn.run(app, host=args.host, port=args.port)


COMMANDS = {
    "normalize": cmd_normalize,
    "train": cmd_train,
    "tag": cmd_tag,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"settag: {exc}", file=sys.stderr)
        return 1
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"settag: {exc}", file=sys.stderr)
        return 1
    except (CorpusError, TaggerError, EvalError, OSError, ValueError) as exc:
        print(f"settag: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
