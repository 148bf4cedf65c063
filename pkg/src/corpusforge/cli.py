"""``forge`` command line: acquisition, tokenization, ensembling, evaluation, runs."""

from __future__ import annotations

import argparse
import glob
import json
import logging
import os
import sys
from typing import Dict, List, Optional

from .corpus.io import dump_json, load_token_layer, read_document, read_manifest, save_token_layer
from .corpus.model import GENRES, Document

log = logging.getLogger("forge")


class CommandError(Exception):
    pass


# -- acquire ---------------------------------------------------------------------

def cmd_acquire(args) -> int:
    from .pipeline import AcquireConfig, PipelineConfig, run_pipeline

    entries = read_manifest(args.manifest)
    if args.genre:
        entries = [e for e in entries if e["genre"] == args.genre]
    os.makedirs(args.out, exist_ok=True)
    # a filtered manifest keeps the run restricted to the requested genre
    sub = os.path.join(args.out, "acquire_manifest.jsonl")
    with open(sub, "w", encoding="utf-8", newline="\n") as f:
        for e in entries:
            f.write(json.dumps(e, sort_keys=True) + "\n")
    acq = AcquireConfig(min_words=args.min_words, cap_words=args.cap_words, stoplist=args.stoplist,
                        anchor_policy=args.anchor_policy)
    cfg = PipelineConfig(sub, args.out, ["acquire"], seed=args.seed, workers=args.workers, acquire=acq)
    report = run_pipeline(cfg)
    accepted = report.counts["acquire"]["ok"]
    print(f"acquire: {accepted} accepted, {len(report.rejects)} rejected, {len(report.failures)} failed")
    for r in report.rejects:
        print(f"  reject {r['doc_id']}: {r['reason']}")
    print(f"filter report: {os.path.join(args.out, 'filter_report.jsonl')}")
    return 0 if report.hard_errors == 0 else 1


# -- tokenize --------------------------------------------------------------------

def _load_any(path: str, genre: Optional[str]) -> Document:
    if path.endswith(".json"):
        return read_document(path)
    from .corpus.blocks import load_blocks
    doc_id = os.path.splitext(os.path.basename(path))[0]
    return load_blocks(path, doc_id, genre or "academic")


def cmd_tokenize(args) -> int:
    from .sentences import split_sentences
    from .tokenizer import apply_rules, load_rules, tokenize

    rules = load_rules(args.rules)
    os.makedirs(args.out, exist_ok=True)
    for path in args.inputs:
        doc = _load_any(path, args.genre)
        doc.tokens = apply_rules(tokenize(doc.raw_text, doc.markup), rules, doc.genre.value)
        if args.split:
            doc.sentences = split_sentences(doc.tokens, markup=doc.markup)
        out = os.path.join(args.out, f"{doc.id}.tokens.tsv")
        save_token_layer(doc, out)
        print(f"{doc.id}\t{len(doc.tokens)} tokens\t{out}")
    return 0


# -- ensemble --------------------------------------------------------------------

def _gold_tokens(paths: List[str]) -> Dict[str, list]:
    gold = {}
    for p in paths:
        doc = load_token_layer(p)
        gold[doc.id] = doc.tokens
    return gold


def cmd_ensemble(args) -> int:
    from . import ensemble as ens

    if args.action == "folds":
        entries = read_manifest(args.manifest)
        plan = ens.make_folds([(e["id"], e["genre"]) for e in entries], args.k, args.seed)
        dump_json(plan.to_dict(), args.out)
        for k in range(plan.k):
            print(f"fold {k}: {' '.join(plan.docs_in(k))}")
        return 0

    if args.action == "matrix":
        folds = []
        for item in args.fold:
            k, _, path = item.partition("=")
            if not path:
                raise CommandError(f"--fold expects K=PATH, got {item!r}")
            folds.append(ens.load_predictions(path, fold_id=int(k)))
        pre = ens.load_predictions(args.pretrained) if args.pretrained else None
        plan = None
        if args.plan:
            with open(args.plan, encoding="utf-8") as f:
                plan = ens.FoldPlan.from_dict(json.load(f))
        matrix = ens.assemble_stack_matrix(folds, pre, _gold_tokens(args.gold), plan)
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            matrix.write_tsv(f)
        print(f"{len(matrix)} rows x {len(matrix.tagger_names)} tagger columns -> {args.out}")
        return 0

    if args.action == "fit":
        with open(args.matrix, encoding="utf-8") as f:
            matrix = ens.StackMatrix.read_tsv(f)
        params = ens.GBDTParams(n_rounds=args.rounds, max_depth=args.depth,
                                learning_rate=args.learning_rate, seed=args.seed)
        model = ens.fit_meta(matrix, params, tags_only=args.tags_only)
        model.save(args.out)
        print(f"trained on {len(matrix)} rows, {len(model.labels)} labels; "
              f"training accuracy {model.train_accuracy:.4f} -> {args.out}")
        return 0

    preds = ens.load_predictions(args.predictions)
    if args.action == "apply":
        model = ens.StackModel.load(args.model)
        forms = None
        if args.tokens:
            by_key = {}
            for p in args.tokens:
                doc = load_token_layer(p)
                by_key.update({(doc.id, t.index): t.form for t in doc.tokens})
            forms = [by_key[(d, i)] for d, i, _ in preds.rows]
        tags = ens.apply_ensemble(preds, model, forms)
    else:
        priority = args.priority.split(",") if args.priority else None
        tags = ens.majority_vote(preds, priority)
    out = open(args.out, "w", encoding="utf-8", newline="\n") if args.out else sys.stdout
    try:
        out.write("doc_id\ttoken\txpos\n")
        for (d, i, _), tag in zip(preds.rows, tags):
            out.write(f"{d}\t{i}\t{tag}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


# -- eval ------------------------------------------------------------------------

def _doc_dir(path: str) -> Dict[str, Document]:
    # a run output directory, or else a flat folder of document JSON files
    files = sorted(glob.glob(os.path.join(path, "docs", "*", "document.json")))
    if not files:
        files = sorted(glob.glob(os.path.join(path, "*.json")))
    if not files:
        raise CommandError(f"no documents found under {path}")
    docs = {}
    for p in files:
        doc = read_document(p)
        docs[doc.id] = doc
    return docs


def cmd_eval(args) -> int:
    from .metrics import score_corpus
    from .plotting import plot_scores

    report = score_corpus(args.layer, _doc_dir(args.gold), _doc_dir(args.pred), args.keep_singletons)
    text = json.dumps(report, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        if report["documents"]:
            fig = os.path.splitext(args.out)[0] + ".png"
            plot_scores(report, fig)
            print(f"report: {args.out}\nfigure: {fig}")
    else:
        print(text)
    corpus = report["corpus"]
    if corpus is not None:
        print("corpus:", json.dumps({k: v for k, v in corpus.items() if not isinstance(v, dict)},
                                     sort_keys=True), file=sys.stderr)
    return 0


# -- run / budget -------------------------------------------------------------------

def cmd_run(args) -> int:
    from .pipeline import PipelineConfig, run_pipeline

    cfg = PipelineConfig.from_toml(args.config, seed=args.seed, workers=args.workers,
                                   out_dir=os.path.abspath(args.out) if args.out else None)
    if args.resume:
        cfg.resume = True
    report = run_pipeline(cfg)
    for stage in report.stages:
        c = report.counts[stage]
        print(f"{stage:15s} ok={c['ok']} rejected={c['rejected']} failed={c['failed']}")
    for r in report.rejects:
        print(f"reject  {r['doc_id']} at {r['stage']}: {r['reason']}")
    for r in report.failures:
        print(f"FAILED  {r['doc_id']} at {r['stage']}: {r['reason']}")
    for v in report.violations:
        print(f"VIOLATION {v['doc_id']} {v['layer']} {v['location']} {v['rule']} {v['message']}")
    print(f"{report.documents} documents, {report.hard_errors} hard errors, "
          f"{report.elapsed:.2f}s -> {cfg.out_dir}")
    return 0 if report.hard_errors == 0 else 1


def cmd_budget(args) -> int:
    from .pipeline import genre_budget_report, write_budget_tsv
    from .plotting import plot_budget

    rows = genre_budget_report(read_manifest(args.manifest), args.target)
    write_budget_tsv(rows, sys.stdout)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "budget.tsv"), "w", encoding="utf-8", newline="\n") as f:
            write_budget_tsv(rows, f)
        plot_budget(rows, os.path.join(args.out, "budget.png"))
        print(f"wrote {os.path.join(args.out, 'budget.tsv')} and budget.png", file=sys.stderr)
    return 0


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forge", description="Multilayer web corpus toolkit.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("acquire", help="screen sources and extract snippets")
    a.add_argument("--manifest", required=True)
    a.add_argument("--genre", choices=GENRES)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--min-words", type=int, default=400)
    a.add_argument("--cap-words", type=int, default=1000)
    a.add_argument("--anchor-policy", choices=("heading", "top"), default="heading")
    a.add_argument("--stoplist")
    a.add_argument("--workers", type=int, default=1)
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_acquire)

    t = sub.add_parser("tokenize", help="tokenize block-format or document JSON files")
    t.add_argument("inputs", nargs="+")
    t.add_argument("--out", required=True)
    t.add_argument("--genre", choices=GENRES, help="genre for block-format inputs")
    t.add_argument("--rules", help="token rule file (default: bundled rules)")
    t.add_argument("--split", action="store_true", help="also split sentences")
    t.set_defaults(func=cmd_tokenize)

    e = sub.add_parser("ensemble", help="stacked POS tagging")
    esub = e.add_subparsers(dest="action", required=True)
    f = esub.add_parser("folds")
    f.add_argument("--manifest", required=True)
    f.add_argument("-k", type=int, default=5)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out", required=True)
    m = esub.add_parser("matrix")
    m.add_argument("--fold", action="append", default=[], metavar="K=PATH",
                   help="re-trained tagger predictions for held-out fold K")
    m.add_argument("--pretrained")
    m.add_argument("--gold", nargs="+", required=True, help="gold token layer files")
    m.add_argument("--plan", help="fold plan JSON; enables the held-out check")
    m.add_argument("--out", required=True)
    ft = esub.add_parser("fit")
    ft.add_argument("--matrix", required=True)
    ft.add_argument("--out", required=True)
    ft.add_argument("--tags-only", action="store_true", help="exclude token-shape features")
    ft.add_argument("--rounds", type=int, default=100)
    ft.add_argument("--depth", type=int, default=4)
    ft.add_argument("--learning-rate", type=float, default=0.1)
    ft.add_argument("--seed", type=int, default=0)
    ap = esub.add_parser("apply")
    ap.add_argument("--model", required=True)
    ap.add_argument("--predictions", required=True)
    ap.add_argument("--tokens", nargs="*", help="token layers supplying forms for shape features")
    ap.add_argument("--out")
    v = esub.add_parser("vote")
    v.add_argument("--predictions", required=True)
    v.add_argument("--priority", help="comma-separated tagger names")
    v.add_argument("--out")
    e.set_defaults(func=cmd_ensemble)

    ev = sub.add_parser("eval", help="score predicted documents against gold")
    ev.add_argument("layer", choices=("tokens", "xpos", "deps", "coref", "entities", "rst"))
    ev.add_argument("--gold", required=True)
    ev.add_argument("--pred", required=True)
    ev.add_argument("--keep-singletons", action="store_true")
    ev.add_argument("--out", help="write JSON report here and a PNG figure beside it")
    ev.set_defaults(func=cmd_eval)

    r = sub.add_parser("run", help="run the pipeline from a TOML config")
    r.add_argument("--config", required=True)
    r.add_argument("--seed", type=int)
    r.add_argument("--workers", type=int)
    r.add_argument("--out", help="override [run] out_dir")
    r.add_argument("--resume", action="store_true", help="skip documents already done with this config")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("budget", help="per-genre token totals against targets")
    b.add_argument("--manifest", required=True)
    b.add_argument("--target", type=int, default=500_000)
    b.add_argument("--out", help="directory for budget.tsv and budget.png")
    b.set_defaults(func=cmd_budget)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CommandError, ValueError, OSError, KeyError) as e:
        print(f"forge: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
