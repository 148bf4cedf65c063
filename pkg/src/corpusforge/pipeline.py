"""Stage orchestration with per-document state directories.

Layout under ``out_dir``::

    docs/<id>/document.json   every layer produced so far
    docs/<id>/tokens.tsv      token layer (after tokenize)
    docs/<id>/entities.tsv    mentions and chains (after merge-entities)
    docs/<id>/edus.txt        EDU spans (after constrain-edus)
    docs/<id>/features.tsv    EDU feature table (after constrain-edus)
    docs/<id>/state.json      stages completed, status, config fingerprint
    report.json               per-stage counts, rejects, failures, violations
    filter_report.jsonl       screening and extent verdicts
    manifest.jsonl            accepted documents with their token layers

Nothing time-dependent is written, so a rerun with the same config and seed
reproduces the tree byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Union

from .acquisition import (FilterVerdict, Rejection, ThreadNode, apply_snippet, extract_snippet,
                          load_stoplist, sample_thread, screen_fiction, screen_forum, strip_boilerplate,
                          thread_document, thread_from_document)
from .acquisition.screening import ARCHAIC_FORMS
from .corpus.blocks import load_blocks
from .corpus.io import (document_from_dict, dump_json, load_entity_layer, load_json, read_document,
                        read_manifest, read_ordinals, save_edus, save_entity_layer, save_token_layer,
                        write_document, write_manifest)
from .corpus.model import GENRES, Document, Genre
from .corpus.validate import validate_document
from .discourse import constrain_segmentation, featurize_edus
from .ensemble import BasePredictions, StackModel, apply_ensemble, load_predictions, to_upos
from .entities import load_ner, merge_entities
from .sentences import classify_sentence_type, split_sentences
from .tokenizer import apply_rules, load_rules, tokenize

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger(__name__)

STAGES = ("acquire", "tokenize", "split", "tag", "merge-entities", "constrain-edus", "validate")

# layers a stage reads from the document produced by earlier stages
STAGE_NEEDS = {
    "split": ("tokens",),
    "tag": ("tokens", "sentences"),
    "merge-entities": ("tokens",),
    "constrain-edus": ("tokens", "sentences"),
    "validate": (),
}


class ConfigError(ValueError):
    pass


@dataclass
class AcquireConfig:
    min_words: int = 400
    cap_words: int = 1000
    anchor_policy: str = "heading"
    stoplist: Optional[str] = None
    max_link_ratio: float = 0.10
    max_email_count: int = 5
    thread_min_words: int = 500
    thread_max_words: int = 1000
    root_min_words: int = 25
    root_max_words: int = 500


@dataclass
class PipelineConfig:
    manifest: str
    out_dir: str
    stages: List[str] = field(default_factory=lambda: list(STAGES))
    seed: int = 0
    workers: int = 1
    resume: bool = False
    acquire: AcquireConfig = field(default_factory=AcquireConfig)
    token_rules: Optional[str] = None
    tag_model: Optional[str] = None
    tag_predictions: Optional[str] = None
    coref_dir: Optional[str] = None
    ner_dir: Optional[str] = None
    edu_candidates_dir: Optional[str] = None
    budget_target: int = 500_000

    @classmethod
    def from_toml(cls, path: str, **overrides) -> "PipelineConfig":
        with open(path, "rb") as f:
            data = tomllib.load(f)
        base = os.path.dirname(os.path.abspath(path))

        def resolve(p):
            if p is None or p == "":
                return None
            return p if os.path.isabs(p) else os.path.normpath(os.path.join(base, p))

        run = data.get("run", {})
        known = {"manifest", "out_dir", "stages", "seed", "workers", "resume", "budget_target"}
        unknown = set(run) - known
        if unknown:
            raise ConfigError(f"unknown [run] keys: {sorted(unknown)}")
        try:
            acq = AcquireConfig(**data.get("acquire", {}))
        except TypeError as e:
            raise ConfigError(f"[acquire]: {e}") from None
        acq.stoplist = resolve(acq.stoplist)
        if "manifest" not in run or "out_dir" not in run:
            raise ConfigError("[run] needs manifest and out_dir")
        cfg = cls(
            manifest=resolve(run["manifest"]),
            out_dir=resolve(run["out_dir"]),
            stages=list(run.get("stages", STAGES)),
            seed=int(run.get("seed", 0)),
            workers=int(run.get("workers", 1)),
            resume=bool(run.get("resume", False)),
            acquire=acq,
            token_rules=resolve(data.get("tokenize", {}).get("rules")),
            tag_model=resolve(data.get("tag", {}).get("model")),
            tag_predictions=resolve(data.get("tag", {}).get("predictions")),
            coref_dir=resolve(data.get("entities", {}).get("coref_dir")),
            ner_dir=resolve(data.get("entities", {}).get("ner_dir")),
            edu_candidates_dir=resolve(data.get("edus", {}).get("candidates_dir")),
            budget_target=int(run.get("budget_target", 500_000)),
        )
        for key, value in overrides.items():
            if value is not None:
                setattr(cfg, key, value)
        return cfg

    def fingerprint(self) -> str:
        d = asdict(self)
        for key in ("workers", "resume", "out_dir"):
            d.pop(key)
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]

    def check(self) -> List[dict]:
        """Validate the config and every stage input; returns the manifest entries."""
        if not self.stages:
            raise ConfigError("no stages configured")
        unknown = [s for s in self.stages if s not in STAGES]
        if unknown:
            raise ConfigError(f"unknown stages {unknown}; valid: {', '.join(STAGES)}")
        first = STAGES.index(self.stages[0])
        if list(self.stages) != list(STAGES[first:first + len(self.stages)]):
            raise ConfigError(f"stages must be a contiguous run of {' -> '.join(STAGES)}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not os.path.exists(self.manifest):
            raise ConfigError(f"manifest not found: {self.manifest}")
        entries = read_manifest(self.manifest)
        ids = [e["id"] for e in entries]
        if len(set(ids)) != len(ids):
            raise ConfigError("manifest has duplicate document ids")
        for e in entries:
            if e["genre"] not in GENRES:
                raise ConfigError(f"{e['id']}: unknown genre {e['genre']!r}")

        def need_file(path, what):
            if not path or not os.path.isfile(path):
                raise ConfigError(f"stage needs {what}; not found: {path}")

        if self.stages[0] in ("acquire", "tokenize"):
            for e in entries:
                if "path" not in e or not os.path.isfile(e["path"]):
                    raise ConfigError(f"{e['id']}: source file missing ({e.get('path')})")
        else:
            for e in entries:
                d = os.path.join(self.out_dir, "docs", e["id"])
                state = os.path.join(d, "state.json")
                if os.path.isfile(state) and load_json(state).get("status") == "rejected":
                    continue
                path = os.path.join(d, "document.json")
                if not os.path.isfile(path):
                    raise ConfigError(f"{e['id']}: stage {self.stages[0]} needs {path}")
                doc = load_json(path)
                for layer in STAGE_NEEDS[self.stages[0]]:
                    if doc.get(layer) is None:
                        raise ConfigError(f"{e['id']}: stage {self.stages[0]} needs the {layer} layer")
        if self.token_rules and "tokenize" in self.stages:
            need_file(self.token_rules, "token rules")
        if "tag" in self.stages:
            need_file(self.tag_model, "[tag] model")
            need_file(self.tag_predictions, "[tag] predictions")
        if "merge-entities" in self.stages:
            for e in entries:
                need_file(os.path.join(self.coref_dir or "", e["id"] + ".tsv"), "[entities] coref layer")
                need_file(os.path.join(self.ner_dir or "", e["id"] + ".tsv"), "[entities] NER predictions")
        if "constrain-edus" in self.stages:
            for e in entries:
                need_file(os.path.join(self.edu_candidates_dir or "", e["id"] + ".txt"),
                          "[edus] candidate boundaries")
        if self.acquire.stoplist and "acquire" in self.stages:
            need_file(self.acquire.stoplist, "[acquire] stoplist")
        return entries


def derive_seed(seed: int, doc_id: str) -> int:
    return int.from_bytes(hashlib.sha256(f"{seed}:{doc_id}".encode()).digest()[:8], "big")


# -- sources -----------------------------------------------------------------------

def load_source(entry: dict) -> Union[Document, List[ThreadNode]]:
    path = entry["path"]
    fmt = entry.get("format")
    if fmt is None:
        fmt = "blocks" if path.endswith(".txt") else "json"
    if fmt == "blocks":
        return load_blocks(path, entry["id"], entry["genre"], entry.get("source", ""))
    data = load_json(path)
    if fmt == "thread" or isinstance(data, list) or "roots" in data:
        roots = data["roots"] if isinstance(data, dict) else data
        return [ThreadNode.from_dict(r) for r in roots]
    doc = document_from_dict(data)
    doc.id = entry["id"]
    return doc


# -- stages ------------------------------------------------------------------------

class _Context:
    """Per-process caches for large shared inputs."""

    predictions: Dict[str, Dict[str, BasePredictions]] = {}
    models: Dict[str, StackModel] = {}
    rules: Dict[Optional[str], list] = {}
    stoplists: Dict[Optional[str], frozenset] = {}

    @classmethod
    def doc_predictions(cls, path: str, doc_id: str) -> Optional[BasePredictions]:
        if path not in cls.predictions:
            preds = load_predictions(path)
            by_doc: Dict[str, list] = {}
            for row in preds.rows:
                by_doc.setdefault(row[0], []).append(row)
            cls.predictions[path] = {d: BasePredictions(list(preds.tagger_names), rows)
                                     for d, rows in by_doc.items()}
        return cls.predictions[path].get(doc_id)

    @classmethod
    def model(cls, path: str) -> StackModel:
        if path not in cls.models:
            cls.models[path] = StackModel.load(path)
        return cls.models[path]

    @classmethod
    def token_rules(cls, path: Optional[str]):
        if path not in cls.rules:
            cls.rules[path] = load_rules(path)
        return cls.rules[path]

    @classmethod
    def stoplist(cls, path: Optional[str]):
        if path not in cls.stoplists:
            cls.stoplists[path] = ARCHAIC_FORMS if path is None else frozenset(load_stoplist(path))
        return cls.stoplists[path]


class StageFailure(Exception):
    pass


def _record(doc_id: str, verdict: FilterVerdict, stage: str) -> dict:
    rec = verdict.to_record(doc_id)
    rec["stage"] = stage
    return rec


def stage_acquire(entry: dict, cfg: PipelineConfig, seed: int, records: List[dict]) -> Document:
    acq = cfg.acquire
    source = load_source(entry)
    doc_id = entry["id"]
    if isinstance(source, list):
        roots = []
        last = None
        for root in source:
            verdict = screen_forum(root, acq.max_link_ratio, acq.max_email_count)
            records.append(_record(doc_id, verdict, "screen"))
            if verdict.accepted:
                roots.append(root)
            else:
                last = verdict
        if not roots:
            raise _ScreenReject(last.reason if last else "link_density")
        snip = sample_thread(roots, seed, acq.thread_min_words, acq.thread_max_words,
                             acq.root_min_words, acq.root_max_words)
        records.append({"doc_id": doc_id, "stage": "extent", "verdict": "accept", "reason": "ok",
                        "counts": {"words": snip.word_count}, "detail": ";".join(snip.provenance)})
        return thread_document(snip, doc_id, entry.get("source", ""))

    doc = source
    verdict = None
    if doc.genre == Genre.FICTION:
        verdict = screen_fiction(doc.raw_text, entry.get("keywords", []), _Context.stoplist(acq.stoplist))
    elif doc.genre == Genre.FORUM:
        verdict = screen_forum(thread_from_document(doc), acq.max_link_ratio, acq.max_email_count)
    if verdict is not None:
        records.append(_record(doc_id, verdict, "screen"))
        if not verdict.accepted:
            raise _ScreenReject(verdict.reason)
    doc = strip_boilerplate(doc)
    snip = extract_snippet(doc, seed, acq.min_words, acq.cap_words, acq.anchor_policy)
    records.append({"doc_id": doc_id, "stage": "extent", "verdict": "accept", "reason": "ok",
                    "counts": {"words": snip.word_count}, "detail": ";".join(snip.provenance)})
    return apply_snippet(doc, snip)


class _ScreenReject(Rejection):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def stage_tokenize(doc: Document, cfg: PipelineConfig) -> Document:
    toks = tokenize(doc.raw_text, doc.markup)
    doc.tokens = apply_rules(toks, _Context.token_rules(cfg.token_rules), doc.genre.value)
    return doc


def stage_split(doc: Document, cfg: PipelineConfig) -> Document:
    doc.sentences = split_sentences(doc.tokens, markup=doc.markup)
    _classify(doc)
    return doc


def _classify(doc: Document) -> None:
    for s in doc.sentences:
        toks = doc.tokens[s.first_token:s.last_token + 1]
        s.stype = classify_sentence_type([t.form for t in toks], [t.xpos for t in toks])


def stage_tag(doc: Document, cfg: PipelineConfig) -> Document:
    base = _Context.doc_predictions(cfg.tag_predictions, doc.id)
    if base is None:
        raise StageFailure(f"no base predictions for {doc.id}")
    ordinals = [r[1] for r in base.rows]
    if ordinals != list(range(len(doc.tokens))):
        raise StageFailure(f"base predictions cover {len(ordinals)} tokens, document has {len(doc.tokens)}")
    tags = apply_ensemble(base, _Context.model(cfg.tag_model), [t.form for t in doc.tokens])
    for t, tag in zip(doc.tokens, tags):
        t.xpos = tag
        t.upos = to_upos(tag)
    _classify(doc)
    return doc


def stage_merge_entities(doc: Document, cfg: PipelineConfig) -> Document:
    mentions, chains = load_entity_layer(os.path.join(cfg.coref_dir, doc.id + ".tsv"))
    ner = load_ner(os.path.join(cfg.ner_dir, doc.id + ".tsv"))
    doc.mentions, doc.chains = merge_entities(mentions, chains, ner)
    return doc


def stage_constrain_edus(doc: Document, cfg: PipelineConfig) -> Document:
    cands = read_ordinals(os.path.join(cfg.edu_candidates_dir, doc.id + ".txt"))
    doc.edus = constrain_segmentation(cands, doc.sentences, doc.markup, doc.tokens)
    return doc


STAGE_FUNCS = {
    "tokenize": stage_tokenize,
    "split": stage_split,
    "tag": stage_tag,
    "merge-entities": stage_merge_entities,
    "constrain-edus": stage_constrain_edus,
}


# -- per-document driver -------------------------------------------------------------

@dataclass
class DocResult:
    doc_id: str
    genre: str
    status: str = "ok"  # ok | rejected | failed
    completed: List[str] = field(default_factory=list)
    stage: Optional[str] = None
    reason: str = ""
    violations: List[dict] = field(default_factory=list)
    tokens: Optional[int] = None
    records: List[dict] = field(default_factory=list)


def _write_outputs(doc: Document, doc_dir: str) -> None:
    write_document(doc, os.path.join(doc_dir, "document.json"))
    if doc.tokens is not None:
        save_token_layer(doc, os.path.join(doc_dir, "tokens.tsv"))
    if doc.mentions is not None:
        save_entity_layer(doc.mentions, os.path.join(doc_dir, "entities.tsv"))
    if doc.edus is not None:
        save_edus(doc.edus, os.path.join(doc_dir, "edus.txt"))
        if doc.sentences is not None:
            featurize_edus(doc.edus, doc.markup, doc.genre.value, doc.sentences,
                           doc.tokens).save(os.path.join(doc_dir, "features.tsv"))


def process_document(entry: dict, cfg: PipelineConfig) -> DocResult:
    doc_id = entry["id"]
    doc_dir = os.path.join(cfg.out_dir, "docs", doc_id)
    state_path = os.path.join(doc_dir, "state.json")
    fp = cfg.fingerprint()
    if cfg.resume and os.path.isfile(state_path):
        state = load_json(state_path)
        if state.get("fingerprint") == fp and state.get("status") in ("ok", "rejected"):
            return DocResult(**state["result"])

    res = DocResult(doc_id, entry["genre"])
    seed = derive_seed(cfg.seed, doc_id)
    first = cfg.stages[0]
    doc = None
    if first == "acquire" and os.path.isdir(doc_dir):
        shutil.rmtree(doc_dir)
    elif first not in ("acquire", "tokenize"):
        state = load_json(state_path) if os.path.isfile(state_path) else {}
        if state.get("status") == "rejected":
            return DocResult(**state["result"])
        doc = read_document(os.path.join(doc_dir, "document.json"))

    for stage in cfg.stages:
        res.stage = stage
        try:
            if stage == "acquire":
                doc = stage_acquire(entry, cfg, seed, res.records)
            elif stage == "tokenize" and doc is None:
                source = load_source(entry)
                if not isinstance(source, Document):
                    raise StageFailure("thread sources must go through acquire")
                doc = stage_tokenize(source, cfg)
            elif stage == "validate":
                res.violations = [asdict(v) for v in validate_document(doc)]
            else:
                doc = STAGE_FUNCS[stage](doc, cfg)
        except Rejection as r:
            res.status, res.reason = "rejected", r.reason
            if r.reason not in {rec["reason"] for rec in res.records}:
                res.records.append({"doc_id": doc_id, "stage": "extent", "verdict": "reject",
                                    "reason": r.reason, "counts": {}, "detail": str(r)})
            break
        except Exception as e:  # isolate the document, keep the run going
            log.warning("%s: stage %s failed: %s", doc_id, stage, e)
            res.status, res.reason = "failed", f"{type(e).__name__}: {e}"
            break
        res.completed.append(stage)
    else:
        res.stage = None

    os.makedirs(doc_dir, exist_ok=True)
    if doc is not None and res.status != "rejected":
        _write_outputs(doc, doc_dir)
        res.tokens = len(doc.tokens) if doc.tokens is not None else None
    dump_json({"fingerprint": fp, "status": res.status, "result": asdict(res)}, state_path)
    return res


# -- run --------------------------------------------------------------------------

@dataclass
class RunReport:
    stages: List[str]
    documents: int
    counts: Dict[str, Dict[str, int]]
    rejects: List[dict]
    failures: List[dict]
    violations: List[dict]
    budget: List[dict]
    elapsed: float = 0.0

    @property
    def hard_errors(self) -> int:
        return len(self.failures) + len(self.violations)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("elapsed")  # keeps report.json reproducible
        d["hard_errors"] = self.hard_errors
        return d


def run_pipeline(cfg: PipelineConfig) -> RunReport:
    t0 = time.perf_counter()
    entries = cfg.check()
    os.makedirs(os.path.join(cfg.out_dir, "docs"), exist_ok=True)
    if cfg.workers > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(process_document, entries, [cfg] * len(entries)))
    else:
        results = [process_document(e, cfg) for e in entries]

    counts = {s: {"ok": 0, "rejected": 0, "failed": 0} for s in cfg.stages}
    rejects, failures, violations, records, accepted = [], [], [], [], []
    for r in results:
        for s in r.completed:
            counts[s]["ok"] += 1
        if r.status != "ok":
            counts[r.stage][r.status] += 1
            (rejects if r.status == "rejected" else failures).append(
                {"doc_id": r.doc_id, "stage": r.stage, "reason": r.reason})
        for v in r.violations:
            violations.append(dict(v, doc_id=r.doc_id))
        records.extend(r.records)
        if r.status == "ok" and r.tokens is not None:
            accepted.append({"id": r.doc_id, "genre": r.genre,
                             "path": f"docs/{r.doc_id}/document.json",
                             "tokens": f"docs/{r.doc_id}/tokens.tsv", "token_count": r.tokens})

    with open(os.path.join(cfg.out_dir, "filter_report.jsonl"), "w", encoding="utf-8", newline="\n") as f:
        for rec in records:
            f.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
    write_manifest(accepted, os.path.join(cfg.out_dir, "manifest.jsonl"))
    budget = genre_budget_report(accepted, cfg.budget_target)
    report = RunReport(list(cfg.stages), len(entries), counts, rejects, failures, violations, budget)
    dump_json(report.to_dict(), os.path.join(cfg.out_dir, "report.json"))
    report.elapsed = time.perf_counter() - t0
    return report


# -- genre budget ------------------------------------------------------------------

def count_token_lines(path: str) -> int:
    n = 0
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip() and not line.startswith("#"):
                n += 1
    return n


def genre_budget_report(entries: Sequence[dict], target: Union[int, Dict[str, int]] = 500_000) -> List[dict]:
    """Per-genre documents, tokens, mean size, and surplus (+) or shortfall (-) against target."""
    docs = {g: 0 for g in GENRES}
    toks = {g: 0 for g in GENRES}
    for e in entries:
        genre = getattr(e["genre"], "value", e["genre"])
        if genre not in docs:
            raise ValueError(f"unknown genre {genre!r} for {e.get('id')}")
        if "token_count" in e:
            n = int(e["token_count"])
        elif "tokens" in e:
            n = count_token_lines(e["tokens"])
        else:
            raise ValueError(f"manifest entry {e.get('id')} has no token layer")
        docs[genre] += 1
        toks[genre] += n
    rows = []
    for g in GENRES:
        t = target[g] if isinstance(target, dict) else target
        rows.append({"genre": g, "documents": docs[g], "tokens": toks[g],
                     "mean_tokens": round(toks[g] / docs[g], 2) if docs[g] else 0.0,
                     "target": t, "delta": toks[g] - t})
    return rows


def write_budget_tsv(rows: Sequence[dict], f) -> None:
    cols = ["genre", "documents", "tokens", "mean_tokens", "target", "delta"]
    f.write("\t".join(cols) + "\n")
    for r in rows:
        cells = [str(r[c]) for c in cols]
        cells[-1] = f"{r['delta']:+d}"
        f.write("\t".join(cells) + "\n")
