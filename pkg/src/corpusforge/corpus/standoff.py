"""Stand-off bundles: every layer as offsets and labels, without the text.

A bundle can be published for sources whose text may not be redistributed;
``rehydrate`` restores the full document once the text has been recovered
from the original source. Token forms are not stored. Lemmas are stored as an
edit script against the form (optional lowercasing, then strip ``k`` trailing
characters and append a suffix), so regular lemmas leak no text.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .model import (
    EDU,
    CorefChain,
    DepArc,
    Document,
    EntityMention,
    MarkupSpan,
    Sentence,
    Token,
)
from .rst import format_tree, parse_tree
from .validate import validate_document
from .validation import InvalidDocumentError

FORMAT = "corpusforge-standoff"
VERSION = 1


class HashMismatchError(ValueError):
    def __init__(self, doc_id: str, expected: str, actual: str):
        self.doc_id = doc_id
        super().__init__(f"text for document {doc_id!r} does not match bundle digest "
                         f"(expected {expected[:12]}..., got {actual[:12]}...)")


class CorruptBundleError(ValueError):
    pass


def text_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def lemma_edit(form: str, lemma: Optional[str]) -> Optional[list]:
    if lemma is None:
        return None
    best = None
    for flag in (0, 1):
        base = form.lower() if flag else form
        p = 0
        while p < min(len(base), len(lemma)) and base[p] == lemma[p]:
            p += 1
        cand = [flag, len(base) - p, lemma[p:]]
        if best is None or len(cand[2]) < len(best[2]):
            best = cand
    return best


def apply_lemma_edit(form: str, edit: Optional[list]) -> Optional[str]:
    if edit is None:
        return None
    flag, strip, add = edit
    base = form.lower() if flag else form
    if not 0 <= strip <= len(base):
        raise CorruptBundleError(f"lemma edit strips {strip} chars from a {len(base)}-char form")
    return base[:len(base) - strip] + add


@dataclass
class StandoffBundle:
    doc_id: str
    genre: str
    source: str
    text_hash: str
    text_length: int
    markup: List[list] = field(default_factory=list)
    tokens: Optional[List[dict]] = None
    sentences: Optional[List[list]] = None
    arcs: Optional[List[list]] = None
    mentions: Optional[List[list]] = None
    chains: Optional[List[list]] = None
    edus: Optional[List[list]] = None
    rst: Optional[str] = None

    def to_json(self) -> str:
        data: Dict[str, Any] = {"format": FORMAT, "version": VERSION}
        data.update(self.__dict__)
        return json.dumps(data, ensure_ascii=False, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "StandoffBundle":
        data = json.loads(text)
        if data.pop("format", None) != FORMAT:
            raise CorruptBundleError("not a stand-off bundle")
        version = data.pop("version", None)
        if version != VERSION:
            raise CorruptBundleError(f"unsupported bundle version {version!r}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise CorruptBundleError(str(exc)) from None


def _rows(layer, fn):
    return None if layer is None else [fn(x) for x in layer]


def to_standoff(doc: Document) -> StandoffBundle:
    report = validate_document(doc)
    if report:
        raise InvalidDocumentError(doc.id, report)
    return StandoffBundle(
        doc_id=doc.id,
        genre=doc.genre.value,
        source=doc.source,
        text_hash=text_digest(doc.raw_text),
        text_length=len(doc.raw_text),
        markup=[[m.kind, m.start, m.end, dict(m.attrs)] for m in doc.markup],
        tokens=_rows(doc.tokens, lambda t: {
            "start": t.start, "end": t.end, "lemma": lemma_edit(t.form, t.lemma),
            "xpos": t.xpos, "upos": t.upos, "feats": t.feats,
        }),
        sentences=_rows(doc.sentences, lambda s: [s.first_token, s.last_token, s.stype]),
        arcs=_rows(doc.arcs, lambda a: [a.dependent, a.head, a.deprel]),
        mentions=_rows(doc.mentions, lambda m: [m.id, m.first_token, m.last_token, m.etype, m.chain]),
        chains=_rows(doc.chains, lambda c: [c.id, list(c.mentions)]),
        edus=_rows(doc.edus, lambda e: [e.id, e.first_token, e.last_token]),
        rst=None if doc.rst is None else format_tree(doc.rst),
    )


def rehydrate(bundle: StandoffBundle, text: str) -> Document:
    actual = text_digest(text)
    if actual != bundle.text_hash:
        raise HashMismatchError(bundle.doc_id, bundle.text_hash, actual)
    n = len(text)
    try:
        markup = [MarkupSpan(k, s, e, dict(a)) for k, s, e, a in bundle.markup]
        tokens = None
        if bundle.tokens is not None:
            tokens = []
            for i, row in enumerate(bundle.tokens):
                start, end = row["start"], row["end"]
                if not 0 <= start < end <= n:
                    raise CorruptBundleError(f"token {i} offsets {start}-{end} outside text of length {n}")
                form = text[start:end]
                tokens.append(Token(i, start, end, form, apply_lemma_edit(form, row["lemma"]),
                                    row["xpos"], row["upos"], row["feats"]))
        doc = Document(
            id=bundle.doc_id,
            genre=bundle.genre,
            source=bundle.source,
            raw_text=text,
            markup=markup,
            tokens=tokens,
            sentences=_rows(bundle.sentences, lambda r: Sentence(*r)),
            arcs=_rows(bundle.arcs, lambda r: DepArc(*r)),
            mentions=_rows(bundle.mentions, lambda r: EntityMention(*r)),
            chains=_rows(bundle.chains, lambda r: CorefChain(r[0], list(r[1]))),
            edus=_rows(bundle.edus, lambda r: EDU(*r)),
            rst=None if bundle.rst is None else parse_tree(bundle.rst),
        )
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, CorruptBundleError):
            raise
        raise CorruptBundleError(f"bundle for {bundle.doc_id!r}: {exc}") from None
    for m in markup:
        if not 0 <= m.start < m.end <= n:
            raise CorruptBundleError(f"markup {m.kind} {m.start}-{m.end} outside text of length {n}")
    return doc
