"""Readers and writers for the on-disk layer formats.

Token layer (``tokens.tsv``): ten tab-separated columns per token::

    ordinal form lemma upos xpos feats head deprel char_start char_end

``ordinal`` is 1-based within its sentence, ``head`` is the sentence-local
ordinal of the head (0 for ROOT), absent values are ``_``. Sentences are
separated by a blank line. Comment lines precede the first sentence
(``# doc_id = ``, ``# genre = ``, ``# source = ``, ``# text_length = ``,
``# layers = ``, and one ``# markup = <kind> <start> <end> [attrs-json]``
per markup span) and each sentence (``# sent_type = ``). When the document has no
sentence layer all tokens form one block without ``# sent_type``.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict
from typing import Dict, Iterable, List, Optional, TextIO, Tuple

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

_ABSENT = "_"


class LayerFormatError(ValueError):
    pass


# -- document JSON --------------------------------------------------------

def document_to_dict(doc: Document) -> dict:
    out = {
        "id": doc.id,
        "genre": doc.genre.value,
        "source": doc.source,
        "raw_text": doc.raw_text,
        "markup": [asdict(m) for m in doc.markup],
    }
    for layer in ("tokens", "sentences", "arcs", "mentions", "chains", "edus"):
        value = getattr(doc, layer)
        out[layer] = None if value is None else [asdict(x) for x in value]
    out["rst"] = None if doc.rst is None else format_tree(doc.rst)
    return out


def document_from_dict(data: dict) -> Document:
    def layer(name, cls):
        value = data.get(name)
        return None if value is None else [cls(**x) for x in value]

    rst = data.get("rst")
    return Document(
        id=data["id"],
        genre=data["genre"],
        source=data.get("source", ""),
        raw_text=data["raw_text"],
        markup=[MarkupSpan(**m) for m in data.get("markup", [])],
        tokens=layer("tokens", Token),
        sentences=layer("sentences", Sentence),
        arcs=layer("arcs", DepArc),
        mentions=layer("mentions", EntityMention),
        chains=layer("chains", CorefChain),
        edus=layer("edus", EDU),
        rst=None if rst is None else parse_tree(rst),
    )


def dump_json(obj, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, ensure_ascii=False, indent=1, sort_keys=True)
        f.write("\n")


def load_json(path: str):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def write_document(doc: Document, path: str) -> None:
    dump_json(document_to_dict(doc), path)


def read_document(path: str) -> Document:
    return document_from_dict(load_json(path))


# -- token layer TSV ---------------------------------------------------------

def _cell(value) -> str:
    if value is None or value == "":
        return _ABSENT
    return str(value)


def _uncell(value: str) -> Optional[str]:
    return None if value == _ABSENT else value


def write_token_layer(doc: Document, f: TextIO) -> None:
    if doc.tokens is None:
        raise LayerFormatError(f"document {doc.id!r} has no token layer")
    layers = ["tokens"]
    if doc.sentences is not None:
        layers.append("sentences")
    if doc.arcs is not None:
        layers.append("arcs")
    f.write(f"# doc_id = {doc.id}\n")
    f.write(f"# genre = {doc.genre.value}\n")
    f.write(f"# source = {doc.source}\n")
    f.write(f"# text_length = {len(doc.raw_text)}\n")
    f.write(f"# layers = {','.join(layers)}\n")
    for m in doc.markup:
        attrs = " " + json.dumps(m.attrs, ensure_ascii=False, sort_keys=True) if m.attrs else ""
        f.write(f"# markup = {m.kind} {m.start} {m.end}{attrs}\n")

    sentences = doc.sentences or [Sentence(0, len(doc.tokens) - 1, "")]
    arcs = {a.dependent: a for a in doc.arcs} if doc.arcs is not None else {}
    for n, sent in enumerate(sentences):
        if n:
            f.write("\n")
        if doc.sentences is not None:
            f.write(f"# sent_type = {sent.stype}\n")
        for t in doc.tokens[sent.first_token:sent.last_token + 1]:
            arc = arcs.get(t.index)
            if arc is None:
                head = deprel = _ABSENT
            else:
                head = "0" if arc.head is None else str(arc.head - sent.first_token + 1)
                deprel = _cell(arc.deprel)
            cols = [
                str(t.index - sent.first_token + 1), t.form, _cell(t.lemma),
                _cell(t.upos), _cell(t.xpos), _cell(t.feats), head, deprel,
                str(t.start), str(t.end),
            ]
            f.write("\t".join(cols) + "\n")


def read_token_layer(f: TextIO, raw_text: Optional[str] = None) -> Document:
    """Parse a token layer file.

    Without ``raw_text`` the returned document carries a placeholder text of
    the recorded length in which only token forms are filled in.
    """
    meta: Dict[str, str] = {}
    markup: List[MarkupSpan] = []
    blocks: List[Tuple[Optional[str], List[List[str]]]] = []
    stype, rows = None, []

    def flush():
        nonlocal stype, rows
        if rows:
            blocks.append((stype, rows))
        stype, rows = None, []

    for lineno, line in enumerate(f, 1):
        line = line.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(" = ")
            if key == "markup":
                parts = value.split(" ", 3)
                attrs = json.loads(parts[3]) if len(parts) > 3 else {}
                markup.append(MarkupSpan(parts[0], int(parts[1]), int(parts[2]), attrs))
            elif key == "sent_type":
                stype = value
            else:
                meta[key] = value
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise LayerFormatError(f"line {lineno}: expected 10 columns, got {len(cols)}")
        rows.append(cols)
    flush()

    layers = set(meta.get("layers", "tokens").split(","))
    tokens, sentences, arcs = [], [], []
    for stype, rows in blocks:
        first = len(tokens)
        for cols in rows:
            idx = len(tokens)
            tokens.append(Token(idx, int(cols[8]), int(cols[9]), cols[1], _uncell(cols[2]),
                                _uncell(cols[4]), _uncell(cols[3]), _uncell(cols[5])))
            if "arcs" in layers:
                head = int(cols[6])
                arcs.append(DepArc(idx, None if head == 0 else first + head - 1, cols[7] if cols[7] != _ABSENT else ""))
        sentences.append(Sentence(first, len(tokens) - 1, stype or "other"))

    if raw_text is None:
        length = int(meta.get("text_length", max((t.end for t in tokens), default=0)))
        chars = [" "] * length
        for t in tokens:
            chars[t.start:t.end] = t.form
        raw_text = "".join(chars)
    return Document(
        id=meta.get("doc_id", ""),
        genre=meta.get("genre", "news"),
        source=meta.get("source", ""),
        raw_text=raw_text,
        markup=markup,
        tokens=tokens,
        sentences=sentences if "sentences" in layers else None,
        arcs=arcs if "arcs" in layers else None,
    )


def save_token_layer(doc: Document, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_token_layer(doc, f)


def load_token_layer(path: str, raw_text: Optional[str] = None) -> Document:
    with open(path, encoding="utf-8") as f:
        return read_token_layer(f, raw_text)


# -- entity / coref layer ------------------------------------------------------

def write_entity_layer(mentions: Iterable[EntityMention], f: TextIO) -> None:
    f.write("mention_id\tfirst\tlast\tetype\tchain\n")
    for m in mentions:
        f.write(f"{m.id}\t{m.first_token}\t{m.last_token}\t{m.etype}\t{_cell(m.chain)}\n")


def read_entity_layer(f: TextIO) -> Tuple[List[EntityMention], List[CorefChain]]:
    """Mentions plus chains rebuilt from the chain column (document order)."""
    mentions = []
    for lineno, line in enumerate(f, 1):
        line = line.rstrip("\n")
        if not line or line.startswith("mention_id\t") or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 5:
            raise LayerFormatError(f"line {lineno}: expected 5 columns, got {len(cols)}")
        mentions.append(EntityMention(cols[0], int(cols[1]), int(cols[2]), cols[3], _uncell(cols[4])))
    return mentions, chains_from_mentions(mentions)


def chains_from_mentions(mentions: Iterable[EntityMention]) -> List[CorefChain]:
    members: Dict[str, List[EntityMention]] = {}
    for m in mentions:
        if m.chain is not None:
            members.setdefault(m.chain, []).append(m)
    chains = []
    for cid, ms in members.items():
        ms.sort(key=lambda m: (m.first_token, -m.last_token))
        chains.append(CorefChain(cid, [m.id for m in ms]))
    chains.sort(key=lambda c: _first_pos(c, mentions))
    return chains


def _first_pos(chain: CorefChain, mentions) -> Tuple[int, int]:
    by_id = {m.id: m for m in mentions}
    m = by_id[chain.mentions[0]]
    return (m.first_token, -m.last_token)


def save_entity_layer(mentions, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_entity_layer(mentions, f)


def load_entity_layer(path: str):
    with open(path, encoding="utf-8") as f:
        return read_entity_layer(f)


# -- EDUs and RST ---------------------------------------------------------------

def save_edus(edus: Iterable[EDU], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for e in edus:
            f.write(f"{e.id}\t{e.first_token}\t{e.last_token}\n")


def load_edus(path: str) -> List[EDU]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                a, b, c = line.split("\t")
                out.append(EDU(int(a), int(b), int(c)))
    return out


def save_rst(tree, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_tree(tree) + "\n")


def load_rst(path: str):
    with open(path, encoding="utf-8") as f:
        return parse_tree(f.read())


def read_ordinals(path: str) -> List[int]:
    """One integer per line (boundary files)."""
    with open(path, encoding="utf-8") as f:
        return [int(line) for line in f if line.strip()]


# -- manifest ------------------------------------------------------------------

def read_manifest(path: str) -> List[dict]:
    """JSON-lines manifest; relative file paths are resolved against its directory."""
    base = os.path.dirname(os.path.abspath(path))
    entries = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            entry = json.loads(line)
            for key in ("id", "genre"):
                if key not in entry:
                    raise LayerFormatError(f"{path}:{lineno}: manifest entry lacks {key!r}")
            for key in ("path", "tokens", "thread", "state"):
                if key in entry and not os.path.isabs(entry[key]):
                    entry[key] = os.path.join(base, entry[key])
            entries.append(entry)
    return entries


def write_manifest(entries: Iterable[dict], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for entry in entries:
            f.write(json.dumps(entry, ensure_ascii=False, sort_keys=True) + "\n")
