"""Plain-text block markup used for local ingestion.

One block per blank-line-separated chunk::

    = Heading                 heading, level 1 (``==`` level 2, ...)
    * item                    list item; consecutive items form one list
    @name: text               speaker turn (forum posts)
    ! caption text            caption
    [figure] description      figure
    anything else             paragraph

Inside a block ``**x**`` marks bold and ``__x__`` italic. Blocks are joined
with a blank line in the raw text; list items with a single newline.
"""

from __future__ import annotations

import re
from typing import List, Tuple

from .model import Document, MarkupSpan

_INLINE_RE = re.compile(r"\*\*(.+?)\*\*|__(.+?)__", re.S)
_SPEAKER_RE = re.compile(r"^@([^:\s]+):\s*(.*)$", re.S)
_HEADING_RE = re.compile(r"^(=+)\s+(.*)$", re.S)


def _inline(text: str, offset: int, spans: List[MarkupSpan]) -> str:
    out = []
    pos = 0
    cursor = offset
    for m in _INLINE_RE.finditer(text):
        out.append(text[pos:m.start()])
        cursor += m.start() - pos
        inner = m.group(1) if m.group(1) is not None else m.group(2)
        kind = "bold" if m.group(1) is not None else "italic"
        spans.append(MarkupSpan(kind, cursor, cursor + len(inner)))
        out.append(inner)
        cursor += len(inner)
        pos = m.end()
    out.append(text[pos:])
    return "".join(out)


def _chunks(source: str) -> List[List[str]]:
    chunks, cur = [], []
    for line in source.splitlines():
        if line.strip():
            cur.append(line.rstrip())
        elif cur:
            chunks.append(cur)
            cur = []
    if cur:
        chunks.append(cur)
    return chunks


def parse_blocks(source: str) -> Tuple[str, List[MarkupSpan]]:
    """Convert block markup into raw text plus markup spans."""
    parts: List[str] = []
    spans: List[MarkupSpan] = []
    length = 0

    def emit(text: str) -> Tuple[int, int]:
        nonlocal length
        if parts:
            parts.append("\n\n")
            length += 2
        start = length
        inline: List[MarkupSpan] = []
        plain = _inline(text, start, inline)
        parts.append(plain)
        length += len(plain)
        spans.extend(inline)
        return start, length

    for lines in _chunks(source):
        first = lines[0]
        if all(line.startswith("* ") for line in lines):
            start = None
            for k, line in enumerate(lines):
                if k == 0:
                    s, e = emit(line[2:].strip())
                    start = s
                else:
                    parts.append("\n")
                    length += 1
                    s = length
                    inline: List[MarkupSpan] = []
                    plain = _inline(line[2:].strip(), s, inline)
                    parts.append(plain)
                    length += len(plain)
                    spans.extend(inline)
                    e = length
                spans.append(MarkupSpan("item", s, e))
            spans.append(MarkupSpan("list", start, length))
            continue
        text = "\n".join(lines)
        m = _HEADING_RE.match(text)
        if m:
            s, e = emit(m.group(2).strip())
            spans.append(MarkupSpan("heading", s, e, {"level": str(len(m.group(1)))}))
            continue
        m = _SPEAKER_RE.match(text)
        if m:
            s, e = emit(m.group(2).strip())
            spans.append(MarkupSpan("speaker", s, e, {"who": m.group(1)}))
            spans.append(MarkupSpan("paragraph", s, e))
            continue
        if first.startswith("! "):
            s, e = emit(text[2:].strip())
            spans.append(MarkupSpan("caption", s, e))
            continue
        if first.startswith("[figure]"):
            s, e = emit(text[len("[figure]"):].strip())
            spans.append(MarkupSpan("figure", s, e))
            continue
        s, e = emit(text)
        spans.append(MarkupSpan("paragraph", s, e))

    spans = [sp for sp in spans if sp.end > sp.start]
    spans.sort(key=lambda sp: (sp.start, -sp.end, sp.kind))
    return "".join(parts), spans


def load_blocks(path: str, doc_id: str, genre: str, source: str = "") -> Document:
    with open(path, encoding="utf-8") as f:
        text, markup = parse_blocks(f.read())
    return Document(doc_id, genre, source, text, markup)
