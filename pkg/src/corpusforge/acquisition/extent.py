"""Boilerplate removal and document extent sampling."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, List, Optional, Sequence, Tuple

from ..corpus.model import Document, Genre, MarkupSpan
from .screening import ThreadNode

UNIT_KINDS = ("heading", "paragraph", "list", "figure", "caption")

BOILERPLATE_HEADINGS = frozenset({
    "references", "bibliography", "notes", "footnotes", "external links",
    "see also", "further reading", "sources", "citations", "works cited",
    "contents", "table of contents", "literature", "related articles",
})

BOILERPLATE_PATTERNS = (
    r"^this article is a stub",
    r"^retrieved from\s",
    r"^from wikipedia, the free encyclopedia",
    r"^this page was last edited",
    r"^jump to (?:navigation|search)",
    r"^(?:share|print|e-?mail) this (?:article|story|page)",
    r"^\[?edit\]?$",
)


class Rejection(Exception):
    reason = "rejected"

    def __init__(self, message: str = ""):
        super().__init__(message or self.reason)


class TooShortError(Rejection):
    reason = "too_short"


class NoAnchorError(Rejection):
    reason = "no_anchor"


class BoilerplateOnlyError(Rejection):
    reason = "boilerplate_only"


class NoRootError(Rejection):
    reason = "no_root"


class UnreachableSizeError(Rejection):
    reason = "unreachable_size"


@dataclass
class Snippet:
    doc_id: str
    start_char: int
    end_char: int
    word_count: int
    anchor: Optional[str] = None
    provenance: List[str] = field(default_factory=list)
    # thread samples carry their own text and markup
    posts: Optional[List[str]] = None
    text: Optional[str] = None
    markup: Optional[List[MarkupSpan]] = None


# -- word counting ---------------------------------------------------------------

def count_words(text: str, markup: Sequence[MarkupSpan] = (), start: int = 0,
                end: Optional[int] = None) -> int:
    """Whitespace-delimited words in ``text[start:end]``, figure content excluded."""
    end = len(text) if end is None else end
    chunk = list(text[start:end])
    for m in markup:
        if m.kind == "figure":
            a, b = max(m.start, start), min(m.end, end)
            for k in range(a - start, b - start):
                chunk[k] = " "
    return len("".join(chunk).split())


def _units(doc: Document) -> List[MarkupSpan]:
    cand = sorted((m for m in doc.markup if m.kind in UNIT_KINDS), key=lambda m: (m.start, -m.end))
    out: List[MarkupSpan] = []
    for m in cand:
        if out and m.start < out[-1].end:
            continue  # nested inside a previous unit
        out.append(m)
    if not out and doc.raw_text.strip():
        s = len(doc.raw_text) - len(doc.raw_text.lstrip())
        e = len(doc.raw_text.rstrip())
        out.append(MarkupSpan("paragraph", s, e))
    return out


def _level(m: MarkupSpan) -> int:
    try:
        return int(m.attrs.get("level", 1))
    except ValueError:
        return 1


# -- boilerplate -------------------------------------------------------------------

def _remap(segments: List[Tuple[int, int, int]], start: int, end: int) -> Optional[Tuple[int, int]]:
    """Map an old [start, end) range onto kept segments (old_start, old_end, new_start)."""
    new_start = new_end = None
    for a, b, n in segments:
        lo, hi = max(a, start), min(b, end)
        if lo >= hi:
            continue
        if new_start is None:
            new_start = n + lo - a
        new_end = n + hi - a
    if new_start is None:
        return None
    return new_start, new_end


def strip_boilerplate(doc: Document, headings: Iterable[str] = BOILERPLATE_HEADINGS,
                      patterns: Iterable[str] = BOILERPLATE_PATTERNS) -> Document:
    """Remove reference sections, tables of contents, empty sections and
    boilerplate paragraphs; surviving markup is re-based onto the new text.

    Raises :class:`BoilerplateOnlyError` when nothing but headings (or
    nothing at all) survives.
    """
    if doc.tokens is not None:
        raise ValueError("strip_boilerplate runs before tokenization; document already has tokens")
    heads = {h.lower() for h in headings}
    regexes = [re.compile(p, re.I) for p in patterns]
    units = _units(doc)
    text = doc.raw_text
    removed = set()

    for i, u in enumerate(units):
        if u.kind != "heading":
            continue
        title = re.sub(r"\s+", " ", text[u.start:u.end]).strip().strip(":").lower()
        if title in heads:
            removed.add(i)
            j = i + 1
            while j < len(units) and not (units[j].kind == "heading" and _level(units[j]) <= _level(u)):
                removed.add(j)
                j += 1
    for i, u in enumerate(units):
        if u.kind in ("paragraph", "caption"):
            body = text[u.start:u.end].strip()
            if any(r.search(body) for r in regexes):
                removed.add(i)

    changed = True
    while changed:
        changed = False
        kept = [i for i in range(len(units)) if i not in removed]
        for pos, i in enumerate(kept):
            u = units[i]
            if u.kind != "heading":
                continue
            nxt = units[kept[pos + 1]] if pos + 1 < len(kept) else None
            if nxt is None or (nxt.kind == "heading" and _level(nxt) <= _level(u)):
                removed.add(i)
                changed = True
                break

    kept = [units[i] for i in range(len(units)) if i not in removed]
    if not any(u.kind != "heading" and count_words(text, doc.markup, u.start, u.end) for u in kept):
        raise BoilerplateOnlyError(f"document {doc.id!r} has no content after boilerplate removal")
    if not removed:
        return doc

    parts: List[str] = []
    segments: List[Tuple[int, int, int]] = []
    length = 0
    prev_index = None
    for i, u in enumerate(units):
        if i in removed:
            continue
        if parts:
            sep = text[units[prev_index].end:u.start] if prev_index == i - 1 else "\n\n"
            if prev_index == i - 1:
                segments.append((units[prev_index].end, u.start, length))
            parts.append(sep)
            length += len(sep)
        segments.append((u.start, u.end, length))
        parts.append(text[u.start:u.end])
        length += u.end - u.start
        prev_index = i

    markup = []
    for m in doc.markup:
        mapped = _remap(segments, m.start, m.end)
        if mapped is not None and mapped[1] > mapped[0]:
            markup.append(MarkupSpan(m.kind, mapped[0], mapped[1], dict(m.attrs)))
    return replace(doc, raw_text="".join(parts), markup=markup)


# -- snippet extraction ------------------------------------------------------------

def _slice_from(units: List[MarkupSpan], words: List[int], i: int, cap_words: int) -> Tuple[int, List[str]]:
    """Index one past the last unit of the slice anchored at ``i``."""
    total = 0
    j = i
    trace = []
    while j < len(units):
        total += words[j]
        j += 1
        if total > cap_words:
            trace.append(f"cap_exceeded_at_unit={j - 1}")
            break
    while j > i and units[j - 1].kind == "heading":
        j -= 1
        trace.append(f"drop_trailing_heading={j}")
    return j, trace


def extract_snippet(doc: Document, rng_seed: int, min_words: int = 400, cap_words: int = 1000,
                    anchor_policy: str = "heading") -> Snippet:
    """Select a contiguous, heading-anchored slice of ``doc``.

    Documents of at most ``cap_words`` words are taken whole. Longer ones
    start at a seeded-random main heading (the shallowest heading level
    present) and take whole units until the running count exceeds
    ``cap_words``; the unit that crosses the cap is kept, trailing headings
    are dropped. Fiction anchors directly followed by another heading are
    not eligible. ``anchor_policy="top"`` anchors at the first unit instead.
    """
    if anchor_policy not in ("heading", "top"):
        raise ValueError(f"unknown anchor policy {anchor_policy!r}")
    text = doc.raw_text
    units = _units(doc)
    words = [count_words(text, doc.markup, u.start, u.end) for u in units]
    total = sum(words)
    if total < min_words:
        raise TooShortError(f"document {doc.id!r} has {total} words (< {min_words})")

    if total <= cap_words:
        j = len(units)
        trace = ["whole_body"]
        while j > 0 and units[j - 1].kind == "heading":
            j -= 1
            trace.append(f"drop_trailing_heading={j}")
        count = sum(words[:j])
        if count < min_words:
            raise TooShortError(f"document {doc.id!r} has {count} words without trailing headings")
        return Snippet(doc.id, units[0].start, units[j - 1].end, count, None, trace)

    if anchor_policy == "top":
        candidates = [0]
    else:
        headings = [i for i, u in enumerate(units) if u.kind == "heading"]
        main = min((_level(units[i]) for i in headings), default=None)
        candidates = [i for i in headings if _level(units[i]) == main]
        if doc.genre == Genre.FICTION:
            candidates = [i for i in candidates
                          if not (i + 1 < len(units) and units[i + 1].kind == "heading")]

    eligible = []
    for i in candidates:
        j, trace = _slice_from(units, words, i, cap_words)
        count = sum(words[i:j])
        if j > i and count >= min_words:
            eligible.append((i, j, count, trace))
    if not eligible:
        raise NoAnchorError(f"document {doc.id!r}: no eligible anchor among {len(candidates)} candidates")

    rng = random.Random(rng_seed)
    i, j, count, trace = eligible[rng.randrange(len(eligible))]
    anchor = text[units[i].start:units[i].end] if units[i].kind == "heading" else None
    provenance = [f"anchor_unit={i}", f"eligible_anchors={len(eligible)}", f"units={j - i}"] + trace
    return Snippet(doc.id, units[i].start, units[j - 1].end, count, anchor, provenance)


def apply_snippet(doc: Document, snippet: Snippet) -> Document:
    """The sub-document covered by ``snippet`` with markup clipped and re-based."""
    a, b = snippet.start_char, snippet.end_char
    markup = []
    for m in doc.markup:
        s, e = max(m.start, a), min(m.end, b)
        if s < e:
            markup.append(MarkupSpan(m.kind, s - a, e - a, dict(m.attrs)))
    return Document(doc.id, doc.genre, doc.source, doc.raw_text[a:b], markup)


# -- forum threads -------------------------------------------------------------------

def _post_words(node: ThreadNode) -> int:
    return len(node.body.split())


def sample_thread(root_candidates: Sequence[ThreadNode], rng_seed: int,
                  min_total: int = 500, max_total: int = 1000,
                  root_min: int = 25, root_max: int = 500) -> Snippet:
    """Grow a forum document from a random root post.

    Responses reachable from the selected posts are drawn uniformly; one
    that would push the total past ``max_total`` is skipped for good.
    Growth stops once the total exceeds ``min_total``. Roots are tried in a
    seeded random order until one reaches the target size.
    """
    if not root_candidates:
        raise NoRootError("no candidate threads")
    roots = [r for r in root_candidates if root_min <= _post_words(r) <= root_max]
    if not roots:
        raise NoRootError(f"no root post with {root_min}-{root_max} words")
    rng = random.Random(rng_seed)
    order = list(range(len(roots)))
    rng.shuffle(order)

    for attempt, r in enumerate(order):
        root = roots[r]
        chosen = {id(root)}
        total = _post_words(root)
        frontier = list(root.children)
        trace = [f"root={root.id}", f"attempt={attempt}"]
        while total <= min_total and frontier:
            node = frontier.pop(rng.randrange(len(frontier)))
            w = _post_words(node)
            if total + w > max_total:
                trace.append(f"skip={node.id}")
                continue
            chosen.add(id(node))
            total += w
            frontier.extend(node.children)
        if min_total < total <= max_total:
            return _thread_snippet(root, chosen, total, trace)
    raise UnreachableSizeError(f"no root among {len(roots)} reaches more than {min_total} words")


def _thread_snippet(root: ThreadNode, chosen, total: int, trace: List[str]) -> Snippet:
    parts: List[str] = []
    markup: List[MarkupSpan] = []
    posts = []
    length = 0
    for node in root.walk():
        if id(node) not in chosen:
            continue
        if parts:
            parts.append("\n\n")
            length += 2
        body = node.body.strip()
        markup.append(MarkupSpan("speaker", length, length + len(body), {"who": node.author, "post": node.id}))
        markup.append(MarkupSpan("paragraph", length, length + len(body)))
        parts.append(body)
        length += len(body)
        posts.append(node.id)
    text = "".join(parts)
    return Snippet(root.id, 0, len(text), total, None, trace, posts, text, markup)


def thread_document(snippet: Snippet, doc_id: str, source: str = "") -> Document:
    if snippet.text is None:
        raise ValueError("snippet does not come from a thread sample")
    return Document(doc_id, Genre.FORUM, source, snippet.text, list(snippet.markup))


def thread_from_document(doc: Document) -> ThreadNode:
    """Flat pseudo-thread over the speaker turns of a document (for screening)."""
    turns = [m for m in doc.markup if m.kind == "speaker"]
    if not turns:
        return ThreadNode(doc.id, "", doc.raw_text)
    nodes = [ThreadNode(m.attrs.get("post", f"{doc.id}.{k}"), m.attrs.get("who", ""),
                        doc.raw_text[m.start:m.end]) for k, m in enumerate(turns)]
    root = nodes[0]
    root.children = nodes[1:]
    return root
