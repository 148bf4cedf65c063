from __future__ import annotations

from bisect import bisect_left
from typing import List, Sequence, Tuple

from .model import (
    BLOCK_KINDS,
    ENTITY_TYPES,
    MARKUP_KINDS,
    SENTENCE_TYPES,
    Document,
    MarkupSpan,
    Token,
)
from .rst import check_tree
from .validation import ValidationReport, Violation


def validate_document(doc: Document) -> ValidationReport:
    """Collect every invariant violation in ``doc``.

    The report is empty for a valid document. Checks run layer by layer in a
    fixed order, so the same document always yields the same report. A layer
    whose prerequisite layer is missing is reported once under
    ``layer.prereq`` and not checked further.
    """
    out: List[Violation] = []
    text_len = len(doc.raw_text)

    _check_markup(doc.markup, text_len, out)

    prereqs = (
        ("sentences", "tokens"), ("arcs", "sentences"), ("mentions", "tokens"),
        ("chains", "mentions"), ("edus", "tokens"), ("rst", "edus"),
    )
    skip = set()
    for layer, needed in prereqs:
        if getattr(doc, layer) is not None and (getattr(doc, needed) is None or needed in skip):
            out.append(Violation(layer, "-", "layer.prereq", f"{layer} present without {needed}"))
            skip.add(layer)

    tokens = doc.tokens
    if tokens is not None:
        _check_tokens(doc, tokens, out)
    if doc.sentences is not None and "sentences" not in skip:
        _check_sentences(doc, out)
    if doc.arcs is not None and "arcs" not in skip:
        _check_arcs(doc, out)
    if doc.mentions is not None and "mentions" not in skip:
        _check_mentions(doc, out)
    if doc.chains is not None and "chains" not in skip:
        _check_chains(doc, out)
    if doc.edus is not None and "edus" not in skip:
        _check_edus(doc, out)
    if doc.rst is not None and "rst" not in skip:
        out.extend(check_tree(doc.rst, doc.edus))
    return out


def _check_markup(markup: Sequence[MarkupSpan], text_len: int, out: List[Violation]) -> None:
    for i, m in enumerate(markup):
        loc = f"#{i} {m.kind} {m.start}-{m.end}"
        if m.kind not in MARKUP_KINDS:
            out.append(Violation("markup", loc, "markup.kind", f"unknown kind {m.kind!r}"))
        if not (0 <= m.start < m.end <= text_len):
            out.append(Violation("markup", loc, "markup.bounds"))
    by_kind = {}
    for i, m in enumerate(markup):
        by_kind.setdefault(m.kind, []).append((i, m))
    for kind in sorted(by_kind):
        spans = by_kind[kind]
        for a_pos, (i, a) in enumerate(spans):
            for j, b in spans[a_pos + 1:]:
                if a.start < b.start < a.end < b.end or b.start < a.start < b.end < a.end:
                    out.append(Violation("markup", f"#{i}/#{j} {kind}", "markup.crossing"))


def _block_token_ranges(markup: Sequence[MarkupSpan], tokens: Sequence[Token]) -> List[Tuple[MarkupSpan, int, int]]:
    """(span, first, last) token ordinals fully inside each block span."""
    starts = [t.start for t in tokens]
    ranges = []
    for m in markup:
        if m.kind not in BLOCK_KINDS:
            continue
        i = bisect_left(starts, m.start)
        j = i
        while j < len(tokens) and tokens[j].end <= m.end:
            j += 1
        if j > i:
            ranges.append((m, i, j - 1))
    return ranges


def _check_tokens(doc: Document, tokens: Sequence[Token], out: List[Violation]) -> None:
    text = doc.raw_text
    prev_end = 0
    in_bounds = []
    for pos, t in enumerate(tokens):
        loc = f"token {pos}"
        if t.index != pos:
            out.append(Violation("tokens", loc, "token.index", f"index {t.index}"))
        if not (0 <= t.start < t.end <= len(text)):
            out.append(Violation("tokens", loc, "token.bounds", f"span {t.start}-{t.end}"))
            continue
        in_bounds.append(t)
        if text[t.start:t.end] != t.form:
            out.append(Violation("tokens", loc, "token.form", f"{t.form!r} != {text[t.start:t.end]!r}"))
        if t.start < prev_end:
            out.append(Violation("tokens", loc, "token.overlap"))
        prev_end = max(prev_end, t.end)
    for m in doc.markup:
        if m.kind not in BLOCK_KINDS:
            continue
        # out-of-bounds tokens were already reported above
        for t in in_bounds:
            if t.start < m.start < t.end or t.start < m.end < t.end:
                out.append(Violation("tokens", f"token {t.index}", "token.markup_bound",
                                     f"crosses {m.kind} {m.start}-{m.end}"))


def _check_partition(spans, n_tokens: int, layer: str, rule: str, out: List[Violation]) -> bool:
    expected = 0
    ok = True
    for pos, (first, last) in enumerate(spans):
        if first != expected or last < first:
            out.append(Violation(layer, f"#{pos} {first}-{last}", rule,
                                 f"expected to start at token {expected}"))
            ok = False
        expected = last + 1
    if expected != n_tokens:
        out.append(Violation(layer, f"end {expected}", rule, f"tokens {expected}-{n_tokens - 1} uncovered"))
        ok = False
    return ok


def _check_sentences(doc: Document, out: List[Violation]) -> None:
    sents = doc.sentences
    _check_partition([(s.first_token, s.last_token) for s in sents], len(doc.tokens),
                     "sentences", "sentence.partition", out)
    for pos, s in enumerate(sents):
        if s.stype not in SENTENCE_TYPES:
            out.append(Violation("sentences", f"sentence {pos}", "sentence.stype", repr(s.stype)))
    for m, i, j in _block_token_ranges(doc.markup, doc.tokens):
        for pos, s in enumerate(sents):
            a, b = s.first_token, s.last_token
            if a <= j and i <= b and not (i <= a and b <= j):
                out.append(Violation("sentences", f"sentence {pos}", "sentence.markup_bound",
                                     f"crosses {m.kind} {m.start}-{m.end}"))


def _check_arcs(doc: Document, out: List[Violation]) -> None:
    n = len(doc.tokens)
    arcs = doc.arcs
    deps = sorted(a.dependent for a in arcs)
    if deps != list(range(n)):
        out.append(Violation("arcs", "-", "arc.count", f"{len(arcs)} arcs for {n} tokens"))
        return
    sent_of = [0] * n
    for si, s in enumerate(doc.sentences):
        for k in range(max(s.first_token, 0), min(s.last_token + 1, n)):
            sent_of[k] = si
    roots = [0] * len(doc.sentences)
    for a in sorted(arcs, key=lambda a: a.dependent):
        loc = f"token {a.dependent}"
        if a.head is None:
            roots[sent_of[a.dependent]] += 1
            continue
        if not 0 <= a.head < n or a.head == a.dependent:
            out.append(Violation("arcs", loc, "arc.head_range", f"head {a.head}"))
        elif sent_of[a.head] != sent_of[a.dependent]:
            out.append(Violation("arcs", loc, "arc.head_sentence", f"head {a.head}"))
    for si, count in enumerate(roots):
        if count != 1:
            out.append(Violation("arcs", f"sentence {si}", "arc.root", f"{count} root arcs"))


def _check_mentions(doc: Document, out: List[Violation]) -> None:
    n = len(doc.tokens)
    seen = set()
    chain_ids = {c.id for c in doc.chains} if doc.chains is not None else None
    good = []
    for m in doc.mentions:
        loc = f"mention {m.id}"
        if m.id in seen:
            out.append(Violation("mentions", loc, "mention.duplicate_id"))
        seen.add(m.id)
        if not (0 <= m.first_token <= m.last_token < n):
            out.append(Violation("mentions", loc, "mention.range", f"{m.first_token}-{m.last_token}"))
        else:
            good.append(m)
        if m.etype not in ENTITY_TYPES:
            out.append(Violation("mentions", loc, "mention.etype", repr(m.etype)))
        if m.chain is not None and chain_ids is not None and m.chain not in chain_ids:
            out.append(Violation("mentions", loc, "mention.chain", f"unknown chain {m.chain!r}"))
    good.sort(key=lambda m: (m.first_token, -m.last_token, m.id))
    for x, a in enumerate(good):
        for b in good[x + 1:]:
            if b.first_token > a.last_token:
                break
            if a.first_token < b.first_token <= a.last_token < b.last_token:
                out.append(Violation("mentions", f"mention {a.id}/{b.id}", "mention.crossing"))


def _check_chains(doc: Document, out: List[Violation]) -> None:
    by_id = {m.id: m for m in doc.mentions}
    owner = {}
    for c in doc.chains:
        loc = f"chain {c.id}"
        if not c.mentions:
            out.append(Violation("chains", loc, "chain.empty"))
            continue
        for mid in c.mentions:
            if mid not in by_id:
                out.append(Violation("chains", loc, "chain.unknown_mention", repr(mid)))
                continue
            if mid in owner:
                out.append(Violation("chains", loc, "chain.membership", f"{mid} also in {owner[mid]}"))
            owner[mid] = c.id
            if by_id[mid].chain is not None and by_id[mid].chain != c.id:
                out.append(Violation("chains", loc, "chain.membership", f"{mid} points to {by_id[mid].chain}"))
        keys = [(by_id[m].first_token, -by_id[m].last_token) for m in c.mentions if m in by_id]
        if keys != sorted(keys):
            out.append(Violation("chains", loc, "chain.order"))


def _check_edus(doc: Document, out: List[Violation]) -> None:
    edus = doc.edus
    _check_partition([(e.first_token, e.last_token) for e in edus], len(doc.tokens),
                     "edus", "edu.partition", out)
    for pos, e in enumerate(edus):
        if e.id != pos + 1:
            out.append(Violation("edus", f"edu {pos}", "edu.id", f"id {e.id}"))
    if doc.sentences is None:
        return
    for e in edus:
        inside = [s for s in doc.sentences
                  if s.first_token <= e.first_token and e.last_token <= s.last_token]
        if len(inside) != 1:
            out.append(Violation("edus", f"edu {e.id}", "edu.sentence_bound",
                                 f"tokens {e.first_token}-{e.last_token}"))


def is_valid(doc: Document) -> bool:
    return not validate_document(doc)

