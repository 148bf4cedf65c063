"""Markup-constrained sentence splitting and rule-based sentence types."""

from __future__ import annotations

from bisect import bisect_left
from typing import Iterable, List, Optional, Sequence, Set

from .corpus.model import BLOCK_KINDS, DepArc, MarkupSpan, Sentence, Token
from .tokenizer import ABBREVIATIONS


class AlignmentError(ValueError):
    pass


FINAL_PUNCT = {".", "!", "?", "...", "…", "?!", "!?"}
CLOSERS = {'"', "'", "”", "’", ")", "]", "}", "»"}


def forced_boundaries(tokens: Sequence[Token], markup: Sequence[MarkupSpan],
                      kinds: Iterable[str] = BLOCK_KINDS) -> Set[int]:
    """Token ordinals that must start a sentence because a block edge precedes them."""
    kinds = set(kinds)
    starts = [t.start for t in tokens]
    out = set()
    for m in markup:
        if m.kind not in kinds:
            continue
        for edge in (m.start, m.end):
            i = bisect_left(starts, edge)
            if 0 < i < len(tokens):
                out.add(i)
    return out


def _is_final(form: str, tag: Optional[str], abbrevs) -> bool:
    if form.lower() in abbrevs:
        return False
    if tag == ".":
        return True
    return form in FINAL_PUNCT or (len(form) > 1 and set(form) <= set(".!?"))


def split_sentences(tokens: Sequence[Token], tags: Optional[Sequence[Optional[str]]] = None,
                    markup: Sequence[MarkupSpan] = (), external: Optional[Iterable[int]] = None,
                    abbreviations: Iterable[str] = ABBREVIATIONS) -> List[Sentence]:
    """Split ``tokens`` into sentences.

    Boundaries are forced at block markup edges and placed after sentence-final
    punctuation (plus any closing quotes or brackets) unless the punctuation
    belongs to a known abbreviation. ``external`` adds sentence starts from an
    outside splitter; forced boundaries are never removed. Returned sentences
    carry ``stype="other"`` until classified.
    """
    if tags is None:
        tags = [t.xpos for t in tokens]
    if len(tags) != len(tokens):
        raise AlignmentError(f"{len(tags)} tags for {len(tokens)} tokens")
    n = len(tokens)
    if n == 0:
        return []
    abbrevs = frozenset(abbreviations)
    starts = {0} | forced_boundaries(tokens, markup)
    if external is not None:
        for i in external:
            if not 0 <= i < n:
                raise AlignmentError(f"external boundary {i} outside 0..{n - 1}")
            starts.add(i)

    i = 0
    while i < n:
        t = tokens[i]
        prev = tokens[i - 1].form if i else ""
        if _is_final(t.form, tags[i], abbrevs) and not (t.form == "." and (prev + ".").lower() in abbrevs):
            j = i + 1
            while j < n and tokens[j].form in CLOSERS and tokens[j].start == tokens[j - 1].end:
                j += 1
            if j < n:
                starts.add(j)
            i = j
            continue
        i += 1

    ordered = sorted(starts)
    return [Sentence(a, b - 1) for a, b in zip(ordered, ordered[1:] + [n])]


# -- sentence types -------------------------------------------------------------

WH_WORDS = {"what", "where", "when", "who", "whom", "whose", "which", "why", "how"}
WH_TAGS = {"WDT", "WP", "WP$", "WRB"}
FINITE_TAGS = {"VBD", "VBP", "VBZ", "MD"}
VERB_TAGS = FINITE_TAGS | {"VB", "VBG", "VBN"}
PUNCT_TAGS = {".", ",", ":", "``", "''", "-LRB-", "-RRB-", "HYPH", "NFP", "$", "#"}
SUBJ_RELS = {"nsubj", "nsubj:pass", "csubj", "csubj:pass", "expl"}


def _is_punct(form: str, tag: Optional[str]) -> bool:
    if tag is not None:
        return tag in PUNCT_TAGS
    return not any(ch.isalnum() for ch in form)


def classify_sentence_type(forms: Sequence[str], tags: Sequence[Optional[str]],
                           arcs: Optional[Sequence[DepArc]] = None) -> str:
    """Deterministic sentence type cascade.

    ``arcs`` use sentence-local ordinals (dependent/head index into
    ``forms``; ``head=None`` marks the root).
    """
    if len(forms) != len(tags):
        raise AlignmentError(f"{len(tags)} tags for {len(forms)} tokens")
    content = [(f, t) for f, t in zip(forms, tags) if not _is_punct(f, t)]
    if not content:
        return "other"
    final_q = forms[-1].endswith("?") or (len(forms) > 1 and forms[-2] == "?" and forms[-1] in CLOSERS)
    first_form, first_tag = content[0]
    if final_q and (first_form.lower() in WH_WORDS or first_tag in WH_TAGS):
        return "wh"
    if final_q:
        return "q"
    if any(t is None for _, t in content):
        return "other"

    has_subject = False
    if arcs:
        root = next((a for a in arcs if a.head is None), None)
        if root is not None:
            kids = [a for a in arcs if a.head == root.dependent]
            rels = {a.deprel for a in kids}
            has_subject = bool(rels & SUBJ_RELS)
            root_tag = tags[root.dependent]
            marks = [forms[a.dependent].lower() for a in kids if a.deprel == "mark"]
            if root_tag == "VB" and "to" in marks:
                return "inf"
            if marks and root_tag in VERB_TAGS:
                return "sub"
            if root_tag == "VBG" and not has_subject:
                return "frag"

    if first_tag == "VB" and not has_subject:
        return "imp"
    if not any(t in FINITE_TAGS for _, t in content):
        if all(t == "UH" for _, t in content):
            return "intj"
        return "frag"
    return "decl"
