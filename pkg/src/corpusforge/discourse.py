"""EDU segmentation constraints, EDU features, and RST tree checks."""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, List, Mapping, Optional, Sequence, TextIO

from .corpus.model import BLOCK_KINDS, EDU, GENRES, SENTENCE_TYPES, MarkupSpan, RSTNode, Sentence, Token
from .corpus.rst import RELATIONS, check_tree
from .corpus.validation import ValidationReport
from .sentences import AlignmentError, forced_boundaries

# markup whose extent must consist of whole EDUs
ISOLATED_KINDS = ("heading", "caption", "speaker")


def constrain_segmentation(candidates: Iterable[int], sentences: Sequence[Sentence],
                           markup: Sequence[MarkupSpan], tokens: Sequence[Token]) -> List[EDU]:
    """Add the boundaries an external segmenter may have missed.

    ``candidates`` are token ordinals that start an EDU. Sentence starts and
    the edges of headings, captions, and speaker turns are added; nothing is
    ever removed, so the result refines the candidate segmentation.
    """
    n = len(tokens)
    bounds = {0} if n else set()
    for b in candidates:
        if not 0 <= b < n:
            raise ValueError(f"candidate boundary {b} outside 0..{n - 1}")
        bounds.add(b)
    for s in sentences:
        if not 0 <= s.first_token < n:
            raise ValueError(f"sentence start {s.first_token} outside 0..{n - 1}")
        bounds.add(s.first_token)
    bounds |= forced_boundaries(tokens, markup, ISOLATED_KINDS)
    ordered = sorted(bounds)
    return [EDU(k + 1, a, b - 1) for k, (a, b) in enumerate(zip(ordered, ordered[1:] + [n]))]


def edu_boundaries(edus: Sequence[EDU]) -> List[int]:
    return [e.first_token for e in edus]


# -- features -------------------------------------------------------------------

LENGTH_BUCKETS = ((3, "1-3"), (7, "4-7"), (15, "8-15"), (None, "16+"))


def _length_bucket(n: int) -> str:
    for bound, name in LENGTH_BUCKETS:
        if bound is None or n <= bound:
            return name
    return LENGTH_BUCKETS[-1][1]


@dataclass
class FeatureTable:
    columns: List[str]
    rows: List[List] = field(default_factory=list)

    def column(self, name: str) -> List:
        j = self.columns.index(name)
        return [r[j] for r in self.rows]

    def write_tsv(self, f: TextIO) -> None:
        f.write("\t".join(self.columns) + "\n")
        for r in self.rows:
            f.write("\t".join(_fmt(v) for v in r) + "\n")

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            self.write_tsv(f)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def featurize_edus(edus: Sequence[EDU], markup: Sequence[MarkupSpan], genre: str,
                   sentences: Sequence[Sentence], tokens: Sequence[Token],
                   external_columns: Optional[Mapping[str, Sequence]] = None) -> FeatureTable:
    """One row per EDU of structural, genre, sentence-type, and external features."""
    external_columns = dict(external_columns or {})
    for name, values in external_columns.items():
        if len(values) != len(edus):
            raise AlignmentError(f"external column {name!r} has {len(values)} values for {len(edus)} EDUs")
    genre = getattr(genre, "value", genre)
    if genre not in GENRES:
        raise ValueError(f"unknown genre {genre!r}")

    starts = [t.start for t in tokens]
    blocks = [m for m in markup if m.kind in BLOCK_KINDS]
    block_first, block_last = set(), set()
    for m in blocks:
        a = bisect_left(starts, m.start)
        b = bisect_left(starts, m.end) - 1
        if a <= b:
            block_first.add(a)
            block_last.add(b)

    sent_of = {}
    for s in sentences:
        for i in range(s.first_token, s.last_token + 1):
            sent_of[i] = s.stype

    columns = ["edu", "is_heading", "is_caption", "is_turn", "starts_paragraph",
               "ends_paragraph", "in_list_item"]
    columns += [f"genre_{g}" for g in GENRES]
    columns += [f"stype_{t}" for t in SENTENCE_TYPES]
    columns += [f"len_{name}" for _, name in LENGTH_BUCKETS]
    columns += ["decile"] + list(external_columns)

    table = FeatureTable(columns)
    n_tok = len(tokens)
    for k, e in enumerate(edus):
        lo, hi = tokens[e.first_token].start, tokens[e.last_token].end

        def inside(kind):
            return int(any(m.kind == kind and m.start < hi and lo < m.end for m in markup))

        stype = sent_of.get(e.first_token, "other")
        size = e.last_token - e.first_token + 1
        row = [e.id, inside("heading"), inside("caption"), inside("speaker"),
               int(e.first_token == 0 or e.first_token in block_first),
               int(e.last_token == n_tok - 1 or e.last_token in block_last),
               inside("item")]
        row += [int(g == genre) for g in GENRES]
        row += [int(t == stype) for t in SENTENCE_TYPES]
        row += [int(name == _length_bucket(size)) for _, name in LENGTH_BUCKETS]
        row.append(min(9, (10 * k) // len(edus)))
        row += [external_columns[name][k] for name in external_columns]
        table.rows.append(row)
    return table


def read_boundaries(f: TextIO) -> List[int]:
    return [int(line) for line in f if line.strip()]


def validate_rst_tree(tree: RSTNode, edus: Sequence[EDU],
                      relations: Mapping[str, str] = RELATIONS) -> ValidationReport:
    return check_tree(tree, edus, relations)


__all__ = [
    "ISOLATED_KINDS", "constrain_segmentation", "edu_boundaries", "FeatureTable",
    "featurize_edus", "read_boundaries", "validate_rst_tree",
]
