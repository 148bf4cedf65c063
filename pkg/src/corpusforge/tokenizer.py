"""Rule-based tokenizer with ordered postprocessing rules.

Base segmentation is a single alternation regex (URLs, e-mail addresses,
acronyms, numbers, words, punctuation) run separately inside every stretch
between block markup edges, followed by Penn Treebank clitic splitting and
abbreviation merging. Domain patterns are handled afterwards by
:func:`apply_rules`.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Iterable, List, Optional, Sequence

from .corpus.model import BLOCK_KINDS, MarkupSpan, Token

log = logging.getLogger(__name__)

_TOKEN_RE = re.compile(
    r"""
    (?P<url>(?:https?://|www\.)[^\s<>"]*[^\s<>".,;:!?)\]'’])
  | (?P<email>[\w.+-]+@[\w-]+(?:\.[\w-]+)+)
  | (?P<acronym>(?:[^\W\d_]\.){2,})
  | (?P<number>(?:(?<!\w)\+)?\d+(?:[.,:/]\d+)*(?:[^\W\d_]+)?)
  | (?P<word>[^\W_](?:\w|['’-](?=[^\W_]))*)
  | (?P<ellipsis>\.{2,}|…)
  | (?P<dashes>-{2,})
  | (?P<other>\S)
    """,
    re.VERBOSE,
)

_NT_RE = re.compile(r"^(.+)(n['’]t)$", re.IGNORECASE)
_CLITIC_RE = re.compile(r"^(.+?)(['’](?:s|re|ve|ll|d|m))$", re.IGNORECASE)
_FUSED = {"cannot": 3, "gonna": 3, "wanna": 3, "gotta": 3}


def _load_lines(name: str) -> List[str]:
    text = resources.files("corpusforge.data").joinpath(name).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]


ABBREVIATIONS = frozenset(_load_lines("abbreviations.txt"))


def _split_word(start: int, form: str) -> List[tuple]:
    """Penn clitic split of one word token into (start, end) pieces."""
    cut = None
    lower = form.lower()
    if lower in _FUSED:
        cut = _FUSED[lower]
    else:
        m = _NT_RE.match(form)
        if m:
            cut = len(m.group(1))
        else:
            m = _CLITIC_RE.match(form)
            if m:
                cut = len(m.group(1))
    if cut is None or cut <= 0 or cut >= len(form):
        return [(start, start + len(form))]
    return [(start, start + cut), (start + cut, start + len(form))]


def _segment_bounds(text: str, markup: Sequence[MarkupSpan]) -> List[int]:
    cuts = {0, len(text)}
    for m in markup:
        if m.kind in BLOCK_KINDS:
            cuts.add(max(0, min(m.start, len(text))))
            cuts.add(max(0, min(m.end, len(text))))
    return sorted(cuts)


def tokenize(text: str, markup: Sequence[MarkupSpan] = (),
             abbreviations: Iterable[str] = ABBREVIATIONS) -> List[Token]:
    abbrevs = frozenset(abbreviations)
    spans: List[tuple] = []
    bounds = _segment_bounds(text, markup)
    for a, b in zip(bounds, bounds[1:]):
        seg: List[tuple] = []
        for m in _TOKEN_RE.finditer(text, a, b):
            kind = m.lastgroup
            s, e = m.span()
            if kind == "word":
                seg.extend(_split_word(s, m.group()))
            elif kind == "other" and m.group() == "." and seg and seg[-1][1] == s:
                ps, pe = seg[-1]
                prev = text[ps:pe]
                if (prev + ".").lower() in abbrevs or (len(prev) == 1 and prev.isupper()):
                    seg[-1] = (ps, e)
                else:
                    seg.append((s, e))
            else:
                seg.append((s, e))
        spans.extend(seg)
    return [Token(i, s, e, text[s:e]) for i, (s, e) in enumerate(spans)]


def reconstruct(text: str, tokens: Sequence[Token]) -> str:
    """Rebuild ``text`` from token forms and the whitespace between them.

    Raises ValueError if tokens overlap, are out of order, or any gap holds
    something other than whitespace.
    """
    parts = []
    pos = 0
    for t in tokens:
        gap = text[pos:t.start]
        if t.start < pos or (gap and not gap.isspace()):
            raise ValueError(f"token {t.index} at {t.start}: bad gap {gap!r}")
        parts.append(gap)
        parts.append(t.form)
        pos = t.end
    tail = text[pos:]
    if tail and not tail.isspace():
        raise ValueError(f"untokenized tail {tail[:20]!r}")
    parts.append(tail)
    return "".join(parts)


# -- postprocessing rules ------------------------------------------------------

ACTIONS = ("keep_together", "split_at", "retag_hint")


class RuleError(ValueError):
    def __init__(self, rule_id: str, message: str):
        self.rule_id = rule_id
        super().__init__(f"rule {rule_id!r}: {message}")


@dataclass(frozen=True)
class TokenRule:
    id: str
    pattern: str
    action: str
    priority: int
    genre: Optional[str] = None
    offsets: tuple = ()
    tag: Optional[str] = None
    regex: re.Pattern = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.action not in ACTIONS:
            raise RuleError(self.id, f"unknown action {self.action!r}")
        try:
            object.__setattr__(self, "regex", re.compile(self.pattern))
        except re.error as exc:
            raise RuleError(self.id, f"pattern does not compile: {exc}") from None
        object.__setattr__(self, "offsets", tuple(self.offsets))
        if self.action == "split_at" and not self.offsets:
            raise RuleError(self.id, "split_at needs offsets")
        if self.action == "retag_hint" and not self.tag:
            raise RuleError(self.id, "retag_hint needs a tag")

    def applies_to(self, genre: Optional[str]) -> bool:
        return self.genre is None or genre is None or self.genre == str(genre)


def load_rules(path: Optional[str] = None) -> List[TokenRule]:
    """Read a JSON rule file (the shipped default when ``path`` is None)."""
    if path is None:
        raw = resources.files("corpusforge.data").joinpath("token_rules.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as f:
            raw = f.read()
    rules = [TokenRule(**entry) for entry in json.loads(raw)]
    check_rules(rules)
    return sort_rules(rules)


def check_rules(rules: Sequence[TokenRule]) -> None:
    seen = {}
    for r in rules:
        if r.priority in seen:
            raise RuleError(r.id, f"priority {r.priority} already used by {seen[r.priority]!r}")
        seen[r.priority] = r.id


def sort_rules(rules: Iterable[TokenRule]) -> List[TokenRule]:
    """Highest priority first, the order :func:`apply_rules` runs them in."""
    return sorted(rules, key=lambda r: -r.priority)


def _reindex(tokens: List[Token]) -> List[Token]:
    return [t if t.index == i else replace(t, index=i) for i, t in enumerate(tokens)]


def _keep_together(tokens: List[Token], rule: TokenRule) -> List[Token]:
    out: List[Token] = []
    i = 0
    n = len(tokens)
    while i < n:
        # maximal run of abutting tokens
        j = i + 1
        while j < n and tokens[j].start == tokens[j - 1].end:
            j += 1
        run = tokens[i:j]
        if len(run) == 1:
            out.append(run[0])
            i = j
            continue
        base = run[0].start
        text = "".join(t.form for t in run)
        starts = {t.start - base: k for k, t in enumerate(run)}
        ends = {t.end - base: k for k, t in enumerate(run)}
        k = 0
        for m in rule.regex.finditer(text):
            a, b = m.span()
            if a == b or a not in starts or b not in ends:
                continue
            ka, kb = starts[a], ends[b]
            if ka < k or kb == ka:
                continue
            out.extend(run[k:ka])
            first, last = run[ka], run[kb]
            out.append(Token(0, first.start, last.end, text[a:b], None, first.xpos, None, None))
            k = kb + 1
        out.extend(run[k:])
        i = j
    return out


def _split_at(tokens: List[Token], rule: TokenRule) -> List[Token]:
    out: List[Token] = []
    for t in tokens:
        if not rule.regex.fullmatch(t.form):
            out.append(t)
            continue
        n = len(t.form)
        cuts = sorted({o if o >= 0 else n + o for o in rule.offsets})
        points = [0] + cuts + [n]
        for a, b in zip(points, points[1:]):
            if b <= a or a < 0 or b > n:
                raise RuleError(rule.id, f"split of {t.form!r} at {list(rule.offsets)} yields an empty token")
            out.append(Token(0, t.start + a, t.start + b, t.form[a:b]))
    return out


def apply_rules(tokens: Sequence[Token], rules: Sequence[TokenRule],
                genre: Optional[str] = None) -> List[Token]:
    """Run ``rules`` over ``tokens`` in priority order, highest first.

    Each rule sees the output of the previous one. ``keep_together`` merges
    a run of abutting tokens whose concatenation matches the pattern at token
    boundaries; ``split_at`` splits tokens that fully match at the given
    character offsets (negative offsets count from the end); ``retag_hint``
    sets ``xpos`` on fully matching tokens. Rules scoped to another genre are
    skipped.
    """
    check_rules(rules)
    out = list(tokens)
    for rule in sort_rules(rules):
        if not rule.applies_to(genre):
            continue
        if rule.action == "keep_together":
            out = _keep_together(out, rule)
        elif rule.action == "split_at":
            out = _split_at(out, rule)
        else:
            out = [replace(t, xpos=rule.tag) if rule.regex.fullmatch(t.form) else t for t in out]
        out = _reindex(out)
    return _reindex(out)
