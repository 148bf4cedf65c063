from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, Iterable, List, Optional, Set

REASONS = (
    "ok", "no_fiction_keyword", "archaic_form", "broken_hyphenation",
    "stoplist_hit", "link_density", "email_density", "too_short", "boilerplate_only",
)


@dataclass
class FilterVerdict:
    accepted: bool
    reason: str
    counts: Dict[str, float] = field(default_factory=dict)
    detail: str = ""

    def __post_init__(self):
        if self.reason not in REASONS:
            raise ValueError(f"unknown verdict reason {self.reason!r}")
        if self.accepted != (self.reason == "ok"):
            raise ValueError("accepted must hold exactly when reason is 'ok'")

    @classmethod
    def ok(cls, **counts) -> "FilterVerdict":
        return cls(True, "ok", counts)

    @classmethod
    def reject(cls, reason: str, detail: str = "", **counts) -> "FilterVerdict":
        return cls(False, reason, counts, detail)

    def to_record(self, doc_id: str) -> dict:
        return {"doc_id": doc_id, "verdict": "accept" if self.accepted else "reject",
                "reason": self.reason, "counts": self.counts, "detail": self.detail}


@dataclass
class ThreadNode:
    id: str
    author: str
    body: str
    children: List["ThreadNode"] = field(default_factory=list)

    def walk(self):
        """Pre-order traversal; raises on cycles."""
        seen = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                raise ValueError(f"thread contains a cycle at post {node.id!r}")
            seen.add(id(node))
            yield node
            stack.extend(reversed(node.children))

    @classmethod
    def from_dict(cls, data: dict) -> "ThreadNode":
        return cls(data["id"], data.get("author", ""), data["body"],
                   [cls.from_dict(c) for c in data.get("children", [])])

    def to_dict(self) -> dict:
        return {"id": self.id, "author": self.author, "body": self.body,
                "children": [c.to_dict() for c in self.children]}


def load_stoplist(path: Optional[str] = None) -> Set[str]:
    """One lowercase form per line; ``#`` starts a comment line."""
    if path is None:
        text = resources.files("corpusforge.data").joinpath("archaic_stoplist.txt").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    return {line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")}


ARCHAIC_FORMS = frozenset(load_stoplist())

_WORD_RE = re.compile(r"[^\W\d_]+(?:['’][^\W\d_]+)*-?")
_BROKEN_HYPHEN_RE = re.compile(r"[^\W\d_]{2,}-[ \t]*\n[ \t]*[a-z]")


def screen_fiction(text: str, metadata_keywords: Iterable[str],
                   stoplist: Iterable[str] = ARCHAIC_FORMS) -> FilterVerdict:
    keywords = {k.lower() for k in metadata_keywords}
    if not any("fiction" in k for k in keywords):
        return FilterVerdict.reject("no_fiction_keyword", ",".join(sorted(keywords)))
    stop = set(stoplist)
    for m in _WORD_RE.finditer(text):
        word = m.group().lower()
        if word in stop:
            if word in ARCHAIC_FORMS:
                return FilterVerdict.reject("archaic_form", word)
            if word.endswith("-"):
                return FilterVerdict.reject("broken_hyphenation", word)
            return FilterVerdict.reject("stoplist_hit", word)
        if word.endswith("-") and word[:-1] in stop:
            return FilterVerdict.reject("stoplist_hit", word)
    m = _BROKEN_HYPHEN_RE.search(text)
    if m:
        return FilterVerdict.reject("broken_hyphenation", m.group().split("-")[0] + "-")
    return FilterVerdict.ok()


_URL_RE = re.compile(r"^[(\[<\"']*(?:https?://|www\.)\S+", re.I)
_EMAIL_RE = re.compile(r"[\w.+-]+@[\w-]+(?:\.[\w-]+)+")


def link_email_counts(text: str) -> Dict[str, int]:
    tokens = text.split()
    urls = sum(1 for t in tokens if _URL_RE.match(t) or "://" in t)
    emails = sum(1 for t in tokens if _EMAIL_RE.search(t) and "://" not in t)
    return {"tokens": len(tokens), "urls": urls, "emails": emails}


def screen_forum(thread: ThreadNode, max_link_ratio: float = 0.10,
                 max_email_count: int = 5) -> FilterVerdict:
    if not 0 < max_link_ratio <= 1:
        raise ValueError("max_link_ratio must be in (0, 1]")
    if max_email_count < 0:
        raise ValueError("max_email_count must be >= 0")
    text = "\n".join(node.body for node in thread.walk())
    c = link_email_counts(text)
    ratio = c["urls"] / c["tokens"] if c["tokens"] else 0.0
    counts = dict(c, link_ratio=ratio)
    if ratio > max_link_ratio:
        return FilterVerdict.reject("link_density", f"{c['urls']}/{c['tokens']}", **counts)
    if c["emails"] > max_email_count:
        return FilterVerdict.reject("email_density", str(c["emails"]), **counts)
    return FilterVerdict.ok(**counts)
