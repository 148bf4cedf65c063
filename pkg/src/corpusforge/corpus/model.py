"""Multilayer document model.

Every annotation layer is stored as offsets into ``Document.raw_text`` (char
offsets, i.e. Unicode code points) or as token ordinals. Layers are plain
dataclasses so that equality is structural, which the stand-off round trip
relies on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional


class Genre(str, enum.Enum):
    ACADEMIC = "academic"
    BIOGRAPHY = "biography"
    FICTION = "fiction"
    FORUM = "forum"
    HOWTO = "howto"
    INTERVIEW = "interview"
    NEWS = "news"
    TRAVEL = "travel"

    def __str__(self) -> str:
        return self.value


GENRES = tuple(g.value for g in Genre)

MARKUP_KINDS = (
    "heading", "paragraph", "figure", "caption", "list", "item",
    "speaker", "bold", "italic",
)
# block kinds that bound tokens and sentences
BLOCK_KINDS = ("heading", "paragraph", "caption", "item", "speaker")

SENTENCE_TYPES = ("decl", "imp", "wh", "q", "frag", "sub", "inf", "intj", "other")

ENTITY_TYPES = (
    "person", "place", "organization", "object", "event", "time",
    "abstract", "animal", "plant", "substance", "quantity",
)

NUCLEARITY = ("nucleus", "satellite", "root")


@dataclass
class MarkupSpan:
    kind: str
    start: int
    end: int
    attrs: Dict[str, str] = field(default_factory=dict)

    def contains(self, start: int, end: int) -> bool:
        return self.start <= start and end <= self.end


@dataclass
class Token:
    index: int
    start: int
    end: int
    form: str
    lemma: Optional[str] = None
    xpos: Optional[str] = None
    upos: Optional[str] = None
    feats: Optional[str] = None


@dataclass
class Sentence:
    first_token: int
    last_token: int
    stype: str = "other"

    def __len__(self) -> int:
        return self.last_token - self.first_token + 1


@dataclass
class DepArc:
    dependent: int
    head: Optional[int]  # None marks ROOT
    deprel: str


@dataclass
class EntityMention:
    id: str
    first_token: int
    last_token: int
    etype: str
    chain: Optional[str] = None

    @property
    def span(self):
        return (self.first_token, self.last_token)


@dataclass
class CorefChain:
    id: str
    mentions: List[str]


@dataclass
class EDU:
    id: int
    first_token: int
    last_token: int


@dataclass
class RSTNode:
    first_edu: int
    last_edu: int
    nuclearity: str
    relation: str = ""
    children: List["RSTNode"] = field(default_factory=list)

    @property
    def span(self):
        return (self.first_edu, self.last_edu)

    def is_leaf(self) -> bool:
        return not self.children

    def iter_nodes(self):
        """Pre-order traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> List["RSTNode"]:
        return [n for n in self.iter_nodes() if n.is_leaf()]


@dataclass
class Document:
    id: str
    genre: Genre
    source: str
    raw_text: str
    markup: List[MarkupSpan] = field(default_factory=list)
    tokens: Optional[List[Token]] = None
    sentences: Optional[List[Sentence]] = None
    arcs: Optional[List[DepArc]] = None
    mentions: Optional[List[EntityMention]] = None
    chains: Optional[List[CorefChain]] = None
    edus: Optional[List[EDU]] = None
    rst: Optional[RSTNode] = None

    def __post_init__(self):
        if not isinstance(self.genre, Genre):
            self.genre = Genre(self.genre)

    def blocks(self, kinds=BLOCK_KINDS) -> List[MarkupSpan]:
        return sorted((m for m in self.markup if m.kind in kinds),
                      key=lambda m: (m.start, -m.end))

    def token_text(self, first: int, last: int) -> str:
        toks = self.tokens or []
        return " ".join(t.form for t in toks[first:last + 1])
