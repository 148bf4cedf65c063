from .model import (
    BLOCK_KINDS,
    EDU,
    ENTITY_TYPES,
    GENRES,
    MARKUP_KINDS,
    SENTENCE_TYPES,
    CorefChain,
    DepArc,
    Document,
    EntityMention,
    Genre,
    MarkupSpan,
    RSTNode,
    Sentence,
    Token,
)
from .rst import RELATIONS, RSTFormatError, check_tree, format_tree, parse_tree
from .standoff import (
    CorruptBundleError,
    HashMismatchError,
    StandoffBundle,
    rehydrate,
    text_digest,
    to_standoff,
)
from .validate import validate_document
from .validation import InvalidDocumentError, ValidationReport, Violation

__all__ = [
    "BLOCK_KINDS", "EDU", "ENTITY_TYPES", "GENRES", "MARKUP_KINDS", "SENTENCE_TYPES",
    "CorefChain", "DepArc", "Document", "EntityMention", "Genre", "MarkupSpan",
    "RSTNode", "Sentence", "Token", "RELATIONS", "RSTFormatError", "check_tree",
    "format_tree", "parse_tree", "CorruptBundleError", "HashMismatchError",
    "StandoffBundle", "rehydrate", "text_digest", "to_standoff",
    "validate_document", "InvalidDocumentError", "ValidationReport", "Violation",
]
