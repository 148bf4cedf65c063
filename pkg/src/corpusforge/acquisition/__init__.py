from .extent import (
    BoilerplateOnlyError,
    NoAnchorError,
    NoRootError,
    Rejection,
    Snippet,
    TooShortError,
    UnreachableSizeError,
    apply_snippet,
    count_words,
    extract_snippet,
    sample_thread,
    strip_boilerplate,
    thread_document,
    thread_from_document,
)
from .screening import (
    ARCHAIC_FORMS,
    REASONS,
    FilterVerdict,
    ThreadNode,
    link_email_counts,
    load_stoplist,
    screen_fiction,
    screen_forum,
)

__all__ = [
    "BoilerplateOnlyError", "NoAnchorError", "NoRootError", "Rejection", "Snippet",
    "TooShortError", "UnreachableSizeError", "apply_snippet", "count_words",
    "extract_snippet", "sample_thread", "strip_boilerplate", "thread_document",
    "thread_from_document", "ARCHAIC_FORMS", "REASONS", "FilterVerdict", "ThreadNode",
    "link_email_counts", "load_stoplist", "screen_fiction", "screen_forum",
]
