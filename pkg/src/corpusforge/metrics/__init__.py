"""Evaluation metrics with micro-averaging over documents."""

from .assignment import max_weight_assignment
from .base import PRF, Accuracy, AttachmentScores, CorefScores, RSTScores
from .coref import CorefInputError, b_cubed, ceaf_e, chains_as_spans, muc, phi4, score_coref
from .report import LAYERS, MissingLayerError, score_corpus
from .scorers import (SegmentationMismatchError, score_attachment, score_nested_entities, score_rst,
                      score_tagging, score_tokenization)

__all__ = [
    "max_weight_assignment", "PRF", "Accuracy", "AttachmentScores", "CorefScores", "RSTScores",
    "CorefInputError", "b_cubed", "ceaf_e", "chains_as_spans", "muc", "phi4", "score_coref",
    "LAYERS", "MissingLayerError", "score_corpus", "SegmentationMismatchError", "score_attachment",
    "score_nested_entities", "score_rst", "score_tagging", "score_tokenization",
]
