"""POS tag stacking: folds, stack matrix, meta-learner, and a voting baseline."""

from .folds import FoldPlan, make_folds
from .gbdt import Booster, GBDTParams, Tree
from .matrix import SHAPE_FEATURES, StackMatrix, StackMatrixError, assemble_stack_matrix, shape_features
from .predictions import (BasePredictions, PredictionFormatError, load_predictions, merge_predictions,
                          read_predictions, save_predictions, write_predictions)
from .stack import PTB_TO_UPOS, SchemaError, StackModel, apply_ensemble, fit_meta, majority_vote, to_upos

__all__ = [
    "FoldPlan", "make_folds", "Booster", "GBDTParams", "Tree", "SHAPE_FEATURES", "StackMatrix",
    "StackMatrixError", "assemble_stack_matrix", "shape_features", "BasePredictions",
    "PredictionFormatError", "load_predictions", "merge_predictions", "read_predictions",
    "save_predictions", "write_predictions", "PTB_TO_UPOS", "SchemaError", "StackModel",
    "apply_ensemble", "fit_meta", "majority_vote", "to_upos",
]
