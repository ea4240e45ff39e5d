from .bm25 import Bm25Index
from .index import (
    Index,
    RetrievalResult,
    build_index,
    index_is_stale,
    load_index,
    pick_demonstrations,
    retrieve_top_n,
    save_index,
)
from .records import DatasetRecord
from .scoring import (
    RetrievalConfig,
    ScoreBreakdown,
    feature_penalty,
    feature_reward,
    la_score,
    multiset_intersection_size,
    statement_mismatch,
    weighted_score,
)
from .target import TargetInfo, prepare_target
from .tokens import token_counts, tokenize

__all__ = [
    "Bm25Index", "DatasetRecord", "Index", "RetrievalConfig",
    "RetrievalResult", "ScoreBreakdown", "TargetInfo",
    "build_index", "feature_penalty", "feature_reward", "index_is_stale",
    "la_score", "load_index", "multiset_intersection_size",
    "pick_demonstrations", "prepare_target", "retrieve_top_n", "save_index",
    "statement_mismatch", "token_counts", "tokenize", "weighted_score",
]
