from .metrics import OUTLIER_SPEEDUP, compute_metrics, speedup_of
from .run import (
    GenerationAttempt,
    PipelineConfig,
    PipelineResult,
    rank_performance,
    run_pipeline,
)
from .splice import splice_scop

__all__ = [
    "GenerationAttempt", "OUTLIER_SPEEDUP", "PipelineConfig", "PipelineResult",
    "compute_metrics", "rank_performance", "run_pipeline", "speedup_of",
    "splice_scop",
]
