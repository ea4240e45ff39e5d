from .bounds import DEFAULT_SIZES, declared_extents, draw_iterator_bounds, solve_bounds
from .core import MAX_RETRIES, SynthRecord, build_scop, synthesize
from .emit import array_extent_exprs, default_fill_rules, emit_program, written_arrays
from .params import LoopParameters, sample_parameters
from .schedules import generate_schedules
from .arrays import (
    DEFAULT_NAMES,
    PendingAccess,
    PendingStatement,
    assign_arrays,
    check_circular_dependence,
    resolve_accesses,
)

__all__ = [
    "DEFAULT_NAMES", "DEFAULT_SIZES", "MAX_RETRIES",
    "LoopParameters", "PendingAccess", "PendingStatement", "SynthRecord",
    "array_extent_exprs", "assign_arrays", "build_scop",
    "check_circular_dependence", "declared_extents", "default_fill_rules",
    "draw_iterator_bounds", "emit_program", "generate_schedules",
    "resolve_accesses", "sample_parameters", "solve_bounds", "synthesize",
    "written_arrays",
]
