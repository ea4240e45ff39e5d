from .deps import (
    RAW,
    WAR,
    WAW,
    Dependence,
    DependenceAnalysis,
    collapse_records,
    compute_dependences,
    scan_dependences,
)
from .markers import extract_scop_region, replace_scop_region
from .model import (
    READ,
    WRITE,
    ArrayAccess,
    LoopInfo,
    ScheduleVector,
    Scop,
    Statement,
)
from .parser import parse_scop
from .render import render_region, render_statement

__all__ = [
    "RAW", "WAR", "WAW", "READ", "WRITE",
    "ArrayAccess", "Dependence", "DependenceAnalysis", "LoopInfo",
    "ScheduleVector", "Scop", "Statement",
    "collapse_records", "compute_dependences", "scan_dependences",
    "extract_scop_region", "replace_scop_region", "parse_scop",
    "render_region", "render_statement",
]
