"""Prepare a target program for retrieval: region, features, tokens."""

from __future__ import annotations

from dataclasses import dataclass

from ..features import FeatureSet, extract_features
from ..scop.deps import compute_dependences
from ..scop.markers import extract_scop_region
from ..scop.model import Scop
from ..scop.parser import parse_scop
from ..sidecar import extract_defines
from .tokens import tokenize


@dataclass
class TargetInfo:
    program: str
    region: str
    scop: Scop
    features: FeatureSet
    tokens: list
    params: dict
    deps_best_effort: bool = False


def prepare_target(program: str, params: dict | None = None) -> TargetInfo:
    """Parse the marked region; global parameters default to the program's
    integer #define macros."""
    _, region, _ = extract_scop_region(program)
    params = dict(params) if params else extract_defines(program)
    scop = parse_scop(region, params)
    deps = compute_dependences(scop, collapse=True)
    features = extract_features(scop, deps.dependences)
    return TargetInfo(
        program=program,
        region=region,
        scop=scop,
        features=features,
        tokens=tokenize(region),
        params=params,
        deps_best_effort=deps.best_effort,
    )
