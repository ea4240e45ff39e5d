"""Dataset records: one synthesized example plus its optimized version and
precomputed retrieval features, round-tripped through sidecar documents."""

from __future__ import annotations

from dataclasses import dataclass

from ..features import FeatureSet, extract_features
from ..scop.deps import compute_dependences
from ..scop.markers import extract_scop_region
from ..scop.parser import parse_scop
from ..sidecar import (
    content_hash,
    dependence_from_json,
    dependence_to_json,
    extract_defines,
    features_from_json,
    features_to_json,
)


@dataclass
class DatasetRecord:
    id: str
    example_source: str
    optimized_source: str
    features: FeatureSet
    dependence_summary: list
    params: dict | None = None  # synthesis knobs, absent for external corpora

    @property
    def example_region(self) -> str:
        return extract_scop_region(self.example_source)[1]

    @property
    def optimized_region(self) -> str:
        try:
            return extract_scop_region(self.optimized_source)[1]
        except Exception:
            return self.optimized_source

    def to_payload(self) -> dict:
        return {
            "id": self.id,
            "example_source": self.example_source,
            "optimized_source": self.optimized_source,
            "features": features_to_json(self.features),
            "dependences": [dependence_to_json(d) for d in self.dependence_summary],
            "params": self.params,
            "content_hash": content_hash(self.example_source),
        }

    @staticmethod
    def from_payload(doc: dict) -> "DatasetRecord":
        return DatasetRecord(
            id=doc["id"],
            example_source=doc["example_source"],
            optimized_source=doc["optimized_source"],
            features=features_from_json(doc["features"]),
            dependence_summary=[dependence_from_json(d) for d in doc["dependences"]],
            params=doc.get("params"),
        )

    def validate(self) -> None:
        """Ingest check: stored features must equal a fresh extraction."""
        params = extract_defines(self.example_source)
        region = self.example_region
        scop = parse_scop(region, params)
        deps = compute_dependences(scop, collapse=True)
        fresh = extract_features(scop, deps.dependences)
        if fresh != self.features:
            raise ValueError(f"record {self.id}: stored features are stale")
