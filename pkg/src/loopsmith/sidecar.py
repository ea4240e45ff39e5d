"""One self-describing structured-text (JSON) document format for sidecars,
indexes, reports and error documents; every document carries the schema tag."""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

from .features import FeatureSet, StatementFeatures
from .scop.deps import Dependence

SCHEMA = "loopsmith/1"


def dumps_doc(kind: str, payload: dict) -> str:
    doc = {"schema": SCHEMA, "kind": kind}
    doc.update(payload)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads_doc(text: str, expect_kind: str | None = None) -> dict:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unknown schema {doc.get('schema')!r}")
    if expect_kind is not None and doc.get("kind") != expect_kind:
        raise ValueError(f"expected kind {expect_kind!r}, got {doc.get('kind')!r}")
    return doc


def write_doc(path, kind: str, payload: dict) -> None:
    Path(path).write_text(dumps_doc(kind, payload))


def read_doc(path, expect_kind: str | None = None) -> dict:
    return loads_doc(Path(path).read_text(), expect_kind)


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


_DEFINE = re.compile(r"^\s*#\s*define\s+([A-Za-z_]\w*)\s+(-?\d+)\s*$", re.M)


def extract_defines(program: str) -> dict:
    """Integer macro definitions; these bind a program's global parameters."""
    return {name: int(value) for name, value in _DEFINE.findall(program)}


# --- domain object <-> JSON payloads ---

def features_to_json(features: FeatureSet) -> dict:
    return {
        "statements": [
            {
                "schedule_const": list(s.schedule_const),
                "schedule_iters": list(s.schedule_iters),
                "items": [list(group) for group in s.items],
            }
            for s in features.statements
        ]
    }


def features_from_json(doc: dict) -> FeatureSet:
    return FeatureSet(
        statements=tuple(
            StatementFeatures(
                schedule_const=tuple(s["schedule_const"]),
                schedule_iters=tuple(s["schedule_iters"]),
                items=tuple(tuple(group) for group in s["items"]),
            )
            for s in doc["statements"]
        )
    )


def dependence_to_json(dep: Dependence) -> dict:
    return {
        "type": dep.dep_type,
        "source": dep.source_stmt,
        "target": dep.target_stmt,
        "array": dep.array_name,
        "distance": list(dep.distance),
        "carried": dep.carried,
        "source_ref": list(dep.source_ref),
        "target_ref": list(dep.target_ref),
    }


def dependence_from_json(doc: dict) -> Dependence:
    return Dependence(
        dep_type=doc["type"],
        source_stmt=doc["source"],
        target_stmt=doc["target"],
        array_name=doc["array"],
        distance=tuple(doc["distance"]),
        carried=doc["carried"],
        source_ref=tuple(doc["source_ref"]),
        target_ref=tuple(doc["target_ref"]),
    )
