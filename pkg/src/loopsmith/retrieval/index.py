"""Build, persist and query the retrieval index (BM25 + feature store)."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..errors import EmptyCorpus
from ..rng import Rng
from ..sidecar import content_hash, read_doc, write_doc
from .bm25 import Bm25Index
from .records import DatasetRecord
from .scoring import RetrievalConfig, ScoreBreakdown, la_score
from .tokens import tokenize


@dataclass
class Index:
    records: dict  # id -> DatasetRecord
    bm25: Bm25Index
    corpus_hash: str = ""

    def __len__(self):
        return len(self.records)


@dataclass
class RetrievalResult:
    hits: list  # (DatasetRecord, ScoreBreakdown), best first
    corpus_smaller_than_n: bool = False


def build_index(records, cfg: RetrievalConfig = RetrievalConfig(), validate: bool = True) -> Index:
    records = list(records)
    if not records:
        raise EmptyCorpus("no dataset records")
    by_id = {}
    for rec in records:
        if validate:
            rec.validate()
        if rec.id in by_id:
            raise ValueError(f"duplicate record id {rec.id}")
        by_id[rec.id] = rec
    docs = {rec.id: tokenize(rec.example_region) for rec in records}
    corpus = content_hash("".join(by_id[i].example_source for i in sorted(by_id)))
    return Index(
        records=by_id,
        bm25=Bm25Index(docs, k1=cfg.bm25_k1, b=cfg.bm25_b),
        corpus_hash=corpus,
    )


def retrieve_top_n(target_features, target_tokens, index: Index,
                   cfg: RetrievalConfig = RetrievalConfig()) -> RetrievalResult:
    if not index.records:
        raise EmptyCorpus("empty index")
    scored = []
    for rec_id in sorted(index.records):
        rec = index.records[rec_id]
        breakdown = la_score(target_features, target_tokens, rec, index.bm25, cfg)
        scored.append((rec, breakdown))
    scored.sort(key=lambda pair: (-pair[1].la, pair[0].id))
    small = len(scored) < cfg.top_n
    return RetrievalResult(hits=scored[: cfg.top_n], corpus_smaller_than_n=small)


def pick_demonstrations(result: RetrievalResult, cfg: RetrievalConfig, rng: Rng) -> list:
    """Uniform sample without replacement from the top-N, deterministic per rng."""
    pool = [rec for rec, _ in result.hits]
    take = min(cfg.demos, len(pool))
    return rng.sample(pool, take)


# --- persistence: one document directory, rebuilt when sidecars change ---

def save_index(index: Index, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_doc(
        out / "index.json",
        "index",
        {
            "corpus_hash": index.corpus_hash,
            "records": [rec.to_payload() for _, rec in sorted(index.records.items())],
        },
    )


def load_index(index_dir, cfg: RetrievalConfig = RetrievalConfig()) -> Index:
    doc = read_doc(Path(index_dir) / "index.json", "index")
    records = [DatasetRecord.from_payload(p) for p in doc["records"]]
    index = build_index(records, cfg, validate=False)
    index.corpus_hash = doc["corpus_hash"]
    return index


def index_is_stale(index: Index, records) -> bool:
    by_id = {rec.id: rec for rec in records}
    fresh = content_hash("".join(by_id[i].example_source for i in sorted(by_id)))
    return fresh != index.corpus_hash
