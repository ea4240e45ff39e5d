"""Okapi BM25 over an in-memory inverted index.

idf uses the ln(1 + (N - df + 0.5)/(df + 0.5)) form so every matched term
contributes a nonnegative amount; query terms count with multiplicity.
"""

from __future__ import annotations

import math
from collections import Counter

from ..errors import UnknownDoc


class Bm25Index:
    def __init__(self, docs: dict, k1: float = 1.2, b: float = 0.75):
        """docs: id -> token list (or Counter)."""
        self.k1 = k1
        self.b = b
        self.doc_tf = {
            doc_id: (toks if isinstance(toks, Counter) else Counter(toks))
            for doc_id, toks in docs.items()
        }
        self.doc_len = {d: sum(tf.values()) for d, tf in self.doc_tf.items()}
        self.n_docs = len(self.doc_tf)
        self.avgdl = (
            sum(self.doc_len.values()) / self.n_docs if self.n_docs else 0.0
        )
        self.postings: dict = {}
        for doc_id, tf in self.doc_tf.items():
            for term in tf:
                self.postings.setdefault(term, set()).add(doc_id)

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        if df == 0:
            return 0.0
        return math.log(1.0 + (self.n_docs - df + 0.5) / (df + 0.5))

    def score(self, query_tokens, doc_id) -> float:
        if doc_id not in self.doc_tf:
            raise UnknownDoc(doc_id)
        tf = self.doc_tf[doc_id]
        dl = self.doc_len[doc_id]
        norm = self.k1 * (1.0 - self.b + self.b * dl / self.avgdl) if self.avgdl else self.k1
        query = query_tokens if isinstance(query_tokens, Counter) else Counter(query_tokens)
        total = 0.0
        for term, qf in query.items():
            f = tf.get(term, 0)
            if f == 0:
                continue
            total += qf * self.idf(term) * (f * (self.k1 + 1.0)) / (f + norm)
        return total
