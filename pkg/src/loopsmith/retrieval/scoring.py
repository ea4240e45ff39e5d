"""The loop-aware score: BM25 base plus feature reward/penalty.

With target statement count NS_T, example count NS_E and N_F feature types:

  mismatch      S_M = |NS_T - NS_E| * sum_j WP_j
  reward        R[i][j] = |items_T[i][j] ∩ items_E[i][j]| * WR_j
  penalty       P[i][j] = max(0, NF_E[i][j] - |intersection|) * WP_j
  features      S_F = sum_{i < min(NS_T, NS_E), j < N_F} (R - P) / NF_T[i][j]
  weighted      S_W = (S_F - S_M) / NS_T
  overall       LA  = S_B + S_W

Statements pair positionally in schedule order. When NF_T[i][j] = 0 the
(R - P)/NF_T term is defined as -P (the reward is necessarily zero and the
surplus penalty still applies, un-normalized). The penalty follows the
surplus-only reading: only example features unmatched by the target count.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..features import N_FEATURE_TYPES, FeatureSet


@dataclass(frozen=True)
class RetrievalConfig:
    wr: tuple = (1.0,) * N_FEATURE_TYPES
    wp: tuple = (1.0,) * N_FEATURE_TYPES
    top_n: int = 10
    demos: int = 3
    bm25_k1: float = 1.2
    bm25_b: float = 0.75

    def __post_init__(self):
        if len(self.wr) != N_FEATURE_TYPES or len(self.wp) != N_FEATURE_TYPES:
            raise ValueError(f"need {N_FEATURE_TYPES} weights per kind")
        if any(w < 0 for w in self.wr + self.wp):
            raise ValueError("weights must be nonnegative")
        if not self.top_n >= self.demos >= 1:
            raise ValueError("need top_n >= demos >= 1")


@dataclass
class ScoreBreakdown:
    s_b: float
    s_m: float
    s_f: float
    s_w: float
    la: float
    per_statement: list = field(default_factory=list)  # dicts: i, j, reward, penalty, nf_t


def multiset_intersection_size(a, b) -> int:
    shared = Counter(a) & Counter(b)
    return sum(shared.values())


def statement_mismatch(target: FeatureSet, example: FeatureSet, cfg: RetrievalConfig) -> float:
    return abs(target.ns - example.ns) * sum(cfg.wp)


def feature_reward(target_items, example_items, j: int, cfg: RetrievalConfig) -> float:
    return multiset_intersection_size(target_items, example_items) * cfg.wr[j]


def feature_penalty(target_items, example_items, j: int, cfg: RetrievalConfig) -> float:
    surplus = len(example_items) - multiset_intersection_size(target_items, example_items)
    return max(0, surplus) * cfg.wp[j]


def weighted_score(target: FeatureSet, example: FeatureSet, cfg: RetrievalConfig) -> ScoreBreakdown:
    """S_M, S_F, S_W portion of the score; s_b left at 0 for the caller."""
    s_m = statement_mismatch(target, example, cfg)
    s_f = 0.0
    detail = []
    for i in range(min(target.ns, example.ns)):
        t_stmt = target.statements[i]
        e_stmt = example.statements[i]
        for j in range(N_FEATURE_TYPES):
            reward = feature_reward(t_stmt.items[j], e_stmt.items[j], j, cfg)
            penalty = feature_penalty(t_stmt.items[j], e_stmt.items[j], j, cfg)
            nf_t = len(t_stmt.items[j])
            term = (reward - penalty) / nf_t if nf_t else -penalty
            s_f += term
            detail.append(
                {"i": i, "j": j, "reward": reward, "penalty": penalty, "nf_t": nf_t}
            )
    if target.ns == 0:
        raise ValueError("target has no statements")
    s_w = (s_f - s_m) / target.ns
    return ScoreBreakdown(s_b=0.0, s_m=s_m, s_f=s_f, s_w=s_w, la=s_w, per_statement=detail)


def la_score(target: FeatureSet, target_tokens, record, bm25, cfg: RetrievalConfig) -> ScoreBreakdown:
    """Full LAScore against one indexed record."""
    breakdown = weighted_score(target, record.features, cfg)
    breakdown.s_b = bm25.score(target_tokens, record.id)
    breakdown.la = breakdown.s_b + breakdown.s_w
    return breakdown
