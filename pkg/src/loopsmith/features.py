"""Loop-feature extraction for retrieval scoring.

Three feature types per statement: the schedule signature (constant
dimensions plus depth, position-based so iterator names never matter),
write index matrices, and read index matrices. Index matrices are split
into iterator-coefficient columns and the constant column; accesses whose
dependences are all loop-independent keep only the constant column, any
loop-carried dependence keeps both, and all-zero columns are removed so
matrices of different dimensionality can still match.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scop.model import Scop

N_FEATURE_TYPES = 3


@dataclass(frozen=True)
class StatementFeatures:
    schedule_const: tuple
    schedule_iters: tuple
    items: tuple  # per feature type: sorted tuple of canonical item strings

    @property
    def nf(self) -> tuple:
        return tuple(len(group) for group in self.items)


@dataclass(frozen=True)
class FeatureSet:
    statements: tuple

    @property
    def ns(self) -> int:
        return len(self.statements)


def _participation(deps) -> dict:
    """(stmt, ref) -> "carried" | "independent" for accesses seen in deps."""
    out: dict = {}

    def mark(key, carried):
        if carried:
            out[key] = "carried"
        else:
            out.setdefault(key, "independent")

    for d in deps:
        mark((d.source_stmt, d.source_ref), d.carried is not None)
        mark((d.target_stmt, d.target_ref), d.carried is not None)
    return out


def _canonical_matrix(matrix, keep_iter_cols: bool) -> str:
    if not matrix:
        return "m|"
    ncols = len(matrix[0])
    cols = list(range(ncols - 1)) if keep_iter_cols else []
    cols.append(ncols - 1)  # constant column
    cols = [c for c in cols if any(row[c] for row in matrix)]
    rows = [",".join(str(row[c]) for c in cols) for row in matrix]
    return "m|" + ";".join(rows)


def extract_features(scop: Scop, deps) -> FeatureSet:
    env = scop.params
    participation = _participation(deps)
    statements = []
    for stmt in scop.statements:
        consts = stmt.schedule.constants
        sched_item = f"sched|{','.join(map(str, consts))}|d{stmt.schedule.depth}"
        writes, reads = [], []
        for ref, access in stmt.iter_accesses():
            role = participation.get((stmt.id, ref))
            keep_iter_cols = role != "independent"
            canon = _canonical_matrix(
                access.index_matrix(stmt.iterators, env), keep_iter_cols
            )
            (writes if ref[0] == "w" else reads).append(canon)
        statements.append(
            StatementFeatures(
                schedule_const=consts,
                schedule_iters=stmt.schedule.iterators,
                items=(
                    (sched_item,),
                    tuple(sorted(writes)),
                    tuple(sorted(reads)),
                ),
            )
        )
    return FeatureSet(statements=tuple(statements))
