"""The ten synthesis knobs and their sampling."""

from __future__ import annotations

from dataclasses import dataclass, fields

from ..rng import Rng

PERCENT_CHOICES = (20, 40, 60)
READ_ARRAY_CHOICES = (1, 3, 5)


@dataclass(frozen=True)
class LoopParameters:
    iterator_bounds_prob: int  # {20, 40, 60} percent, halving per nest level
    loop_depth: int            # 2..4, max depth of the scop
    statement_index: int       # 1..3, max loop branches per level
    num_statements: int        # 1..6
    dep_distance: int          # 1..2, max |distance| per dimension
    read_dep: int              # 1..3, max WAR/RAW dependences per statement
    write_dep_prob: int        # {20, 40, 60} percent, WAW per statement
    array_list: int            # 1..3, alternative arrays per statement
    read_array: int            # {1, 3, 5}, max reads per statement
    array_indexes: int         # 1..2, max |constant| in index rows
    rng_seed: int

    def validate(self) -> None:
        checks = {
            "iterator_bounds_prob": self.iterator_bounds_prob in PERCENT_CHOICES,
            "loop_depth": 2 <= self.loop_depth <= 4,
            "statement_index": 1 <= self.statement_index <= 3,
            "num_statements": 1 <= self.num_statements <= 6,
            "dep_distance": 1 <= self.dep_distance <= 2,
            "read_dep": 1 <= self.read_dep <= 3,
            "write_dep_prob": self.write_dep_prob in PERCENT_CHOICES,
            "array_list": 1 <= self.array_list <= 3,
            "read_array": self.read_array in READ_ARRAY_CHOICES,
            "array_indexes": 1 <= self.array_indexes <= 2,
        }
        bad = [name for name, ok in checks.items() if not ok]
        if bad:
            raise ValueError(f"parameters out of range: {bad}")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def sample_parameters(seed: int) -> LoopParameters:
    rng = Rng(seed).split("params")
    params = LoopParameters(
        iterator_bounds_prob=rng.choice(PERCENT_CHOICES),
        loop_depth=rng.randint(2, 4),
        statement_index=rng.randint(1, 3),
        num_statements=rng.randint(1, 6),
        dep_distance=rng.randint(1, 2),
        read_dep=rng.randint(1, 3),
        write_dep_prob=rng.choice(PERCENT_CHOICES),
        array_list=rng.randint(1, 3),
        read_array=rng.choice(READ_ARRAY_CHOICES),
        array_indexes=rng.randint(1, 2),
        rng_seed=seed,
    )
    params.validate()
    return params
