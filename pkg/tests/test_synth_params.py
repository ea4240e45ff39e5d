"""Parameter sampling: determinism and range occupancy (counting oracle)."""

from collections import Counter

import pytest

from loopsmith.synth.params import (
    PERCENT_CHOICES,
    READ_ARRAY_CHOICES,
    LoopParameters,
    sample_parameters,
)

RANGES = {
    "iterator_bounds_prob": set(PERCENT_CHOICES),
    "loop_depth": {2, 3, 4},
    "statement_index": {1, 2, 3},
    "num_statements": {1, 2, 3, 4, 5, 6},
    "dep_distance": {1, 2},
    "read_dep": {1, 2, 3},
    "write_dep_prob": set(PERCENT_CHOICES),
    "array_list": {1, 2, 3},
    "read_array": set(READ_ARRAY_CHOICES),
    "array_indexes": {1, 2},
}


def test_determinism_per_seed():
    assert sample_parameters(123) == sample_parameters(123)
    assert sample_parameters(123) != sample_parameters(124)


def test_every_value_occupied_over_many_seeds():
    seen = {name: Counter() for name in RANGES}
    for seed in range(10_000):
        params = sample_parameters(seed)
        for name in RANGES:
            seen[name][getattr(params, name)] += 1
    for name, expected in RANGES.items():
        assert set(seen[name]) == expected, name
        # roughly uniform: every value at least a third of the fair share
        fair = 10_000 / len(expected)
        assert min(seen[name].values()) > fair / 3, (name, seen[name])


def test_validation_rejects_out_of_range():
    params = sample_parameters(0)
    bad = LoopParameters(**{**params.as_dict(), "loop_depth": 9})
    with pytest.raises(ValueError):
        bad.validate()
