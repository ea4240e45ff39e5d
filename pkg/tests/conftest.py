from __future__ import annotations

import shutil

import pytest

from loopsmith.retrieval.records import DatasetRecord
from loopsmith.retrieval.target import prepare_target
from loopsmith.synth.core import synthesize
from loopsmith.verify.difftest import VerifyConfig

# small sizes keep compiled domains tiny; the solver logic is size-independent
TEST_SIZES = (("S1", 8), ("S2", 10), ("S3", 12))

SYRK_REGION = """
for (i = 0; i < N; i++) {
  for (j = 0; j <= i; j++)
    C[i][j] *= beta;
  for (k = 0; k < M; k++)
    for (j = 0; j <= i; j++)
      C[i][j] += alpha * A[i][k] * A[j][k];
}
"""

SYRK_PARAMS = {"N": 6, "M": 5, "alpha": 2, "beta": 3}


def quick_verify_config(limit: float = 10.0) -> VerifyConfig:
    return VerifyConfig(scop_time_limit=limit, wall_grace=8.0, runs=2, warmup=1)


def require_cc():
    if shutil.which("gcc") is None:
        pytest.skip("gcc not available")


def make_record(seed: int, sizes=TEST_SIZES, optimized=None) -> DatasetRecord:
    rec = synthesize(seed, size_spec=sizes)
    info = prepare_target(rec.program)
    return DatasetRecord(
        id=f"seed{seed:06d}",
        example_source=rec.program,
        optimized_source=optimized if optimized is not None else rec.program,
        features=info.features,
        dependence_summary=[],
        params=rec.params.as_dict(),
    )


@pytest.fixture(scope="session")
def small_corpus():
    return [make_record(seed) for seed in range(12)]


@pytest.fixture(scope="session")
def syrk_scop():
    from loopsmith.scop.parser import parse_scop

    return parse_scop(SYRK_REGION, SYRK_PARAMS)
