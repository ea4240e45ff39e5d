"""Compilation and differential-testing verdicts."""

import pytest

from loopsmith.errors import CompilerNotFound
from loopsmith.scop.markers import replace_scop_region
from loopsmith.synth.core import synthesize
from loopsmith.verify.compilers import compile_program
from loopsmith.verify.difftest import (
    CE,
    ET,
    IA,
    PASS,
    RE,
    Verdict,
    VerifyConfig,
    differential_test,
    time_scop,
)
from loopsmith.verify.inputs import builtin_seed_inputs, parse_array_decls

from conftest import TEST_SIZES, quick_verify_config, require_cc

PREFIX_SUM = """#include <stdio.h>
#include <string.h>
#define N 16
static double A[N];
static double B[N];
double loopsmith_scop_time = 0.0;
static void loopsmith_init(void) {
  int li0;
  /* loopsmith init begin */
  for (li0 = 0; li0 < N; li0++)
    A[li0] = (double)(li0 + 1);
  for (li0 = 0; li0 < N; li0++)
    B[li0] = (double)(li0 * 2);
  /* loopsmith init end */
}
int main(int argc, char **argv) {
  int i, li0;
  double cs;
  loopsmith_init();
#pragma scop
  for (i = 1; i < N; i++)
    A[i] = A[i - 1] + B[i];
#pragma endscop
  printf("scop_time 0.000001\\n");
  cs = 0.0;
  for (li0 = 0; li0 < N; li0++)
    cs += A[li0] * (double)((li0 + 1) * 3);
  printf("checksum A %.10e\\n", cs);
  if (argc > 1 && strcmp(argv[1], "dump") == 0) {
    for (li0 = 0; li0 < N; li0++)
      printf("elem A %d %.17g\\n", li0, A[li0]);
  }
  return 0;
}
"""


def _python_prefix_sum(n, reversed_loop):
    a = [float(k + 1) for k in range(n)]
    b = [float(k * 2) for k in range(n)]
    order = range(n - 1, 0, -1) if reversed_loop else range(1, n)
    for i in order:
        a[i] = a[i - 1] + b[i]
    return a


def test_reversing_carried_loop_changes_semantics():
    # brute-force oracle on length 16: the reversal truly differs
    assert _python_prefix_sum(16, False) != _python_prefix_sum(16, True)


def test_compile_ok_and_ce(tmp_path):
    require_cc()
    good = compile_program(PREFIX_SUM, tmp_path / "good", cflags=("-O1",))
    assert good.ok and good.binary
    bad = compile_program("int main(void) { return t1; }", tmp_path / "bad", cflags=("-O1",))
    assert not bad.ok
    assert "t1" in bad.stderr
    assert "candidate.c" in bad.stderr  # relative, byte-stable diagnostics


def test_compiler_not_found(tmp_path):
    with pytest.raises(CompilerNotFound):
        compile_program("int main(void){}", tmp_path, cc="definitely-not-a-compiler")


def _inputs():
    return builtin_seed_inputs(parse_array_decls(PREFIX_SUM))


def test_identity_candidate_passes(tmp_path):
    require_cc()
    cfg = quick_verify_config()
    verdict = differential_test(
        PREFIX_SUM, PREFIX_SUM, _inputs(), parse_array_decls(PREFIX_SUM), cfg, tmp_path
    )
    assert verdict.klass == PASS
    assert verdict.scop_time is not None and verdict.scop_time >= 0


def test_reversed_prefix_sum_is_ia(tmp_path):
    require_cc()
    reversed_region = (
        "  for (i = N - 1; i >= 1; i = i + 1) ;\n"  # placeholder, replaced below
    )
    candidate = PREFIX_SUM.replace(
        "for (i = 1; i < N; i++)\n    A[i] = A[i - 1] + B[i];",
        "for (i = N - 1; i >= 1; i--)\n    A[i] = A[i - 1] + B[i];",
    )
    assert candidate != PREFIX_SUM
    verdict = differential_test(
        PREFIX_SUM, candidate, _inputs(), parse_array_decls(PREFIX_SUM),
        quick_verify_config(), tmp_path,
    )
    assert verdict.klass == IA
    assert "A[" in verdict.detail  # first differing element localized


def test_syntax_error_candidate_is_ce(tmp_path):
    require_cc()
    candidate = replace_scop_region(PREFIX_SUM, "  for (i = 1; i < N; i++ {\n")
    verdict = differential_test(
        PREFIX_SUM, candidate, _inputs(), parse_array_decls(PREFIX_SUM),
        quick_verify_config(), tmp_path,
    )
    assert verdict.klass == CE
    assert verdict.detail


def test_crash_candidate_is_re(tmp_path):
    require_cc()
    candidate = replace_scop_region(
        PREFIX_SUM,
        '  { volatile double *p = 0; *p = 1.0; }\n',
    )
    verdict = differential_test(
        PREFIX_SUM, candidate, _inputs(), parse_array_decls(PREFIX_SUM),
        quick_verify_config(), tmp_path,
    )
    assert verdict.klass == RE


def test_endless_candidate_is_et(tmp_path):
    require_cc()
    candidate = replace_scop_region(
        PREFIX_SUM,
        "  { volatile long q = 0;\n    while (q < 4000000000000000000L) q++;\n"
        "    A[1] = A[0] + B[1]; }\n",
    )
    cfg = VerifyConfig(scop_time_limit=2.0, wall_grace=1.0, runs=1, warmup=0)
    verdict = differential_test(
        PREFIX_SUM, candidate, _inputs(), parse_array_decls(PREFIX_SUM), cfg, tmp_path
    )
    assert verdict.klass == ET


def test_scop_time_over_limit_is_et(tmp_path):
    require_cc()
    # report an absurd scop time without actually sleeping
    candidate = PREFIX_SUM.replace('printf("scop_time 0.000001\\n");',
                                   'printf("scop_time 121.0\\n");')
    cfg = VerifyConfig(scop_time_limit=2.0, wall_grace=5.0, runs=1, warmup=0)
    verdict = differential_test(
        PREFIX_SUM, candidate, _inputs(), parse_array_decls(PREFIX_SUM), cfg, tmp_path
    )
    assert verdict.klass == ET


def test_verdict_invariant():
    with pytest.raises(ValueError):
        Verdict(PASS, "missing time")
    with pytest.raises(ValueError):
        Verdict(IA, "has time", scop_time=1.0)


def test_time_scop_mean_and_noise_band(tmp_path):
    require_cc()
    build = compile_program(PREFIX_SUM, tmp_path, cflags=("-O1",), name="timed")
    cfg = quick_verify_config()
    a = time_scop(build.binary, cfg, runs=3, warmup=1)
    b = time_scop(build.binary, cfg, runs=3, warmup=1)
    assert a is not None and b is not None and a > 0
    # identical binaries land in the same noise band (emitted constant here)
    assert 0.5 <= (a / b) <= 2.0


def test_time_scop_limit(tmp_path):
    require_cc()
    slow = PREFIX_SUM.replace('printf("scop_time 0.000001\\n");',
                              'printf("scop_time 3.5\\n");')
    build = compile_program(slow, tmp_path, cflags=("-O1",), name="slow")
    cfg = VerifyConfig(scop_time_limit=2.0, wall_grace=5.0)
    assert time_scop(build.binary, cfg, runs=1, warmup=0) is None
