from .compilers import DEFAULT_CC, DEFAULT_CFLAGS, CompileResult, compile_program
from .coverage import COVERAGE_CFLAGS, CoverageReport, coverage_loop
from .difftest import (
    CE,
    ET,
    IA,
    PASS,
    RE,
    OriginalFailed,
    Verdict,
    VerifyConfig,
    differential_test,
    time_scop,
)
from .inputs import (
    MUTATION_KINDS,
    TestInput,
    apply_input,
    builtin_seed_inputs,
    llm_seed_inputs,
    mutate,
    parse_array_decls,
)
from .runner import ProgramOutput, RunResult, parse_output, run_binary

__all__ = [
    "CE", "COVERAGE_CFLAGS", "DEFAULT_CC", "DEFAULT_CFLAGS", "ET", "IA",
    "MUTATION_KINDS", "PASS", "RE", "CompileResult", "CoverageReport",
    "OriginalFailed", "ProgramOutput", "RunResult", "TestInput", "Verdict",
    "VerifyConfig", "apply_input", "builtin_seed_inputs", "compile_program",
    "coverage_loop", "differential_test", "llm_seed_inputs", "mutate",
    "parse_array_decls", "parse_output", "run_binary", "time_scop",
]
