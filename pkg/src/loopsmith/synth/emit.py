"""Emit a complete, compilable C program around a Scop.

The wrapper follows a fixed convention the verifier relies on:
  * global parameters as macros, arrays as static globals (padded so every
    access stays in range);
  * a marked init region filled with deterministic per-array rules;
  * wall-clock timing around the scop region printed as `scop_time <s>`;
  * one `checksum <array> <value>` line per written array, and full
    `elem <array> <indices...> <value>` dumps when run with argv[1]=dump.
"""

from __future__ import annotations

from ..affine import AffineExpr
from ..fillers import INIT_BEGIN, INIT_END, affine_rule, render_init_body
from ..scop.model import Scop
from ..scop.render import render_region

_CHECKSUM_PRIMES = (3, 5, 7, 11)


def array_extent_exprs(scop: Scop) -> dict:
    """array -> tuple of C extent expressions from the declared sizes."""
    out = {}
    for name, dims in scop.arrays:
        out[name] = tuple(d.render() for d in dims)
    return out


def default_fill_rules(scop: Scop) -> list:
    return [
        affine_rule(name, len(dims), salt)
        for salt, (name, dims) in enumerate(scop.arrays)
    ]


def written_arrays(scop: Scop) -> list:
    seen = []
    for s in scop.statements:
        if s.write is not None and s.write.array_name not in seen:
            seen.append(s.write.array_name)
    return sorted(seen)


def _checksum_block(name: str, exts, indent="  ") -> list:
    lines = [f"{indent}cs = 0.0;"]
    pad = indent
    for d, ext in enumerate(exts):
        lines.append(f"{pad}for (li{d} = 0; li{d} < {ext}; li{d}++)")
        pad += indent
    ref = name + "".join(f"[li{d}]" for d in range(len(exts)))
    weight = " + ".join(
        f"(li{d} + 1) * {_CHECKSUM_PRIMES[d % 4]}" for d in range(len(exts))
    )
    lines.append(f"{pad}cs += {ref} * (double)({weight});")
    lines.append(f'{indent}printf("checksum {name} %.10e\\n", cs);')
    return lines


def _dump_block(name: str, exts, indent="  ") -> list:
    lines = []
    pad = indent * 2
    for d, ext in enumerate(exts):
        lines.append(f"{pad}for (li{d} = 0; li{d} < {ext}; li{d}++)")
        pad += indent
    ref = name + "".join(f"[li{d}]" for d in range(len(exts)))
    fmt = " ".join(["%d"] * len(exts))
    args = ", ".join(f"li{d}" for d in range(len(exts)))
    lines.append(f'{pad}printf("elem {name} {fmt} %.17g\\n", {args}, {ref});')
    return lines


def emit_program(scop: Scop, title: str = "synthesized loop nest") -> str:
    exts = array_extent_exprs(scop)
    rules = default_fill_rules(scop)
    max_dims = max((len(e) for e in exts.values()), default=1)
    iter_names = sorted({l.name for s in scop.statements for l in s.loops})
    outputs = written_arrays(scop)

    lines = [
        f"/* {title} */",
        "#include <stdio.h>",
        "#include <string.h>",
        "#ifdef _OPENMP",
        "#include <omp.h>",
        "#else",
        "#include <time.h>",
        "#endif",
        "",
    ]
    for name, value in scop.global_params:
        lines.append(f"#define {name} {value}")
    lines.append("")
    for name, dims in scop.arrays:
        decl = "".join(f"[{d.render()}]" for d in dims)
        lines.append(f"static double {name}{decl};")
    lines += [
        "",
        "double loopsmith_scop_time = 0.0;",
        "",
        "static double loopsmith_now(void) {",
        "#ifdef _OPENMP",
        "  return omp_get_wtime();",
        "#else",
        "  struct timespec ts;",
        "  clock_gettime(CLOCK_MONOTONIC, &ts);",
        "  return ts.tv_sec + 1e-9 * ts.tv_nsec;",
        "#endif",
        "}",
        "",
        "static void loopsmith_init(void) {",
        f"  int {', '.join(f'li{d}' for d in range(max_dims))};",
        f"  {INIT_BEGIN}",
        render_init_body(rules, exts).rstrip("\n"),
        f"  {INIT_END}",
        "}",
        "",
        "static void loopsmith_kernel(void) {",
    ]
    if iter_names:
        lines.append(f"  int {', '.join(iter_names)};")
    lines += [
        "  double loopsmith_t0 = loopsmith_now();",
        "#pragma scop",
    ]
    lines.append(render_region(scop, indent="  ").rstrip("\n"))
    lines += [
        "#pragma endscop",
        "  loopsmith_scop_time = loopsmith_now() - loopsmith_t0;",
        "}",
        "",
        "static void loopsmith_report(int dump) {",
        "  double cs;",
        f"  int {', '.join(f'li{d}' for d in range(max_dims))};",
    ]
    for name in outputs:
        lines += _checksum_block(name, exts[name])
    lines.append("  if (dump) {")
    for name in outputs:
        lines += _dump_block(name, exts[name])
    lines += [
        "  }",
        "}",
        "",
        "int main(int argc, char **argv) {",
        "  loopsmith_init();",
        "  loopsmith_kernel();",
        '  printf("scop_time %.9f\\n", loopsmith_scop_time);',
        '  loopsmith_report(argc > 1 && strcmp(argv[1], "dump") == 0);',
        "  return 0;",
        "}",
    ]
    return "\n".join(lines) + "\n"
