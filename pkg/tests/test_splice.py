"""Region splicing: identity, iterator declaration injection, deferred errors."""

from loopsmith.pipeline.splice import splice_scop
from loopsmith.scop.markers import extract_scop_region
from loopsmith.synth.core import synthesize
from loopsmith.verify.compilers import compile_program

from conftest import TEST_SIZES, require_cc


def test_identity_splice_is_byte_equivalent():
    rec = synthesize(4, size_spec=TEST_SIZES)
    region = extract_scop_region(rec.program)[1]
    assert splice_scop(rec.program, region) == rec.program


def test_tiled_region_gets_iterator_declarations():
    rec = synthesize(4, size_spec=TEST_SIZES)
    region = (
        "for (t1 = 0; t1 < S1; t1 += 32)\n"
        "  for (t2 = 0; t2 < S2; t2 += 32)\n"
        "    for (t3 = t1; t3 < t1 + 32; t3++)\n"
        "      for (t4 = t2; t4 < t2 + 32; t4++)\n"
        "        ;\n"
    )
    out = splice_scop(rec.program, region)
    assert "int t1, t2, t3, t4;" in out
    # declaration lands just above the begin marker
    lines = out.splitlines()
    marker = lines.index("#pragma scop")
    assert lines[marker - 1].strip() == "int t1, t2, t3, t4;"


def test_c99_declared_iterators_not_redeclared():
    rec = synthesize(4, size_spec=TEST_SIZES)
    region = "for (int t9 = 0; t9 < S1; t9++)\n  ;\n"
    out = splice_scop(rec.program, region)
    assert "int t9;" not in out


def test_malformed_region_spliced_and_fails_at_compile(tmp_path):
    require_cc()
    rec = synthesize(4, size_spec=TEST_SIZES)
    out = splice_scop(rec.program, "for (i = 0; i < S1; i++ {\n")
    build = compile_program(out, tmp_path, cflags=("-O1",))
    assert not build.ok
    assert build.stderr  # diagnostics captured for the feedback prompt
