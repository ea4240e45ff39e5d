"""AffineExpr algebra, fill rules, and sidecar round-trips."""

from hypothesis import given, strategies as st

from loopsmith.affine import AffineExpr
from loopsmith.fillers import FillRule, affine_rule, alternating_rule, constant_rule
from loopsmith.sidecar import (
    dependence_from_json,
    dependence_to_json,
    dumps_doc,
    extract_defines,
    features_from_json,
    features_to_json,
    loads_doc,
)


def test_affine_render():
    assert AffineExpr.constant(0).render() == "0"
    assert AffineExpr.var("i").render() == "i"
    assert AffineExpr.var("i", 1, -2).render() == "i - 2"
    assert (AffineExpr.var("M") - AffineExpr.constant(1)).render() == "M - 1"
    assert AffineExpr.var("j", 2).render() == "2*j"
    assert (-AffineExpr.var("i")).render() == "-i"


_envs = st.fixed_dictionaries({"i": st.integers(-9, 9), "N": st.integers(-9, 9)})


@given(a=st.integers(-5, 5), b=st.integers(-5, 5), c=st.integers(-5, 5), env=_envs)
def test_affine_algebra(a, b, c, env):
    e1 = AffineExpr.var("i", a, c)
    e2 = AffineExpr.var("N", b, 1)
    assert (e1 + e2).evaluate(env) == e1.evaluate(env) + e2.evaluate(env)
    assert (e1 - e2).evaluate(env) == e1.evaluate(env) - e2.evaluate(env)
    assert e1.scaled(3).evaluate(env) == 3 * e1.evaluate(env)
    assert (e1 + e2).substitute(env).const == (e1 + e2).evaluate(env)


def test_affine_zero_coefficients_normalize():
    assert AffineExpr.var("i", 0, 4) == AffineExpr.constant(4)
    assert (AffineExpr.var("i") - AffineExpr.var("i")) == AffineExpr.constant(0)


def test_fill_rules_match_python_and_c_semantics():
    rule = affine_rule("A", 2)
    assert rule.evaluate((0, 0)) == float((1 + 7 + 13) % 97)
    alt = alternating_rule("B", 1)
    values = [alt.evaluate((k,)) for k in range(6)]
    assert all(v < 0 for v in values[::2]) and all(v > 0 for v in values[1::2])
    assert constant_rule("C", 1, 5).evaluate((3,)) == 5.0


def test_fill_rule_mutation_paths():
    rule = affine_rule("A", 1)
    consts = rule.constants()
    assert consts
    path, value = consts[0]
    replaced = rule.replace(path, lambda node: ("num", 42))
    assert (path, 42) in replaced.constants()


def test_doc_schema_roundtrip():
    text = dumps_doc("example", {"x": 1})
    doc = loads_doc(text, "example")
    assert doc["x"] == 1
    try:
        loads_doc(text, "other")
        assert False
    except ValueError:
        pass


def test_extract_defines():
    program = "#define S1 64\n# define S2 96\n#define NAME value\nint x;\n"
    assert extract_defines(program) == {"S1": 64, "S2": 96}


def test_dependence_json_roundtrip(syrk_scop):
    from loopsmith.scop.deps import compute_dependences

    deps = compute_dependences(syrk_scop, collapse=True)
    for d in deps.dependences:
        assert dependence_from_json(dependence_to_json(d)) == d


def test_features_json_roundtrip(syrk_scop):
    from loopsmith.features import extract_features
    from loopsmith.scop.deps import compute_dependences

    deps = compute_dependences(syrk_scop, collapse=True)
    features = extract_features(syrk_scop, deps.dependences)
    assert features_from_json(features_to_json(features)) == features
