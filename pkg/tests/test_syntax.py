import random

from hypothesis import given, settings
from hypothesis import strategies as st

from ldc.algebra import LIN3, NAT_EXACT, builtin_lattice
from ldc.gen import TermGen
from ldc.parser import desugar, parse
from ldc.syntax import (
    FALSE, TRUE, UNIT, UNIT_T, Lam, LetPair, Pair, Pi, Sigma, Sort, Sum, Var, alpha_eq, fv, multi_subst, show, subst,
)

N = NAT_EXACT
ONE = N.one
LH = builtin_lattice("lh")
DIAMOND = builtin_lattice("diamond")


def test_subst_variable():
    assert subst(Var("x"), "x", Var("y")) == Var("y")


def test_subst_avoids_capture():
    body = Lam(ONE, "y", Var("A"), Var("x"))
    out = subst(body, "x", Var("y"))
    assert isinstance(out, Lam) and out.x != "y"
    assert out.body == Var("y")
    assert alpha_eq(out, Lam(ONE, "z", Var("A"), Var("y")))


def test_subst_leaves_annotations():
    t = parse(r"\^2 y:A. (x^2, y)", N)
    out = subst(t, "x", UNIT)
    assert out.r == N.parse("2") and out.body.r == N.parse("2")


def test_c2_body_substitution_shape():
    c2 = parse(r"\x. eta_M1 eta_M2 (let (y^H, _) = x in y)", DIAMOND)
    out = subst(c2.body, "x", parse("eta_H unit", DIAMOND))
    assert alpha_eq(out, parse(r"eta_M1 eta_M2 (let (y^H, _) = eta_H unit in y)", DIAMOND))


def test_multi_subst_empty_is_identity():
    t = parse(r"\^1 x:A. x", N)
    assert multi_subst(t, []) == t


def test_multi_subst_type_definition():
    defs = [("x", UNIT_T)]
    assert multi_subst(Var("x"), defs) == UNIT_T


def test_multi_subst_nested_defs_fold_in_reverse():
    defs = [("x", UNIT), ("y", parse("(x^1, unit)", N))]
    assert multi_subst(Var("y"), defs) == Pair(UNIT, ONE, UNIT)


def test_parse_lambda():
    assert parse(r"\^1 x:A. x", N) == Lam(ONE, "x", Var("A"), Var("x"))


def test_parse_let_pair():
    t = parse("let_1 (x^w, y) = t in x", LIN3)
    assert t == LetPair(LIN3.one, "x", LIN3.parse("w"), "y", Var("t"), Var("x"))


def test_parse_polymorphic_identity_type():
    t = parse("Pi x:^0 *. Pi y:^1 x. x", N)
    assert t == Pi("x", N.zero, Sort("*"), Pi("y", ONE, Var("x"), Var("x")))


def test_desugar_monad_type():
    assert alpha_eq(desugar("T_H Bool", LH), Sigma("_", LH.parse("H"), Sum(UNIT_T, UNIT_T), UNIT_T))


def test_desugar_eta():
    assert desugar("eta_L unit", LH) == Pair(UNIT, LH.parse("L"), UNIT)


def test_desugar_booleans():
    assert desugar("true", N) == TRUE and desugar("false", N) == FALSE


def test_parse_error_has_position():
    import pytest

    from ldc.parser import ParseError

    with pytest.raises(ParseError) as err:
        parse(r"\^1 x:A. (x", N)
    assert ":" in str(err.value)


def _gen_term(alg, seed):
    rng = random.Random(seed)
    g = TermGen(alg, rng, max_depth=4)
    env = {"a": g.type(1), "b": g.type(1)}
    return g.term(env, g.type(2))


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6), st.sampled_from([N, LIN3, DIAMOND]))
def test_print_parse_round_trip(seed, alg):
    t = _gen_term(alg, seed)
    assert alpha_eq(parse(show(t), alg), t)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_subst_self_is_identity(seed):
    t = _gen_term(N, seed)
    assert alpha_eq(subst(t, "a", Var("a")), t)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_subst_free_variables(seed):
    t = _gen_term(N, seed)
    c = Pair(Var("c"), ONE, Var("b"))
    if "a" in fv(t):
        assert fv(subst(t, "a", c)) == (fv(t) - {"a"}) | fv(c)
