import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldc.algebra import NAT_EXACT
from ldc.check_pts import PRESETS
from ldc.eval_cbn import FuelExhausted, Stepped, Stuck, Value, normalize, step, trace
from ldc.gen import random_judgment
from ldc.parser import parse
from ldc.syntax import FALSE, TRUE, UNIT, Var, is_value

N = NAT_EXACT


def P(text):
    return parse(text, N, PRESETS["type-in-type"].sorts)


def test_app_beta():
    out = step(P(r"(\^1 x:A. x) y ^1"))
    assert out == Stepped(Var("y"), "AppBeta")


def test_let_pair_beta():
    out = step(P(r"let_1 (x^2, y) = (a1^2, a2) in (y^1, x)"))
    assert out == Stepped(P("(a2^1, a1)"), "LetPairBeta")


def test_annotation_mismatch_is_stuck():
    out = step(P(r"(\^1 x:A. x) y ^0"))
    assert isinstance(out, Stuck) and "mismatch" in out.reason


def test_open_variable_is_stuck():
    out = step(Var("z"))
    assert isinstance(out, Stuck) and "z" in out.reason


def test_value_is_value():
    assert step(UNIT) == Value(UNIT)
    assert normalize(UNIT) == UNIT


def test_case_two_steps():
    seq, last = trace(P("case_1 true of x1. inj2 unit ; x2. inj1 unit"))
    assert len(seq) == 2 and seq[-1] == FALSE and isinstance(last, Value)
    assert normalize(P("if true then false else true")) == FALSE


def test_congruence_rule_names():
    out = step(P(r"((\^1 x:A. x) (\^1 y:B. y) ^1) unit ^1"))
    assert isinstance(out, Stepped) and out.rule == "AppL/AppBeta"


def test_omega_exhausts_fuel():
    with pytest.raises(FuelExhausted):
        normalize(P(r"(\^1 x:*. x x ^1) (\^1 x:*. x x ^1) ^1"), fuel=10)


def test_integer_addition():
    assert normalize(P("1 + 2 + 3")) == P("6")


def test_true_is_a_value():
    assert is_value(TRUE)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_closed_simple_terms_reach_a_value(seed):
    j = random_judgment(N, random.Random(seed), closed=True, redex=True)
    _, last = trace(j.term, fuel=1000)
    assert isinstance(last, Value)
