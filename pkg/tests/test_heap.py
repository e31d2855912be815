import pytest
from tables import HEAP_TABLE, LH, heap_row

from ldc.algebra import NAT_BOUNDED, NAT_EXACT
from ldc.check_pts import PRESETS
from ldc.heap import (
    Heap, HeapStepped, affine_usage_test, check_irrelevant, check_similarity, check_unchanged, compatible, heap_step,
    noninterference_test, parse_heap, run,
)
from ldc.parser import parse
from ldc.syntax import FALSE, TRUE, UNIT, UNIT_T, Var, bool_type, show

N = NAT_EXACT
B = bool_type()


@pytest.mark.parametrize("alg,held,q,expect", HEAP_TABLE, ids=lambda v: str(v) if isinstance(v, str) else None)
def test_heap_table(alg, held, q, expect):
    heap, out = heap_row(alg, held, q)
    assert heap == expect
    if expect is None:
        assert "insufficient resource" in out.reason
    else:
        assert out == TRUE


def test_lattice_lookup_keeps_level():
    h = Heap.of([("x", LH.parse("L"), TRUE)])
    out = heap_step(h, Var("x"), LH.parse("H"))
    assert out.heap.grade("x") == LH.parse("L")


def test_compatible_examples():
    assert compatible(N, Heap.of([("x", N.one, FALSE)]), [("x", N.one, B)])
    assert not compatible(N, Heap.of([("x", N.zero, FALSE)]), [("x", N.one, B)])
    assert compatible(N, Heap(), [])


def test_compatible_counts_later_definitions():
    pair_t = parse("{}^1 Bool * Bool", N)
    ctx = [("x", N.one, B), ("y", N.one, pair_t)]
    heap = lambda n: Heap.of([("x", N.grade(n), TRUE), ("y", N.one, parse("(x^1, x)", N))])
    assert compatible(N, heap(3), ctx)
    assert not compatible(N, heap(2), ctx)


def test_compatible_lattice_levels():
    L, H = LH.parse("L"), LH.parse("H")
    ctx = [("x", H, B), ("y", L, B)]
    heap = lambda g: Heap.of([("x", LH.parse(g), TRUE), ("y", L, Var("x"))])
    assert compatible(LH, heap("L"), ctx)
    assert not compatible(LH, heap("H"), ctx)


def test_polymorphic_identity_run():
    term = parse(r"(\^0 x:*. \^1 y:x. y) Unit ^0 unit ^1", N, PRESETS["type-in-type"].sorts)
    res = run(Heap(), term, N.one)
    assert res.status == "value" and res.term == UNIT
    first = res.trace[0].heap_after
    assert [n for n, _, _ in first.bindings] == ["x1"]
    assert first.bindings[0][1] == N.zero and first.bindings[0][2] == UNIT_T
    assert [e.rule for e in res.trace][-1] == "HeapStep-Var"
    assert len(res.lookups()) == 1
    assert check_unchanged(res.trace).ok


def test_value_runs_immediately():
    res = run(Heap(), UNIT, N.one)
    assert res.status == "value" and res.trace == []


def test_affine_lookup_once():
    f = parse(r"\^1 x:Bool. x", N)
    rep = affine_usage_test(N, f, parse("{}^1 Bool -> Bool", N), "a", TRUE)
    assert rep.ok and rep.details == [1]


def test_affine_bound_nat_bounded():
    f = parse(r"\^1 x:Bool. if x then false else true", NAT_BOUNDED)
    rep = affine_usage_test(NAT_BOUNDED, f, parse("{}^1 Bool -> Bool", NAT_BOUNDED), "a", FALSE)
    assert rep.ok and rep.details == [1]


def test_unchanged_on_empty_trace():
    assert check_unchanged([]).ok


def test_irrelevant_zero_binding():
    h = Heap.of([("x", N.zero, UNIT_T)])
    term = parse(r"(\^1 y:x. y) unit ^1", N, PRESETS["type-in-type"].sorts)
    rep = check_irrelevant(h, term, N.one, "x", B)
    assert rep.ok, rep.message


def test_similarity_on_each_step():
    term = parse(r"let_1 (a^1, b) = ((\^1 z:Bool. z) true ^1 ^1, unit) in let_1 unit = b in a", N)
    res = run(Heap(), term, N.one)
    assert res.status == "value"
    assert all(check_similarity(e).ok for e in res.trace)


def test_noninterference_constant_function():
    H, L = LH.parse("H"), LH.parse("L")
    rep = noninterference_test(LH, parse(r"\^H x:Bool. true", LH), parse("{}^H Bool -> Bool", LH), TRUE, FALSE, H, L)
    assert rep.outcome == "equal" and rep.message == "true"


def test_noninterference_no_usage():
    rep = noninterference_test(N, parse(r"\^0 x:Bool. unit", N), parse("{}^0 Bool -> Unit", N), TRUE, FALSE,
                               N.zero, N.one)
    assert rep.outcome == "equal"


def test_leak_blocked_by_precondition():
    H, L = LH.parse("H"), LH.parse("L")
    f, ty = parse(r"\^H x:Bool. x", LH), parse("{}^H Bool -> Bool", LH)
    assert noninterference_test(LH, f, ty, TRUE, FALSE, H, L).outcome == "precondition"
    assert noninterference_test(LH, f, ty, TRUE, FALSE, H, L, precondition=False).outcome == "violation"


def test_parse_heap_file():
    h = parse_heap("x ^1 = true\ny ^0 = (x^1, x)  -- pair\n", N)
    assert h.names == ["x", "y"] and h.grade("x") == N.one
    with pytest.raises(ValueError):
        parse_heap("y ^1 = x\n", N)


def test_heap_rejects_duplicates():
    with pytest.raises(ValueError):
        Heap.of([("x", N.one, UNIT), ("x", N.one, UNIT)])


def test_fresh_names_avoid_support():
    term = parse(r"(\^1 x:Bool. x) true ^1", N)
    out = heap_step(Heap(), term, N.one, support={"x1"})
    assert isinstance(out, HeapStepped) and "x1" not in out.heap.names
    assert show(out.term) in out.heap.names
