import pytest

from ldc.algebra import (
    AFF3, LIN3, NAT_BOUNDED, NAT_EXACT, NAT_EXACT_OMEGA, AlgebraError, Product, builtin_lattice,
    distributivity_failures, parse_algebra, parse_lattice, vector_add, vector_leq, vector_scale, verify_axioms,
)


def g(alg, text):
    return alg.parse(text)


def test_omega_addition_absorbs():
    a = NAT_EXACT_OMEGA
    assert g(a, "1") + g(a, "1") == g(a, "2")
    assert g(a, "w") + g(a, "1") == g(a, "w")


def test_lin3_one_plus_one_is_omega():
    assert g(LIN3, "1") + g(LIN3, "1") == g(LIN3, "w")


@pytest.mark.parametrize("sel", ["nat-exact", "nat-bounded", "lin3", "aff3", "lattice:diamond",
                                 "product(nat-exact,lattice:lmh)"])
def test_zero_is_additive_identity(sel):
    alg = parse_algebra(sel)
    for q in alg.carrier() or alg.sample(4):
        assert alg.zero + q == q
        assert alg.one * q == q


def test_omega_multiplication():
    a = NAT_EXACT_OMEGA
    assert g(a, "w") * g(a, "2") == g(a, "w")
    assert g(a, "w") * g(a, "0") == g(a, "0")
    assert g(a, "0") * g(a, "w") == g(a, "0")


def test_diamond_join():
    d = builtin_lattice("diamond")
    assert g(d, "M1") * g(d, "M2") == g(d, "H")
    assert g(d, "M1") + g(d, "M2") == g(d, "L")


def test_orders():
    assert g(NAT_BOUNDED, "4").leq(g(NAT_BOUNDED, "3"))
    assert not g(NAT_BOUNDED, "3").leq(g(NAT_BOUNDED, "4"))
    assert not g(LIN3, "0").leq(g(LIN3, "1"))
    assert g(LIN3, "w").leq(g(LIN3, "1")) and g(LIN3, "w").leq(g(LIN3, "0"))
    assert g(AFF3, "1").leq(g(AFF3, "0"))
    assert not g(NAT_EXACT, "2").leq(g(NAT_EXACT, "1"))


def test_residuals():
    assert NAT_EXACT.residual(g(NAT_EXACT, "2"), g(NAT_EXACT, "1")) == g(NAT_EXACT, "1")
    assert NAT_EXACT.residual(g(NAT_EXACT, "1"), g(NAT_EXACT, "2")) is None
    lh = builtin_lattice("lh")
    assert lh.residual(g(lh, "L"), g(lh, "H")) == g(lh, "L")
    assert lh.residual(g(lh, "H"), g(lh, "L")) is None
    a = NAT_EXACT_OMEGA
    assert a.residual(g(a, "w"), g(a, "3")) == g(a, "w")


def test_residual_witness_is_unique_for_omega_minus_three():
    a = NAT_EXACT_OMEGA
    w, three = g(a, "w"), g(a, "3")
    witnesses = [q for q in a.sample(64) if three + q == w]
    assert witnesses == [w]


@pytest.mark.parametrize("sel", ["nat-exact", "nat-bounded", "nat-exact-omega", "lin3", "aff3",
                                 "lattice:diamond", "lattice:m3", "lattice:n5"])
def test_residual_is_a_section_of_add(sel):
    alg = parse_algebra(sel)
    pool = alg.carrier() or alg.sample(6)
    for r in pool:
        for q in pool:
            rest = alg.residual(r, q)
            if rest is not None:
                assert rest + q == r


@pytest.mark.parametrize("name", ["lh", "lmh", "diamond", "m3", "n5"])
def test_lattice_residual_iff_leq(name):
    lat = builtin_lattice(name)
    for a in lat.carrier():
        for b in lat.carrier():
            assert a.leq(b) == (lat.residual(a, b) is not None)


def test_vectors():
    a = NAT_EXACT_OMEGA
    u = {"x": g(a, "1"), "y": g(a, "0")}
    v = {"x": g(a, "1"), "y": g(a, "2")}
    assert vector_add(u, v, a) == {"x": g(a, "2"), "y": g(a, "2")}
    scaled = vector_scale(g(a, "0"), {"x": g(a, "5"), "y": g(a, "w")})
    assert all(q.is_zero() for q in scaled.values())
    assert vector_leq({"x": g(LIN3, "w")}, {"x": g(LIN3, "1")}, LIN3)


def test_scale_distributes_over_add():
    a = NAT_EXACT_OMEGA
    pool = a.sample(3)
    for q in pool:
        for x in pool:
            for y in pool:
                u, v = {"n": x}, {"n": y}
                assert vector_scale(q, vector_add(u, v, a)) == vector_add(vector_scale(q, u), vector_scale(q, v), a)


@pytest.mark.parametrize("sel", ["nat-exact", "nat-bounded", "nat-exact-omega", "nat-bounded-omega", "lin3",
                                 "aff3", "lattice:lh", "lattice:lmh", "lattice:diamond", "lattice:m3",
                                 "lattice:n5", "product(nat-exact,lattice:diamond)", "product(lin3,lattice:lmh)"])
def test_builtin_algebras_pass_claimed_laws(sel):
    rep = verify_axioms(parse_algebra(sel))
    assert rep.ok, rep.claimed_failures


@pytest.mark.parametrize("name", ["m3", "n5"])
def test_nondistributive_lattices_fail_with_witness(name):
    lat = builtin_lattice(name)
    fails = distributivity_failures(lat)
    assert fails["join-over-meet"] and fails["meet-over-join"]
    rep = verify_axioms(lat)
    law = next(r for r in rep.results if r.law == "meet-over-join")
    assert not law.holds and len(law.witness) == 3


def test_m3_witness_is_the_three_atoms():
    lat = builtin_lattice("m3")
    triples = {w for w, _ in distributivity_failures(lat)["join-over-meet"]}
    assert ("l1", "l2", "l3") in triples


def test_lattice_parsing_rejects_missing_joins():
    with pytest.raises(AlgebraError):
        parse_lattice("elems: a, b\nleq:")


def test_product_units():
    p = parse_algebra("product(nat-exact-omega,lattice:lmh)")
    assert str(p.zero) == "(0,H)" and str(p.one) == "(1,L)"
    assert isinstance(p, Product)


def test_unknown_selector():
    with pytest.raises(AlgebraError):
        parse_algebra("nope")
