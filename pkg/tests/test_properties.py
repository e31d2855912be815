import random

import pytest
from conftest import DIAMOND, SUITE_ALGEBRAS
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from ldc.check_simple import accepts
from ldc.parser import parse
from ldc.properties import PROPERTIES, lattice_meet

SUITE = settings(max_examples=500, deadline=None, derandomize=True,
                 suppress_health_check=[HealthCheck.too_slow])


@pytest.mark.parametrize("alg", SUITE_ALGEBRAS, ids=lambda a: a.name)
@pytest.mark.parametrize("name", list(PROPERTIES))
def test_property_suite(name, alg):
    prop = PROPERTIES[name]

    @SUITE
    @given(st.integers(0, 2**32 - 1))
    def run(seed):
        problem = prop(alg, random.Random(seed))
        assert problem is None, problem

    run()


def test_lattice_meet_property():
    for seed in range(100):
        assert lattice_meet(DIAMOND, random.Random(seed)) is None


def test_factorization_fails_for_lattices():
    leak = parse(r"\x. let (y^H, _) = x in y", DIAMOND)
    ty = parse("T_H Bool -> Bool", DIAMOND)
    assert accepts(DIAMOND, [], leak, DIAMOND.parse("H"), ty)
    assert not accepts(DIAMOND, [], leak, DIAMOND.parse("L"), ty)
