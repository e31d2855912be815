import pytest

from ldc.algebra import (
    AFF3, LIN3, NAT_BOUNDED, NAT_BOUNDED_OMEGA, NAT_EXACT, NAT_EXACT_OMEGA, builtin_lattice,
)

DIAMOND = builtin_lattice("diamond")
LH = builtin_lattice("lh")
SUITE_ALGEBRAS = [NAT_EXACT, NAT_BOUNDED, LIN3, DIAMOND]
OMEGA_ALGEBRAS = [LIN3, AFF3, NAT_EXACT_OMEGA, NAT_BOUNDED_OMEGA]


@pytest.fixture
def diamond():
    return DIAMOND


@pytest.fixture
def lh():
    return LH


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
