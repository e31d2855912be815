import pytest

from ldc.algebra import LIN3, NAT_EXACT
from ldc.check_pts import PRESETS, accepts_pts, beta_equal, check_pts, load_pts, parse_pts
from ldc.errors import CheckError
from ldc.eval_cbn import FuelExhausted
from ldc.parser import parse, parse_context
from ldc.syntax import alpha_eq

N = NAT_EXACT
POLY_ID = r"\^0 x:*. \^1 y:x. y"
POLY_ID_TYPE = r"Pi x:^0 *. Pi y:^1 x. x"
OMEGA = r"(\^1 x:*. x x ^1) (\^1 x:*. x x ^1) ^1"


def P(text, spec=PRESETS["type-in-type"], alg=N):
    return parse(text, alg, spec.sorts)


def pts(spec_name, ctx, term, q, expected, alg=N):
    spec = PRESETS[spec_name]
    c = parse_context(ctx, alg, spec.sorts) if ctx else []
    return check_pts(spec, alg, c, P(term, spec, alg), alg.parse(q), P(expected, spec, alg) if expected else None)


@pytest.mark.parametrize("preset,ok", [("type-in-type", True), ("system-f", True), ("cc", True), ("stlc", False)])
def test_polymorphic_identity_per_preset(preset, ok):
    if ok:
        ty = pts(preset, "", POLY_ID, "1", POLY_ID_TYPE)
        assert alpha_eq(ty, P(POLY_ID_TYPE, PRESETS[preset]))
    else:
        with pytest.raises(CheckError) as err:
            pts(preset, "", POLY_ID, "1", POLY_ID_TYPE)
        assert err.value.rule == "PTS-Pi"


def test_definition_conversion():
    ty = pts("type-in-type", "x = Unit :^0 *", r"\^1 y:x. y", "1", r"Pi y:^1 Unit. Unit")
    assert alpha_eq(ty, P(r"Pi y:^1 Unit. Unit"))


def test_zero_world_accepts_anything_well_typed():
    pts("type-in-type", "", r"\^1 x:Unit. x", "0", r"Pi y:^1 Unit. Unit")
    pts("type-in-type", "", r"\^1 x:Unit. (x^1, x)", "0", None)


def test_usage_checked_outside_zero_world():
    with pytest.raises(CheckError) as err:
        pts("type-in-type", "", r"\^1 x:Unit. (x^1, x)", "1", None)
    assert err.value.rule == "PTS-Lam"


def test_type_variable_used_at_zero_only():
    with pytest.raises(CheckError):
        pts("type-in-type", "", r"\^0 x:*. \^1 y:x. x", "1", None)


def test_beta_equal_one_step():
    assert beta_equal(P(r"(\^0 x:*. x) Unit ^0"), P("Unit"), 10)


def test_beta_equal_compares_grades():
    assert not beta_equal(P("Pi x:^1 Unit. Unit"), P("Pi x:^0 Unit. Unit"))
    assert beta_equal(P("Pi x:^1 Unit. Unit"), P("Pi z:^1 Unit. Unit"))


def test_self_application_exhausts_fuel():
    with pytest.raises(FuelExhausted):
        beta_equal(P(OMEGA), P("Unit"), 10)


def test_ill_typed_self_application_rejected():
    with pytest.raises(CheckError):
        pts("type-in-type", "", OMEGA, "1", None)


def test_lin3_polymorphic_identity():
    spec = PRESETS["system-f"]
    assert accepts_pts(spec, LIN3, [], parse(POLY_ID, LIN3, spec.sorts), LIN3.one, parse(POLY_ID_TYPE, LIN3, spec.sorts))


def test_pts_spec_file_format(tmp_path):
    path = tmp_path / "f.pts"
    path.write_text("sorts: *, box\naxioms: *:box\nrules: (*,*,*), (box,*,*)\n")
    spec = load_pts(str(path))
    assert spec.rules == PRESETS["system-f"].rules and spec.axioms == PRESETS["system-f"].axioms


def test_pts_spec_rejects_undeclared_sort():
    with pytest.raises(ValueError):
        parse_pts("sorts: *\naxioms: *:box\n")
