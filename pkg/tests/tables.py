"""Worked-example tables shared by the unit tests and the acceptance runner."""

from ldc.algebra import AFF3, LIN3, NAT_BOUNDED_OMEGA, NAT_EXACT, NAT_EXACT_OMEGA, builtin_lattice, parse_algebra
from ldc.check_simple import accepts
from ldc.heap import Heap, HeapStepped, heap_step
from ldc.parser import parse, parse_context
from ldc.syntax import TRUE, Var

DIAMOND = builtin_lattice("diamond")
LH = builtin_lattice("lh")


def judge(alg, ctx, term, grade, expected=None):
    c = parse_context(ctx, alg) if ctx else []
    e = parse(expected, alg) if expected else None
    return accepts(alg, c, parse(term, alg), alg.parse(grade), e)


# (ctx, term, grade, expected type, accepted?)
NAT_BOUNDED_TABLE = [
    ("", r"\^1 x:A. x", "1", None, True),
    ("", r"\^1 x:A. x", "2", None, True),
    ("", r"\^1 x. let_1 (x1^1, x2) = x in x1", "1", "{}^1 ({}^1 A * A) -> A", True),
    ("", r"\^0 x:A. x", "1", None, False),
    ("", r"\^1 x:A. (x^1, x)", "1", None, False),
    ("", r"\^1 x:A. (x^2, unit)", "1", "{}^1 A -> {}^2 A * Unit", False),
]

DIAMOND_TABLE = [
    ("", r"\^L x. x", "H", "{}^L Bool -> Bool", True),
    ("", r"\^H x. eta_M1 eta_M2 x", "L", "{}^H Bool -> T_M1 T_M2 Bool", True),
    ("", r"\^H x. x", "L", "{}^H Bool -> Bool", False),
    ("x :^H Bool", "x", "M1", None, False),
]

C1 = r"\x. eta_({a} \/ {b}) (let (y^{b}, _) = (let (z^{a}, _) = x in z) in y)"
C1_TYPE = r"T_{a} T_{b} A -> T_({a} \/ {b}) A"
C2 = r"\x. eta_{a} eta_{b} (let (y^({a} \/ {b}), _) = x in y)"
C2_TYPE = r"T_({a} \/ {b}) A -> T_{a} T_{b} A"


def derivation_instances(term, ty):
    for a in DIAMOND.carrier():
        for b in DIAMOND.carrier():
            yield (a, b), judge(DIAMOND, "", term.format(a=a, b=b), "L", ty.format(a=a, b=b))


# (algebra, held grade of x, lookup grade, successor heap or None when stuck)
HEAP_TABLE = [
    (NAT_EXACT, "1", "1", "[x ^0 = true]"),
    (NAT_EXACT, "0", "1", None),
    (NAT_EXACT, "2", "2", "[x ^0 = true]"),
    (NAT_EXACT, "1", "2", None),
    (LH, "L", "H", "[x ^L = true]"),
    (LH, "H", "L", None),
]


def heap_row(alg, held, q):
    h = Heap.of([("x", alg.parse(held), TRUE)])
    out = heap_step(h, Var("x"), alg.parse(q))
    if isinstance(out, HeapStepped):
        return str(out.heap), out.term
    return None, out


OMEGA_ALGEBRAS = [LIN3, AFF3, NAT_EXACT_OMEGA, NAT_BOUNDED_OMEGA]
UNFAIR = r"\^1 x:A. (x^1, x)"
OMEGA_ID = r"\^1 x:A. x"

PRODUCTS = ["product(lin3,lattice:lmh)", "product(aff3,lattice:lmh)", "product(nat-exact-omega,lattice:lmh)"]
ADD_TERM = "x + x"
IF_TERM = "if y then x + x else x"
# (x grade, y grade or None, term, observer, accepted?)
PRODUCT_TABLE = [
    ("(w,L)", None, ADD_TERM, "(1,L)", True),
    ("(w,L)", "(1,M)", IF_TERM, "(1,M)", True),
    ("(1,L)", None, ADD_TERM, "(1,L)", False),
    ("(w,H)", None, ADD_TERM, "(1,L)", False),
    ("(w,L)", "(1,H)", IF_TERM, "(1,M)", False),
]


def product_row(sel, x, y, term, q):
    alg = parse_algebra(sel)
    ctx = f"x :^{x} Int" + (f", y :^{y} Bool" if y else "")
    return judge(alg, ctx, term, q)
