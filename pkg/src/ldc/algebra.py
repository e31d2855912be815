"""Grade algebras: preordered semirings, finite lattices and their products."""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from pathlib import Path


class AlgebraError(ValueError):
    pass


class _Omega:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "w"

    def __reduce__(self):
        return (_Omega, ())


OMEGA = _Omega()


@dataclass(frozen=True)
class Grade:
    algebra: "GradeAlgebra"
    value: object

    def _same(self, other):
        if not isinstance(other, Grade) or other.algebra != self.algebra:
            raise AlgebraError(f"algebra mismatch: {self} vs {other}")

    def __add__(self, other):
        self._same(other)
        return Grade(self.algebra, self.algebra.add_v(self.value, other.value))

    def __mul__(self, other):
        self._same(other)
        return Grade(self.algebra, self.algebra.mul_v(self.value, other.value))

    def leq(self, other):
        self._same(other)
        return self.algebra.leq_v(self.value, other.value)

    def is_zero(self):
        return self.value == self.algebra.zero_v

    def __str__(self):
        return self.algebra.format_v(self.value)

    def __repr__(self):
        return f"Grade({self})"


class GradeAlgebra:
    """Base class; subclasses work on raw values and Grade wraps them."""

    name = "?"
    has_omega = False
    is_lattice = False
    zero_v: object = 0
    one_v: object = 1

    # raw operations
    def add_v(self, a, b):
        raise NotImplementedError

    def mul_v(self, a, b):
        raise NotImplementedError

    def leq_v(self, a, b):
        raise NotImplementedError

    def residual_v(self, r, q):
        raise NotImplementedError

    def glb_v(self, a, b):
        raise NotImplementedError

    def parse_v(self, text):
        raise NotImplementedError

    def format_v(self, v):
        return str(v)

    def carrier_v(self):
        """Finite carrier, or None for infinite algebras."""
        return None

    def sample_v(self, bound):
        return self.carrier_v()

    def split_lam_v(self, q, r):
        """Factor q as q0*q1 so that q1 is omega only where r is (LamOmega)."""
        return self.one_v, q

    def fallbacks_v(self, q):
        """Grades strictly below q worth retrying a failed judgment at."""
        return []

    def omega_part_v(self, v):
        return v is OMEGA

    # Grade-level API
    def grade(self, v):
        return Grade(self, v)

    @property
    def zero(self):
        return Grade(self, self.zero_v)

    @property
    def one(self):
        return Grade(self, self.one_v)

    def parse(self, text):
        return Grade(self, self.parse_v(text.strip()))

    def residual(self, r, q):
        r._same(q)
        v = self.residual_v(r.value, q.value)
        return None if v is None else Grade(self, v)

    def glb(self, a, b):
        a._same(b)
        v = self.glb_v(a.value, b.value)
        return None if v is None else Grade(self, v)

    def split_lam(self, q, r):
        q0, q1 = self.split_lam_v(q.value, r.value)
        return Grade(self, q0), Grade(self, q1)

    def fallbacks(self, q):
        return [Grade(self, v) for v in self.fallbacks_v(q.value)]

    def carrier(self):
        c = self.carrier_v()
        return None if c is None else [Grade(self, v) for v in c]

    def sample(self, bound):
        return [Grade(self, v) for v in self.sample_v(bound)]

    def claimed_laws(self):
        return CORE_LAWS | DISTRIB_LAWS

    def __str__(self):
        return self.name


# Naturals, optionally with omega, under the exact or bounded order.


class NatAlgebra(GradeAlgebra):
    def __init__(self, bounded, omega):
        self.bounded = bounded
        self.has_omega = omega
        self.name = ("nat-bounded" if bounded else "nat-exact") + ("-omega" if omega else "")

    def __eq__(self, other):
        return isinstance(other, NatAlgebra) and (self.bounded, self.has_omega) == (
            other.bounded,
            other.has_omega,
        )

    def __hash__(self):
        return hash(("nat", self.bounded, self.has_omega))

    def add_v(self, a, b):
        if a is OMEGA or b is OMEGA:
            return OMEGA
        return a + b

    def mul_v(self, a, b):
        if a == 0 or b == 0:
            return 0
        if a is OMEGA or b is OMEGA:
            return OMEGA
        return a * b

    def leq_v(self, a, b):
        if a is OMEGA:
            return True
        if b is OMEGA:
            return False
        return a >= b if self.bounded else a == b

    def residual_v(self, r, q):
        if r is OMEGA:
            return OMEGA
        if q is OMEGA or q > r:
            return None
        return r - q

    def glb_v(self, a, b):
        if a == b:
            return a
        if self.has_omega and (a is OMEGA or b is OMEGA or not self.bounded):
            return OMEGA
        if self.bounded:
            return max(a, b)
        return None

    def parse_v(self, text):
        if text in ("w", "ω", "omega"):
            if not self.has_omega:
                raise AlgebraError(f"{self.name} has no omega")
            return OMEGA
        if text.isdigit():
            return int(text)
        raise AlgebraError(f"not a grade of {self.name}: {text!r}")

    def format_v(self, v):
        return "w" if v is OMEGA else str(v)

    def sample_v(self, bound):
        vals = list(range(bound + 1))
        return vals + [OMEGA] if self.has_omega else vals

    def split_lam_v(self, q, r):
        if self.has_omega and q is OMEGA and r is not OMEGA:
            return OMEGA, 1
        return 1, q

    def fallbacks_v(self, q):
        return [OMEGA] if self.has_omega and q is not OMEGA else []


class ThreePoint(GradeAlgebra):
    """The {0, 1, w} semirings; linear and affine differ only in the order."""

    has_omega = True

    def __init__(self, affine):
        self.affine = affine
        self.name = "aff3" if affine else "lin3"
        below = {(OMEGA, 0), (OMEGA, 1)} | ({(1, 0)} if affine else set())
        self._leq = below | {(v, v) for v in (0, 1, OMEGA)}

    def __eq__(self, other):
        return isinstance(other, ThreePoint) and self.affine == other.affine

    def __hash__(self):
        return hash(("three", self.affine))

    def add_v(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        return OMEGA

    def mul_v(self, a, b):
        if a == 0 or b == 0:
            return 0
        if a == 1:
            return b
        if b == 1:
            return a
        return OMEGA

    def leq_v(self, a, b):
        return (a, b) in self._leq

    def residual_v(self, r, q):
        if r is OMEGA:
            return OMEGA
        for c in (0, 1):
            if self.add_v(c, q) == r:
                return c
        return None

    def glb_v(self, a, b):
        return _glb_from_order(self.carrier_v(), self.leq_v, a, b)

    def parse_v(self, text):
        if text in ("w", "ω", "omega"):
            return OMEGA
        if text in ("0", "1"):
            return int(text)
        raise AlgebraError(f"not a grade of {self.name}: {text!r}")

    def format_v(self, v):
        return "w" if v is OMEGA else str(v)

    def carrier_v(self):
        return [0, 1, OMEGA]

    def split_lam_v(self, q, r):
        if q is OMEGA and r is not OMEGA:
            return OMEGA, 1
        return 1, q

    def fallbacks_v(self, q):
        return [] if q is OMEGA else [OMEGA]


def _glb_from_order(elems, leq, a, b):
    lower = [c for c in elems if leq(c, a) and leq(c, b)]
    for c in lower:
        if all(leq(d, c) for d in lower):
            return c
    return None


# Finite lattices: + is meet, * is join, 0 is top, 1 is bottom.


class FiniteLattice(GradeAlgebra):
    is_lattice = True

    def __init__(self, name, elems, covers):
        self.name = f"lattice:{name}"
        self.elems = tuple(elems)
        if len(set(self.elems)) != len(self.elems) or not self.elems:
            raise AlgebraError("lattice elements must be distinct and nonempty")
        known = set(self.elems)
        for a, b in covers:
            if a not in known or b not in known:
                raise AlgebraError(f"unknown lattice element in {a}<={b}")
        order = {(a, a) for a in self.elems} | set(covers)
        changed = True
        while changed:
            extra = {(a, d) for (a, b) in order for (c, d) in order if b == c} - order
            order |= extra
            changed = bool(extra)
        for a, b in order:
            if a != b and (b, a) in order:
                raise AlgebraError(f"order is not antisymmetric: {a}, {b}")
        self._order = frozenset(order)
        self._meet = {}
        self._join = {}
        for a in self.elems:
            for b in self.elems:
                m = _glb_from_order(self.elems, self._le, a, b)
                j = _glb_from_order(self.elems, lambda x, y: self._le(y, x), a, b)
                if m is None or j is None:
                    raise AlgebraError(f"{a} and {b} lack a meet or a join")
                self._meet[a, b] = m
                self._join[a, b] = j
        tops = [a for a in self.elems if all(self._le(b, a) for b in self.elems)]
        bots = [a for a in self.elems if all(self._le(a, b) for b in self.elems)]
        if not tops or not bots:
            raise AlgebraError("lattice needs a top and a bottom")
        self.zero_v = tops[0]
        self.one_v = bots[0]
        self._hash = hash(("lattice", self.elems, self._order))

    def _le(self, a, b):
        return (a, b) in self._order

    def __eq__(self, other):
        return isinstance(other, FiniteLattice) and (self.elems, self._order) == (
            other.elems,
            other._order,
        )

    def __hash__(self):
        return self._hash

    def meet(self, a, b):
        return self._meet[a, b]

    def join(self, a, b):
        return self._join[a, b]

    def add_v(self, a, b):
        return self._meet[a, b]

    def mul_v(self, a, b):
        return self._join[a, b]

    def leq_v(self, a, b):
        return self._le(a, b)

    def residual_v(self, r, q):
        return r if self._le(r, q) else None

    def glb_v(self, a, b):
        return self._meet[a, b]

    def parse_v(self, text):
        if text in self.elems:
            return text
        aliases = {"top": self.zero_v, "⊤": self.zero_v, "bot": self.one_v, "⊥": self.one_v,
                   "0": self.zero_v, "1": self.one_v}
        if text in aliases:
            return aliases[text]
        raise AlgebraError(f"not an element of {self.name}: {text!r}")

    def carrier_v(self):
        return list(self.elems)

    def claimed_laws(self):
        return CORE_LAWS | LATTICE_LAWS


# Cartesian products; values are pairs of raw component values.


class Product(GradeAlgebra):
    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.name = f"product({left.name},{right.name})"
        self.has_omega = left.has_omega or right.has_omega
        self.zero_v = (left.zero_v, right.zero_v)
        self.one_v = (left.one_v, right.one_v)

    def __eq__(self, other):
        return isinstance(other, Product) and (self.left, self.right) == (other.left, other.right)

    def __hash__(self):
        return hash(("product", self.left, self.right))

    def add_v(self, a, b):
        return (self.left.add_v(a[0], b[0]), self.right.add_v(a[1], b[1]))

    def mul_v(self, a, b):
        return (self.left.mul_v(a[0], b[0]), self.right.mul_v(a[1], b[1]))

    def leq_v(self, a, b):
        return self.left.leq_v(a[0], b[0]) and self.right.leq_v(a[1], b[1])

    def residual_v(self, r, q):
        a = self.left.residual_v(r[0], q[0])
        b = self.right.residual_v(r[1], q[1])
        return None if a is None or b is None else (a, b)

    def glb_v(self, a, b):
        x = self.left.glb_v(a[0], b[0])
        y = self.right.glb_v(a[1], b[1])
        return None if x is None or y is None else (x, y)

    def parse_v(self, text):
        parts = _split_pair(text)
        if parts is None:
            if text in ("0", "1"):
                return self.zero_v if text == "0" else self.one_v
            raise AlgebraError(f"product grade must be a pair: {text!r}")
        return (self.left.parse_v(parts[0]), self.right.parse_v(parts[1]))

    def format_v(self, v):
        return f"({self.left.format_v(v[0])},{self.right.format_v(v[1])})"

    def carrier_v(self):
        a, b = self.left.carrier_v(), self.right.carrier_v()
        if a is None or b is None:
            return None
        return list(itertools.product(a, b))

    def sample_v(self, bound):
        return list(itertools.product(self.left.sample_v(bound), self.right.sample_v(bound)))

    def split_lam_v(self, q, r):
        a0, a1 = self.left.split_lam_v(q[0], r[0])
        b0, b1 = self.right.split_lam_v(q[1], r[1])
        return (a0, b0), (a1, b1)

    def fallbacks_v(self, q):
        return [(f, q[1]) for f in self.left.fallbacks_v(q[0])] + [
            (q[0], f) for f in self.right.fallbacks_v(q[1])
        ]

    def omega_part_v(self, v):
        return self.left.omega_part_v(v[0]) or self.right.omega_part_v(v[1])

    def claimed_laws(self):
        return self.left.claimed_laws() & self.right.claimed_laws()


def _split_pair(text):
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        return None
    inner = text[1:-1]
    depth = 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return inner[:i].strip(), inner[i + 1:].strip()
    return None


# Built-ins and selectors.

NAT_EXACT = NatAlgebra(bounded=False, omega=False)
NAT_BOUNDED = NatAlgebra(bounded=True, omega=False)
NAT_EXACT_OMEGA = NatAlgebra(bounded=False, omega=True)
NAT_BOUNDED_OMEGA = NatAlgebra(bounded=True, omega=True)
LIN3 = ThreePoint(affine=False)
AFF3 = ThreePoint(affine=True)

BUILTIN_LATTICES = {
    "lh": ("elems: L, H", "leq: L<=H"),
    "lmh": ("elems: L, M, H", "leq: L<=M, M<=H"),
    "diamond": ("elems: L, M1, M2, H", "leq: L<=M1, L<=M2, M1<=H, M2<=H"),
    "m3": ("elems: bot, l1, l2, l3, top", "leq: bot<=l1, bot<=l2, bot<=l3, l1<=top, l2<=top, l3<=top"),
    "n5": ("elems: bot, l1, l2, l3, top", "leq: bot<=l1, l1<=l3, l3<=top, bot<=l2, l2<=top"),
}


def parse_lattice(text, name="file"):
    elems, covers = None, []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip()
        if key == "elems":
            elems = [e.strip() for e in rest.split(",") if e.strip()]
        elif key == "leq":
            for item in rest.split(","):
                if not item.strip():
                    continue
                a, sep, b = item.partition("<=")
                if not sep:
                    raise AlgebraError(f"bad order item {item.strip()!r}")
                covers.append((a.strip(), b.strip()))
        else:
            raise AlgebraError(f"unknown lattice spec key {key!r}")
    if elems is None:
        raise AlgebraError("lattice spec lacks an elems line")
    return FiniteLattice(name, elems, covers)


def builtin_lattice(name):
    return parse_lattice("\n".join(BUILTIN_LATTICES[name]), name)


_SIMPLE = {
    "nat-exact": NAT_EXACT,
    "nat-bounded": NAT_BOUNDED,
    "nat-exact-omega": NAT_EXACT_OMEGA,
    "nat-bounded-omega": NAT_BOUNDED_OMEGA,
    "lin3": LIN3,
    "aff3": AFF3,
}


def parse_algebra(selector, base_dir=None):
    """Resolve an algebra selector such as `lin3` or `product(lin3,lattice:lmh)`."""
    s = selector.strip()
    if s in _SIMPLE:
        return _SIMPLE[s]
    if s.startswith("lattice:"):
        ref = s[len("lattice:"):]
        if ref in BUILTIN_LATTICES:
            return builtin_lattice(ref)
        path = Path(ref)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        if not path.exists():
            raise AlgebraError(f"no built-in lattice or file named {ref!r}")
        return parse_lattice(path.read_text(), path.stem)
    m = re.fullmatch(r"product\((.*)\)", s)
    if m:
        parts = _split_pair(f"({m.group(1)})")
        if parts is None:
            raise AlgebraError(f"bad product selector {selector!r}")
        return Product(parse_algebra(parts[0], base_dir), parse_algebra(parts[1], base_dir))
    raise AlgebraError(f"unknown algebra {selector!r}")


# Usage vectors are dicts from names to grades; missing names mean zero.


def vector_add(u, v, alg):
    out = dict(u)
    for k, g in v.items():
        out[k] = out[k] + g if k in out else g
    return {k: g for k, g in out.items() if not g.is_zero()}


def vector_scale(q, u):
    out = {k: q * g for k, g in u.items()}
    return {k: g for k, g in out.items() if not g.is_zero()}


def vector_leq(u, v, alg, names=None):
    keys = set(u) | set(v) if names is None else names
    zero = alg.zero
    return all(u.get(k, zero).leq(v.get(k, zero)) for k in keys)


def vector_glb(u, v, alg):
    """Pointwise greatest lower bound; None when some pair has none."""
    zero = alg.zero
    out = {}
    for k in set(u) | set(v):
        g = alg.glb(u.get(k, zero), v.get(k, zero))
        if g is None:
            return None
        if not g.is_zero():
            out[k] = g
    return out


# Law checking.

CORE_LAWS = frozenset({
    "add-assoc", "add-comm", "add-unit", "mul-assoc", "mul-unit-left", "mul-unit-right",
    "zero-annihilates-left", "zero-annihilates-right", "leq-refl", "leq-trans",
    "add-monotone", "mul-monotone-left", "mul-monotone-right",
})
DISTRIB_LAWS = frozenset({"distrib-left", "distrib-right"})
LATTICE_LAWS = frozenset({"add-idem", "mul-idem", "absorb-add", "absorb-mul", "mul-comm"})


@dataclass
class LawResult:
    law: str
    claimed: bool
    holds: bool
    witness: tuple = ()
    detail: str = ""


@dataclass
class AxiomReport:
    algebra: str
    results: list

    @property
    def claimed_failures(self):
        return [r for r in self.results if r.claimed and not r.holds]

    @property
    def ok(self):
        return not self.claimed_failures

    def lines(self):
        out = []
        for r in self.results:
            tag = "ok" if r.holds else "FAIL"
            note = "" if r.claimed else " (not claimed)"
            w = f" witness {', '.join(r.witness)}: {r.detail}" if not r.holds else ""
            out.append(f"{tag:4} {r.law}{note}{w}")
        return out


def verify_axioms(alg, sample_bound=64, seed=0):
    fmt = alg.format_v
    carrier = alg.carrier_v()
    if carrier is not None:
        singles = carrier
        pairs = list(itertools.product(carrier, repeat=2))
        triples = list(itertools.product(carrier, repeat=3))
    else:
        small = alg.sample_v(min(sample_bound, 6))
        wide = alg.sample_v(sample_bound)
        rng = random.Random(seed)
        singles = wide
        pairs = list(itertools.product(small, repeat=2)) + [
            (rng.choice(wide), rng.choice(wide)) for _ in range(2000)
        ]
        triples = list(itertools.product(small, repeat=3)) + [
            (rng.choice(wide), rng.choice(wide), rng.choice(wide)) for _ in range(4000)
        ]
    add, mul, leq = alg.add_v, alg.mul_v, alg.leq_v
    zero, one = alg.zero_v, alg.one_v

    def eq_law(name, cases, lhs, rhs, show):
        for c in cases:
            a, b = lhs(*c), rhs(*c)
            if a != b:
                return LawResult(name, False, False, tuple(fmt(x) for x in c),
                                 f"{show(*c)}: {fmt(a)} != {fmt(b)}")
        return LawResult(name, False, True)

    def implies(name, cases, pre, post, show):
        for c in cases:
            if pre(*c) and not post(*c):
                return LawResult(name, False, False, tuple(fmt(x) for x in c), show(*c))
        return LawResult(name, False, True)

    f = fmt
    results = [
        eq_law("add-assoc", triples, lambda a, b, c: add(add(a, b), c), lambda a, b, c: add(a, add(b, c)),
               lambda a, b, c: f"({f(a)}+{f(b)})+{f(c)} vs {f(a)}+({f(b)}+{f(c)})"),
        eq_law("add-comm", pairs, lambda a, b: add(a, b), lambda a, b: add(b, a),
               lambda a, b: f"{f(a)}+{f(b)} vs {f(b)}+{f(a)}"),
        eq_law("add-unit", [(a,) for a in singles], lambda a: add(zero, a), lambda a: a,
               lambda a: f"0+{f(a)}"),
        eq_law("mul-assoc", triples, lambda a, b, c: mul(mul(a, b), c), lambda a, b, c: mul(a, mul(b, c)),
               lambda a, b, c: f"({f(a)}*{f(b)})*{f(c)} vs {f(a)}*({f(b)}*{f(c)})"),
        eq_law("mul-unit-left", [(a,) for a in singles], lambda a: mul(one, a), lambda a: a,
               lambda a: f"1*{f(a)}"),
        eq_law("mul-unit-right", [(a,) for a in singles], lambda a: mul(a, one), lambda a: a,
               lambda a: f"{f(a)}*1"),
        eq_law("zero-annihilates-left", [(a,) for a in singles], lambda a: mul(zero, a), lambda a: zero,
               lambda a: f"0*{f(a)}"),
        eq_law("zero-annihilates-right", [(a,) for a in singles], lambda a: mul(a, zero), lambda a: zero,
               lambda a: f"{f(a)}*0"),
        eq_law("distrib-left", triples, lambda a, b, c: mul(a, add(b, c)),
               lambda a, b, c: add(mul(a, b), mul(a, c)),
               lambda a, b, c: f"{f(a)}*({f(b)}+{f(c)}) vs {f(a)}*{f(b)}+{f(a)}*{f(c)}"),
        eq_law("distrib-right", triples, lambda a, b, c: mul(add(a, b), c),
               lambda a, b, c: add(mul(a, c), mul(b, c)),
               lambda a, b, c: f"({f(a)}+{f(b)})*{f(c)} vs {f(a)}*{f(c)}+{f(b)}*{f(c)}"),
        implies("leq-refl", [(a, a) for a in singles], lambda a, b: True, leq,
                lambda a, b: f"{f(a)} </: {f(a)}"),
        implies("leq-trans", triples, lambda a, b, c: leq(a, b) and leq(b, c), lambda a, b, c: leq(a, c),
                lambda a, b, c: f"{f(a)} <: {f(b)} <: {f(c)}"),
        implies("add-monotone", triples, lambda q, a, b: leq(a, b), lambda q, a, b: leq(add(q, a), add(q, b)),
                lambda q, a, b: f"{f(q)}+{f(a)} vs {f(q)}+{f(b)}"),
        implies("mul-monotone-left", triples, lambda q, a, b: leq(a, b),
                lambda q, a, b: leq(mul(q, a), mul(q, b)), lambda q, a, b: f"{f(q)}*{f(a)} vs {f(q)}*{f(b)}"),
        implies("mul-monotone-right", triples, lambda q, a, b: leq(a, b),
                lambda q, a, b: leq(mul(a, q), mul(b, q)), lambda q, a, b: f"{f(a)}*{f(q)} vs {f(b)}*{f(q)}"),
    ]
    if alg.is_lattice:
        results += [
            eq_law("add-idem", [(a,) for a in singles], lambda a: add(a, a), lambda a: a,
                   lambda a: f"{f(a)} meet {f(a)}"),
            eq_law("mul-idem", [(a,) for a in singles], lambda a: mul(a, a), lambda a: a,
                   lambda a: f"{f(a)} join {f(a)}"),
            eq_law("mul-comm", pairs, lambda a, b: mul(a, b), lambda a, b: mul(b, a),
                   lambda a, b: f"{f(a)} join {f(b)}"),
            eq_law("absorb-add", pairs, lambda a, b: add(a, mul(a, b)), lambda a, b: a,
                   lambda a, b: f"{f(a)} meet ({f(a)} join {f(b)})"),
            eq_law("absorb-mul", pairs, lambda a, b: mul(a, add(a, b)), lambda a, b: a,
                   lambda a, b: f"{f(a)} join ({f(a)} meet {f(b)})"),
            eq_law("meet-over-join", triples, lambda a, b, c: add(a, mul(b, c)),
                   lambda a, b, c: mul(add(a, b), add(a, c)),
                   lambda a, b, c: f"{f(a)} meet ({f(b)} join {f(c)}) vs "
                                   f"({f(a)} meet {f(b)}) join ({f(a)} meet {f(c)})"),
        ]
    claimed = alg.claimed_laws()
    for r in results:
        r.claimed = r.law in claimed
    return AxiomReport(alg.name, results)


def distributivity_failures(lat):
    """All triples (a, b, c) breaking b join (a meet c) = (a join b) meet (c join b)
    or b meet (a join c) = (a meet b) join (c meet b)."""
    out = {"join-over-meet": [], "meet-over-join": []}
    for a, b, c in itertools.product(lat.elems, repeat=3):
        lhs, rhs = lat.join(lat.meet(a, c), b), lat.meet(lat.join(a, b), lat.join(c, b))
        if lhs != rhs:
            out["join-over-meet"].append(
                ((a, b, c), f"({a} join {b}) meet ({c} join {b}) = {rhs} but ({a} meet {c}) join {b} = {lhs}"))
        lhs, rhs = lat.meet(lat.join(a, c), b), lat.join(lat.meet(a, b), lat.meet(c, b))
        if lhs != rhs:
            out["meet-over-join"].append(
                ((a, b, c), f"({a} meet {b}) join ({c} meet {b}) = {rhs} but ({a} join {c}) meet {b} = {lhs}"))
    return out
