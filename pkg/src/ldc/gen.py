"""Random simple-fragment programs for property suites and harnesses."""

from __future__ import annotations

from dataclasses import dataclass

from .check_simple import SimpleChecker
from .errors import CheckError
from .syntax import (
    INT_T, UNIT, UNIT_T, App, Case, Inj1, Inj2, IntAdd, IntLit, Lam, LetPair, LetUnit, Pair, Pi, Sigma,
    Sum, Var, bool_type,
)

BOOL_T = bool_type()


def grade_pool(alg, bound=2):
    """Small grades worth sampling: the carrier when finite, else 0..bound."""
    return alg.carrier() or alg.sample(bound)


def elim_pool(alg, bound=2):
    return [g for g in grade_pool(alg, bound) if g.leq(alg.one)]


class TermGen:
    """Type-directed generator; lambdas are annotated so closed terms check without inference."""

    def __init__(self, alg, rng, max_depth=4, bound=2):
        self.alg = alg
        self.rng = rng
        self.max_depth = max_depth
        self.grades = grade_pool(alg, bound)
        self.elims = elim_pool(alg, bound)
        self.counter = 0

    def name(self, base):
        self.counter += 1
        return f"{base}{self.counter}"

    def grade(self):
        return self.rng.choice(self.grades)

    def elim(self):
        return self.rng.choice(self.elims)

    def type(self, depth=2):
        rng = self.rng
        if depth <= 0 or rng.random() < 0.45:
            return rng.choice([UNIT_T, INT_T, BOOL_T])
        k = rng.randrange(3)
        if k == 0:
            return Pi("_", self.grade(), self.type(depth - 1), self.type(depth - 1))
        if k == 1:
            return Sigma("_", self.grade(), self.type(depth - 1), self.type(depth - 1))
        return Sum(self.type(depth - 1), self.type(depth - 1))

    def term(self, env, ty, depth=None):
        depth = self.max_depth if depth is None else depth
        rng = self.rng
        hits = [n for n, t in env.items() if t == ty]
        if hits and (depth <= 0 or rng.random() < 0.35):
            return Var(rng.choice(hits))
        if depth <= 0 or rng.random() < 0.6:
            return self.intro(env, ty, depth)
        return self.elim_form(env, ty, depth)

    def intro(self, env, ty, depth):
        rng = self.rng
        match ty:
            case Pi(_, r, dom, cod):
                x = self.name("x")
                return Lam(r, x, dom, self.term({**env, x: dom}, cod, depth - 1))
            case Sigma(_, r, a, b):
                return Pair(self.term(env, a, depth - 1), r, self.term(env, b, depth - 1))
            case Sum(a, b):
                if rng.random() < 0.5:
                    return Inj1(self.term(env, a, depth - 1))
                return Inj2(self.term(env, b, depth - 1))
            case _ if ty == INT_T:
                if depth > 0 and rng.random() < 0.3:
                    return IntAdd(self.term(env, INT_T, depth - 1), self.term(env, INT_T, depth - 1))
                return IntLit(rng.randrange(5))
        return UNIT

    def elim_form(self, env, ty, depth):
        rng = self.rng
        k = rng.randrange(4)
        if k == 0:
            dom = self.type(1)
            r = self.grade()
            f = self.term(env, Pi("_", r, dom, ty), depth - 1)
            return App(f, self.term(env, dom, depth - 1), r)
        if k == 1:
            a, b, r = self.type(1), self.type(1), self.grade()
            x, y = self.name("x"), self.name("y")
            s = self.term(env, Sigma("_", r, a, b), depth - 1)
            return LetPair(self.elim(), x, r, y, s, self.term({**env, x: a, y: b}, ty, depth - 1))
        if k == 2:
            s = self.term(env, UNIT_T, depth - 1)
            return LetUnit(self.elim(), s, self.term(env, ty, depth - 1))
        a, b = self.type(1), self.type(1)
        x1, x2 = self.name("x"), self.name("x")
        s = self.term(env, Sum(a, b), depth - 1)
        return Case(self.elim(), s, x1, self.term({**env, x1: a}, ty, depth - 1),
                    x2, self.term({**env, x2: b}, ty, depth - 1))


@dataclass
class Judgment:
    ctx: list  # [(name, grade, type)]
    term: object
    grade: object
    type: object


def random_judgment(alg, rng, names=("a", "b"), closed=False, nonzero=False, redex=False, max_depth=4,
                    tries=400):
    """An accepted judgment whose context grades are exactly the principal usage.

    With redex=True the term is rooted at an elimination form, so it is not a value.
    """
    g = TermGen(alg, rng, max_depth=max_depth)
    for _ in range(tries):
        skel = [] if closed else [(n, g.type(1)) for n in names]
        ty = g.type(2)
        a = g.elim_form(dict(skel), ty, max_depth) if redex else g.term(dict(skel), ty)
        q = g.grade()
        if nonzero and q.is_zero():
            continue
        try:
            res = SimpleChecker(alg).synth(skel, a, q, ty)
        except CheckError:
            continue
        ctx = [(n, res.usage.get(n, alg.zero), t) for n, t in skel]
        return Judgment(ctx, a, q, ty)
    raise RuntimeError(f"no accepted judgment in {tries} tries under {alg.name}")


def random_heap_program(alg, rng, size=3, max_depth=3, tries=400):
    """Definitions (name, type, def) where each def may mention earlier names, plus a term over them."""
    g = TermGen(alg, rng, max_depth=max_depth)
    for _ in range(tries):
        entries, env = [], {}
        for i in range(rng.randrange(size + 1)):
            n = f"h{i}"
            t = g.type(1)
            entries.append((n, t, g.term(dict(env), t, 2)))
            env[n] = t
        ty = g.type(1)
        a = g.elim_form(dict(env), ty, max_depth) if rng.random() < 0.8 else g.term(dict(env), ty)
        q = g.grade()
        if q.is_zero():
            continue
        try:
            chk = SimpleChecker(alg)
            for k, (n, t, d) in enumerate(entries):
                chk.synth([(m, s) for m, s, _ in entries[:k]], d, alg.one, t)
            chk.synth([(n, t) for n, t, _ in entries], a, q, ty)
        except CheckError:
            continue
        return entries, a, q, ty
    raise RuntimeError(f"no heap program in {tries} tries under {alg.name}")


def random_closed_value(alg, rng, ty, max_depth=2):
    g = TermGen(alg, rng, max_depth=max_depth)
    return g.term({}, ty)


def _distinct_values(g, ty, tries=50):
    first = g.term({}, ty, 2)
    for _ in range(tries):
        second = g.term({}, ty, 2)
        if second != first:
            return first, second
    return None


def random_ni_case(alg, rng, high, low, tries=2000):
    """f : {}^high A -> A accepted at low, with two distinct closed inputs accepted at low*high."""
    g = TermGen(alg, rng, max_depth=4)
    for _ in range(tries):
        a_ty = rng.choice([BOOL_T, INT_T, Sum(INT_T, BOOL_T)])
        x = g.name("x")
        f = Lam(high, x, a_ty, g.term({x: a_ty}, a_ty))
        f_ty = Pi("_", high, a_ty, a_ty)
        inputs = _distinct_values(g, a_ty)
        if inputs is None:
            continue
        chk = SimpleChecker(alg)
        try:
            chk.check([], f, low, f_ty)
            for v in inputs:
                chk.check([], v, low * high, a_ty)
        except CheckError:
            continue
        return f, f_ty, inputs[0], inputs[1]
    raise RuntimeError(f"no noninterference case in {tries} tries")


def random_affine_case(alg, rng, tries=2000):
    """f : {}^1 A -> B accepted at 1, and a closed argument of type A."""
    g = TermGen(alg, rng, max_depth=4)
    for _ in range(tries):
        a_ty, b_ty = g.type(1), g.type(1)
        x = g.name("x")
        f = Lam(alg.one, x, a_ty, g.term({x: a_ty}, b_ty))
        f_ty = Pi("_", alg.one, a_ty, b_ty)
        if x not in _free(f.body):
            continue
        value = g.term({}, a_ty, 2)
        try:
            SimpleChecker(alg).check([], f, alg.one, f_ty)
            SimpleChecker(alg).check([], value, alg.one, a_ty)
        except CheckError:
            continue
        return f, f_ty, value
    raise RuntimeError(f"no affine case in {tries} tries")


def _free(t):
    from .syntax import fv

    return fv(t)
