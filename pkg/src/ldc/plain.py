"""Ordinary simple-type inference by first-order unification, ignoring grades.

Kept independent of the graded checkers so it can serve as a second opinion.
"""

from __future__ import annotations

import itertools

from .syntax import (
    App, Case, Inj1, Inj2, IntAdd, IntLit, IntType, Lam, LetPair, LetUnit, Meta, Pair, Pi,
    Sigma, Sum, UnitTerm, UnitType, Var, fv,
)


# Types as tuples: ("unit",), ("int",), ("base", n), ("fun", r, A, B),
# ("prod", r, A, B), ("sum", A, B), ("var", k).


class PlainTypeError(Exception):
    pass


class _Plain:
    def __init__(self):
        self.sol = {}
        self.k = itertools.count()

    def new(self):
        return ("var", next(self.k))

    def find(self, t):
        while t[0] == "var" and t[1] in self.sol:
            t = self.sol[t[1]]
        return t

    def full(self, t):
        t = self.find(t)
        if t[0] in ("fun", "prod"):
            return (t[0], t[1], self.full(t[2]), self.full(t[3]))
        if t[0] == "sum":
            return ("sum", self.full(t[1]), self.full(t[2]))
        return t

    def occurs(self, k, t):
        t = self.find(t)
        if t[0] == "var":
            return t[1] == k
        return any(self.occurs(k, s) for s in t[1:] if isinstance(s, tuple))

    def eq(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if a[0] == "var":
            if self.occurs(a[1], b):
                raise PlainTypeError("cyclic type")
            self.sol[a[1]] = b
            return
        if b[0] == "var":
            self.eq(b, a)
            return
        if a[0] != b[0]:
            raise PlainTypeError(f"{a[0]} vs {b[0]}")
        if a[0] in ("fun", "prod"):
            if a[1] != b[1]:
                raise PlainTypeError("grade annotation")
            self.eq(a[2], b[2])
            self.eq(a[3], b[3])
        elif a[0] == "sum":
            self.eq(a[1], b[1])
            self.eq(a[2], b[2])
        elif a != b:
            raise PlainTypeError(f"{a} vs {b}")

    def from_term(self, t, metas):
        match t:
            case UnitType():
                return ("unit",)
            case IntType():
                return ("int",)
            case Var(n):
                return ("base", n)
            case Meta(n):
                if n not in metas:
                    metas[n] = self.new()
                return metas[n]
            case Sum(l, r):
                return ("sum", self.from_term(l, metas), self.from_term(r, metas))
            case Pi(x, r, d, c) if x not in fv(c):
                return ("fun", r, self.from_term(d, metas), self.from_term(c, metas))
            case Sigma(x, r, a1, a2) if x not in fv(a2):
                return ("prod", r, self.from_term(a1, metas), self.from_term(a2, metas))
        raise PlainTypeError("not a simple type")

    def infer(self, env, a, metas):
        match a:
            case Var(x):
                if x not in env:
                    raise PlainTypeError(f"unbound {x}")
                return env[x]
            case UnitTerm():
                return ("unit",)
            case IntLit():
                return ("int",)
            case IntAdd(l, r):
                self.eq(self.infer(env, l, metas), ("int",))
                self.eq(self.infer(env, r, metas), ("int",))
                return ("int",)
            case Lam(r, x, dom, body):
                d = self.new() if dom is None else self.from_term(dom, metas)
                return ("fun", r, d, self.infer({**env, x: d}, body, metas))
            case App(f, arg, r):
                d, c = self.new(), self.new()
                self.eq(self.infer(env, f, metas), ("fun", r, d, c))
                self.eq(self.infer(env, arg, metas), d)
                return c
            case Pair(a1, r, a2):
                return ("prod", r, self.infer(env, a1, metas), self.infer(env, a2, metas))
            case LetUnit(_, s, b):
                self.eq(self.infer(env, s, metas), ("unit",))
                return self.infer(env, b, metas)
            case LetPair(_, x, r, y, s, b):
                t1, t2 = self.new(), self.new()
                self.eq(self.infer(env, s, metas), ("prod", r, t1, t2))
                return self.infer({**env, x: t1, y: t2}, b, metas)
            case Inj1(t):
                return ("sum", self.infer(env, t, metas), self.new())
            case Inj2(t):
                return ("sum", self.new(), self.infer(env, t, metas))
            case Case(_, s, x1, b1, x2, b2):
                t1, t2 = self.new(), self.new()
                self.eq(self.infer(env, s, metas), ("sum", t1, t2))
                r1 = self.infer({**env, x1: t1}, b1, metas)
                r2 = self.infer({**env, x2: t2}, b2, metas)
                self.eq(r1, r2)
                return r1
        raise PlainTypeError(f"not a simple-fragment term: {type(a).__name__}")


def plain_typable(ctx_types, a, ty):
    """Ordinary simple typing, ignoring grade accounting entirely."""
    p = _Plain()
    metas = {}
    try:
        env = {n: p.from_term(t, metas) for n, t in ctx_types}
        p.eq(p.infer(env, a, metas), p.from_term(ty, metas))
        return True
    except PlainTypeError:
        return False


def infer_plain(a, names):
    """Infer types for free names and the term; unconstrained parts become Unit."""
    p = _Plain()
    env = {n: p.new() for n in names}
    try:
        t = p.infer(env, a, {})
    except PlainTypeError:
        return None
    return [(n, _to_term(p.full(env[n]))) for n in names], _to_term(p.full(t))


def _to_term(t):
    match t[0]:
        case "unit" | "var":
            return UnitType()
        case "int":
            return IntType()
        case "base":
            return Var(t[1])
        case "fun":
            return Pi("_", t[1], _to_term(t[2]), _to_term(t[3]))
        case "prod":
            return Sigma("_", t[1], _to_term(t[2]), _to_term(t[3]))
        case "sum":
            return Sum(_to_term(t[1]), _to_term(t[2]))


def infer_config(entries, a, ty=None):
    """Types for (name, definition) entries and a term that uses them; defaults unknowns to Unit."""
    p = _Plain()
    metas = {}
    env = {}
    try:
        for name, d in entries:
            env[name] = p.infer(env, d, metas)
        t = p.infer(env, a, metas)
        if ty is not None:
            p.eq(t, p.from_term(ty, metas))
    except PlainTypeError:
        return None
    return [(n, _to_term(p.full(env[n]))) for n, _ in entries], _to_term(p.full(t))
