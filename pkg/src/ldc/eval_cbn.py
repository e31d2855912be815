"""Call-by-name small-step evaluation."""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    App, Case, Inj1, Inj2, IntAdd, IntLit, Lam, LetPair, LetUnit, Pair, UnitTerm, Var,
    is_value, show, subst, subst_many,
)


@dataclass(frozen=True)
class Stepped:
    term: object
    rule: str


@dataclass(frozen=True)
class Value:
    term: object


@dataclass(frozen=True)
class Stuck:
    reason: str


class FuelExhausted(Exception):
    def __init__(self, fuel, last=None):
        super().__init__(f"fuel exhausted after {fuel} steps")
        self.fuel = fuel
        self.last = last


def step(a):
    if is_value(a):
        return Value(a)
    match a:
        case Var(x):
            return Stuck(f"open variable {x}")
        case App(f, arg, r):
            if isinstance(f, Lam):
                if f.r != r:
                    return Stuck(f"annotation mismatch: lambda at {f.r}, application at {r}")
                return Stepped(subst(f.body, f.x, arg), "AppBeta")
            return _under(step(f), lambda t: App(t, arg, r), "AppL", f)
        case LetPair(q0, x, r, y, s, b):
            if isinstance(s, Pair):
                if s.r != r:
                    return Stuck(f"annotation mismatch: pair at {s.r}, let at {r}")
                return Stepped(subst_many(b, {x: s.fst, y: s.snd}), "LetPairBeta")
            return _under(step(s), lambda t: LetPair(q0, x, r, y, t, b), "LetPairL", s)
        case LetUnit(q0, s, b):
            if isinstance(s, UnitTerm):
                return Stepped(b, "LetUnitBeta")
            return _under(step(s), lambda t: LetUnit(q0, t, b), "LetUnitL", s)
        case Case(q0, s, x1, b1, x2, b2):
            if isinstance(s, Inj1):
                return Stepped(subst(b1, x1, s.t), "CaseOneBeta")
            if isinstance(s, Inj2):
                return Stepped(subst(b2, x2, s.t), "CaseTwoBeta")
            return _under(step(s), lambda t: Case(q0, t, x1, b1, x2, b2), "CaseL", s)
        case IntAdd(l, r):
            if not isinstance(l, IntLit):
                return _under(step(l), lambda t: IntAdd(t, r), "AddL", l)
            if not isinstance(r, IntLit):
                return _under(step(r), lambda t: IntAdd(l, t), "AddR", r)
            return Stepped(IntLit(l.n + r.n), "AddBeta")
    return Stuck(f"no rule for {show(a)}")


def _under(inner, wrap, rule, sub):
    match inner:
        case Stepped(t, r):
            return Stepped(wrap(t), f"{rule}/{r}")
        case Value(v):
            return Stuck(f"{rule}: {show(v)} is not an introduction form of the right kind")
    return inner


def normalize(a, fuel=10_000):
    """Iterate step to a value; Stuck outcomes are returned as-is."""
    for _ in range(fuel):
        out = step(a)
        match out:
            case Value(v):
                return v
            case Stuck():
                return out
            case Stepped(t, _):
                a = t
    raise FuelExhausted(fuel, a)


def trace(a, fuel=10_000):
    """All intermediate terms up to a value or stuck state."""
    seq = [a]
    for _ in range(fuel):
        out = step(a)
        if not isinstance(out, Stepped):
            return seq, out
        a = out.term
        seq.append(a)
    raise FuelExhausted(fuel, a)
