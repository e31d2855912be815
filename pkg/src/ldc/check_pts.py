"""Checker for the dependent fragment over a pure type system."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

from .algebra import vector_add, vector_glb, vector_scale
from .check_simple import discharge
from .errors import CheckError, TypeMismatch, UsageError
from .eval_cbn import FuelExhausted, Stepped, step
from .syntax import (
    INT_T, UNIT_T, App, Case, Inj1, Inj2, IntAdd, IntLit, IntType, Lam, LetPair, LetUnit, Pair,
    Pi, Sigma, Sort, Sum, UnitTerm, UnitType, Var, _grades, all_names, children, fresh, fv,
    multi_subst, show, subst,
)

DEFAULT_FUEL = 10_000


def default_fuel():
    return int(os.environ.get("LDC_FUEL", DEFAULT_FUEL))


@dataclass(frozen=True)
class PtsSpec:
    sorts: tuple
    axioms: frozenset
    rules: frozenset
    name: str = "custom"

    def __post_init__(self):
        known = set(self.sorts)
        for pair in self.axioms:
            if not set(pair) <= known:
                raise ValueError(f"axiom {pair} mentions an undeclared sort")
        for triple in self.rules:
            if not set(triple) <= known:
                raise ValueError(f"rule {triple} mentions an undeclared sort")

    @property
    def base(self):
        """Sort of Unit, Int and sums of base types."""
        return "*" if "*" in self.sorts else self.sorts[0]

    def axiom(self, s):
        return next((b for a, b in sorted(self.axioms) if a == s), None)


PRESETS = {
    "stlc": PtsSpec(("*", "box"), frozenset({("*", "box")}), frozenset({("*", "*", "*")}), "stlc"),
    "system-f": PtsSpec(("*", "box"), frozenset({("*", "box")}),
                        frozenset({("*", "*", "*"), ("box", "*", "*")}), "system-f"),
    "cc": PtsSpec(("*", "box"), frozenset({("*", "box")}),
                  frozenset({("*", "*", "*"), ("box", "*", "*"), ("*", "box", "box"), ("box", "box", "box")}),
                  "cc"),
    "type-in-type": PtsSpec(("*",), frozenset({("*", "*")}), frozenset({("*", "*", "*")}), "type-in-type"),
}


def parse_pts(text, name="custom"):
    """`sorts: *, box` / `axioms: *:box` / `rules: (*,*,*), (box,*,*)`."""
    fields = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep or key.strip() not in ("sorts", "axioms", "rules"):
            raise ValueError(f"bad PTS spec line: {raw!r}")
        fields[key.strip()] = rest.strip()
    sorts = tuple(s.strip() for s in fields.get("sorts", "").split(",") if s.strip())
    if not sorts:
        raise ValueError("PTS spec declares no sorts")
    axioms = set()
    for item in fields.get("axioms", "").split(","):
        if item.strip():
            a, _, b = item.partition(":")
            axioms.add((a.strip(), b.strip()))
    rules = set()
    for m in re.finditer(r"\(([^)]*)\)", fields.get("rules", "")):
        parts = tuple(p.strip() for p in m.group(1).split(","))
        if len(parts) == 2:
            parts = parts + (parts[1],)
        if len(parts) != 3:
            raise ValueError(f"bad rule ({m.group(1)})")
        rules.add(parts)
    return PtsSpec(sorts, frozenset(axioms), frozenset(rules), name)


def load_pts(selector, base_dir=None):
    if selector in PRESETS:
        return PRESETS[selector]
    path = selector if base_dir is None or os.path.isabs(selector) else os.path.join(base_dir, selector)
    with open(path) as f:
        return parse_pts(f.read(), os.path.basename(path))


# Beta equality.


class Fuel:
    def __init__(self, n):
        self.total = n
        self.left = n

    def spend(self, last=None):
        if self.left <= 0:
            raise FuelExhausted(self.total, last)
        self.left -= 1


def whnf(a, fuel):
    while True:
        out = step(a)
        if not isinstance(out, Stepped):
            return a
        fuel.spend(a)
        a = out.term


def beta_equal(a, b, fuel=None):
    """Alpha-beta equality with grade annotations compared; raises FuelExhausted."""
    if not isinstance(fuel, Fuel):
        fuel = Fuel(default_fuel() if fuel is None else fuel)
    return _equal(a, b, fuel)


def _equal(a, b, fuel):
    if a == b:
        return True
    a, b = whnf(a, fuel), whnf(b, fuel)
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        return a.name == b.name
    ka, kb = children(a), children(b)
    if not ka:
        return a == b
    if _grades(a) != _grades(b) or len(ka) != len(kb):
        return False
    for (ba, sa), (bb, sb) in zip(ka, kb):
        if ba != bb:
            used = all_names(sa) | all_names(sb)
            for x, y in zip(ba, bb):
                z = fresh(x, used)
                used.add(z)
                sa, sb = subst(sa, x, Var(z)), subst(sb, y, Var(z))
        if not _equal(sa, sb, fuel):
            return False
    return True


# The checker.


class PtsChecker:
    def __init__(self, spec, alg, fuel=None):
        self.spec = spec
        self.alg = alg
        self.fuel = Fuel(default_fuel() if fuel is None else fuel)

    def check(self, ctx, a, q, expected=None):
        env = self.context(ctx)
        if expected is not None:
            self.sort_of(env, expected)
        ty, usage = self._go(env, a, q, expected)
        from .check_simple import SynthResult
        discharge(SynthResult(ty, usage, [(e[0], e[2]) for e in ctx], self.alg), ctx)
        return ty

    def synth(self, ctx, a, q, expected=None):
        env = self.context(ctx)
        return self._go(env, a, q, expected)

    def context(self, ctx):
        """Validate entries left to right in the zero world."""
        env = {}
        for e in ctx:
            name, _, ty = e[0], e[1], e[2]
            d = e[3] if len(e) > 3 else None
            if name in env:
                raise CheckError(f"variable {name} assigned twice", "PTS-Weak")
            self.sort_of(env, ty)
            if d is not None:
                if not fv(d) <= set(env):
                    raise CheckError(f"definition of {name} refers to later or unknown names", "PTS-DefVar")
                self._go(env, d, self.alg.zero, ty)
            env[name] = (ty, d)
        return env

    # helpers

    def defs(self, env):
        return [(n, d) for n, (_, d) in env.items() if d is not None]

    def conv(self, env, t1, t2):
        ds = self.defs(env)
        return _equal(multi_subst(t1, ds), multi_subst(t2, ds), self.fuel)

    def require_conv(self, env, actual, expected, rule, subject):
        if not self.conv(env, actual, expected):
            ds = self.defs(env)
            na = whnf(multi_subst(actual, ds), self.fuel)
            ne = whnf(multi_subst(expected, ds), self.fuel)
            raise TypeMismatch(f"{show(subject)} has type {show(actual)} (whnf {show(na)}) but "
                               f"{show(expected)} (whnf {show(ne)}) was expected", rule)

    def head(self, env, t):
        return whnf(multi_subst(t, self.defs(env)), self.fuel)

    def sort_of(self, env, t):
        """Zero-world check that t is a type; returns its sort name."""
        ty, _ = self._go(env, t, self.alg.zero, None)
        h = self.head(env, ty)
        if not isinstance(h, Sort):
            raise TypeMismatch(f"{show(t)} has type {show(ty)}, not a sort", "PTS-Conv")
        return h.name

    def _open(self, env, x, body):
        if x not in env:
            return x, body
        nx = fresh(x, set(env) | fv(body))
        return nx, subst(body, x, Var(nx))

    def _go(self, env, a, q, exp):
        try:
            return self._rule(env, a, q, exp)
        except UsageError as err:
            for lower in self.alg.fallbacks(q):
                try:
                    return self._rule(env, a, lower, exp)
                except UsageError:
                    pass
            raise err

    def _binder(self, env, x, dom, body, q, rule):
        """Check a type family Pi/Sigma: both parts at q, binder usage ignored."""
        s1 = self.sort_of(env, dom)
        _, ud = self._go(env, dom, q, None)
        x2, body2 = self._open(env, x, body)
        inner = {**env, x2: (dom, None)}
        s2 = self.sort_of(inner, body2)
        _, ub = self._go(inner, body2, q, None)
        ub = {k: v for k, v in ub.items() if k != x2}
        s3 = next((c for a, b, c in sorted(self.spec.rules) if (a, b) == (s1, s2)), None)
        if s3 is None:
            raise CheckError(f"no rule ({s1},{s2},_) in the {self.spec.name} spec", rule)
        return Sort(s3), vector_add(ud, ub, self.alg)

    def _rule(self, env, a, q, exp):
        alg = self.alg
        zero = alg.zero
        match a:
            case Sort(s):
                up = self.spec.axiom(s)
                if up is None:
                    raise CheckError(f"no axiom for sort {s}", "PTS-Axiom")
                ty, u = Sort(up), {}
            case Var(x):
                if x not in env:
                    raise CheckError(f"unbound variable {x}", "PTS-Var")
                ty, u = env[x][0], ({} if q.is_zero() else {x: q})
            case UnitType() | IntType():
                ty, u = Sort(self.spec.base), {}
            case UnitTerm():
                ty, u = UNIT_T, {}
            case IntLit():
                ty, u = INT_T, {}
            case IntAdd(l, r):
                _, ul = self._go(env, l, q, INT_T)
                _, ur = self._go(env, r, q, INT_T)
                ty, u = INT_T, vector_add(ul, ur, alg)
            case Pi(x, _, dom, cod):
                ty, u = self._binder(env, x, dom, cod, q, "PTS-Pi")
            case Sigma(x, _, fst, snd):
                ty, u = self._binder(env, x, fst, snd, q, "PTS-Sigma")
            case Sum(l, r):
                s1, s2 = self.sort_of(env, l), self.sort_of(env, r)
                if s1 != s2:
                    raise CheckError(f"sum of types in different sorts {s1} and {s2}", "PTS-Sum")
                _, ul = self._go(env, l, q, None)
                _, ur = self._go(env, r, q, None)
                ty, u = Sort(s1), vector_add(ul, ur, alg)
            case Lam(r, x, dom, body):
                rule = "PTS-LamOmega" if alg.has_omega else "PTS-Lam"
                pi = self.head(env, exp) if exp is not None else None
                pi = pi if isinstance(pi, Pi) else None
                if dom is None:
                    if pi is None:
                        raise CheckError(f"cannot infer the domain of {x}; annotate it", rule)
                    dom = pi.dom
                else:
                    self.sort_of(env, dom)
                    if pi is not None:
                        self.require_conv(env, dom, pi.dom, rule, Var(x))
                if pi is not None and pi.r != r:
                    raise TypeMismatch(f"lambda at {r} but expected type binds at {pi.r}", rule)
                q0, q1 = alg.split_lam(q, r)
                x2, body2 = self._open(env, x, body)
                cod_exp = None if pi is None else subst(pi.cod, pi.x, Var(x2))
                b_ty, ub = self._go({**env, x2: (dom, None)}, body2, q1, cod_exp)
                ub = dict(ub)
                need = ub.pop(x2, zero)
                supply = q1 * r
                if not supply.leq(need):
                    raise UsageError(
                        f"binder {x} is supplied at {q1}*{r} = {supply} but the body needs it at {need}"
                        f" (observer grade {q} split as {q0}*{q1})", rule)
                ty = Pi(x2, r, dom, b_ty)
                self.sort_of(env, ty)
                u = vector_scale(q0, ub)
            case App(f, arg, r):
                f_ty, uf = self._go(env, f, q, None)
                h = self.head(env, f_ty)
                if not isinstance(h, Pi):
                    raise TypeMismatch(f"{show(f)} has type {show(f_ty)}, not a function", "PTS-App")
                if h.r != r:
                    raise TypeMismatch(f"function expects its argument at {h.r} but is applied at {r}",
                                       "PTS-App")
                _, ua = self._go(env, arg, q * r, h.dom)
                ty, u = subst(h.cod, h.x, arg), vector_add(uf, ua, alg)
            case Pair(a1, r, a2):
                sg = self.head(env, exp) if exp is not None else None
                if isinstance(sg, Sigma):
                    if sg.r != r:
                        raise TypeMismatch(f"pair at {r} but expected type grades it at {sg.r}", "PTS-Pair")
                    _, u1 = self._go(env, a1, q * r, sg.fst)
                    _, u2 = self._go(env, a2, q, subst(sg.snd, sg.x, a1))
                    ty = exp
                else:
                    t1, u1 = self._go(env, a1, q * r, None)
                    t2, u2 = self._go(env, a2, q, None)
                    ty = Sigma(fresh("_", fv(t2)), r, t1, t2)
                u = vector_add(u1, u2, alg)
            case LetUnit(q0, s, b):
                self._elim_grade(q0, "PTS-LetUnit")
                _, us = self._go(env, s, q * q0, UNIT_T)
                ty, ub = self._go(env, b, q, exp)
                u = vector_add(us, ub, alg)
            case LetPair(q0, x, r, y, s, b):
                self._elim_grade(q0, "PTS-LetPair")
                s_ty, us = self._go(env, s, q * q0, None)
                sg = self.head(env, s_ty)
                if not isinstance(sg, Sigma):
                    raise TypeMismatch(f"{show(s)} has type {show(s_ty)}, not a pair", "PTS-LetPair")
                if sg.r != r:
                    raise TypeMismatch(f"pair component graded {sg.r} but let binds it at {r}", "PTS-LetPair")
                x2, b2 = self._open(env, x, b)
                y2, b2 = self._open({**env, x2: None}, y, b2)
                inner = {**env, x2: (sg.fst, None), y2: (subst(sg.snd, sg.x, Var(x2)), None)}
                ty, ub = self._go(inner, b2, q, exp)
                self._motive(ty, (x2, y2), "PTS-LetPair")
                ub = dict(ub)
                nx, ny = ub.pop(x2, zero), ub.pop(y2, zero)
                sx, sy = q * q0 * r, q * q0
                if not sx.leq(nx):
                    raise UsageError(f"{x} is supplied at {sx} but the body needs it at {nx}", "PTS-LetPair")
                if not sy.leq(ny):
                    raise UsageError(f"{y} is supplied at {sy} but the body needs it at {ny}", "PTS-LetPair")
                u = vector_add(us, ub, alg)
            case Inj1(t) | Inj2(t):
                sm = self.head(env, exp) if exp is not None else None
                if not isinstance(sm, Sum):
                    raise CheckError("an injection needs an expected sum type", "PTS-Inj")
                _, u = self._go(env, t, q, sm.left if isinstance(a, Inj1) else sm.right)
                ty = exp
            case Case(q0, s, x1, b1, x2, b2):
                self._elim_grade(q0, "PTS-Case")
                s_ty, us = self._go(env, s, q * q0, None)
                sm = self.head(env, s_ty)
                if not isinstance(sm, Sum):
                    raise TypeMismatch(f"{show(s)} has type {show(s_ty)}, not a sum", "PTS-Case")
                sx = q * q0
                n1, c1 = self._open(env, x1, b1)
                t1, u1 = self._go({**env, n1: (sm.left, None)}, c1, q, exp)
                self._motive(t1, (n1,), "PTS-Case")
                n2, c2 = self._open(env, x2, b2)
                t2, u2 = self._go({**env, n2: (sm.right, None)}, c2, q, exp if exp is not None else t1)
                self._motive(t2, (n2,), "PTS-Case")
                u1, u2 = dict(u1), dict(u2)
                for n, ub, orig in ((n1, u1, x1), (n2, u2, x2)):
                    need = ub.pop(n, zero)
                    if not sx.leq(need):
                        raise UsageError(f"{orig} is supplied at {sx} but its branch needs it at {need}",
                                         "PTS-Case")
                merged = vector_glb(u1, u2, alg)
                if merged is None:
                    raise UsageError("branch usages have no common lower bound", "PTS-Case")
                ty, u = t1, vector_add(us, merged, alg)
            case _:
                raise CheckError(f"cannot check {a!r}")
        if exp is not None:
            self.require_conv(env, ty, exp, "PTS-Conv", a)
            ty = exp
        return ty, u

    def _motive(self, ty, names, rule):
        bad = fv(ty) & set(names)
        if bad:
            raise CheckError(f"result type {show(ty)} depends on pattern variable(s) {sorted(bad)}; "
                             "only non-dependent eliminations are supported", rule)

    def _elim_grade(self, q0, rule):
        if not q0.leq(self.alg.one):
            raise CheckError(f"elimination grade {q0} is not <: 1", rule)


def check_pts(spec, alg, ctx, a, q, expected=None, fuel=None):
    return PtsChecker(spec, alg, fuel).check(ctx, a, q, expected)


def accepts_pts(spec, alg, ctx, a, q, expected=None, fuel=None):
    try:
        check_pts(spec, alg, ctx, a, q, expected, fuel)
        return True
    except CheckError:
        return False
