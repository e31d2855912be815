"""Checker for the simply-typed fragment by principal usage synthesis."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import vector_add, vector_glb, vector_scale
from .errors import CheckError, TypeMismatch, UsageError
from .syntax import (
    INT_T, UNIT_T, App, Case, Inj1, Inj2, IntAdd, IntLit, IntType, Lam, LetPair, LetUnit, Meta,
    Pair, Pi, Sigma, Sort, Sum, UnitTerm, UnitType, Var, fresh, fv, show, subst,
)
from .unify import MetaStore, UnifyError, unify


@dataclass
class SynthResult:
    type: object
    usage: dict
    skeleton: list
    algebra: object

    @property
    def principal(self):
        """The usage vector aligned with the skeleton."""
        return [(name, self.usage.get(name, self.algebra.zero)) for name, _ in self.skeleton]


def is_simple_type(t):
    match t:
        case UnitType() | IntType() | Var() | Meta():
            return True
        case Sum(l, r):
            return is_simple_type(l) and is_simple_type(r)
        case Pi(x, _, dom, cod):
            return x not in fv(cod) and is_simple_type(dom) and is_simple_type(cod)
        case Sigma(x, _, a1, a2):
            return x not in fv(a2) and is_simple_type(a1) and is_simple_type(a2)
    return False


def lam_rule(alg):
    return "ST-LamOmega" if alg.has_omega else "ST-Lam"


class SimpleChecker:
    def __init__(self, alg):
        self.alg = alg
        self.metas = MetaStore()

    # public API

    def synth(self, skeleton, a, q, expected=None):
        skeleton = list(skeleton)
        env = {}
        for name, ty in skeleton:
            if name in env:
                raise CheckError(f"variable {name} assigned twice", "context")
            self._simple(ty, f"type of {name}")
            env[name] = ty
        if expected is not None:
            self._simple(expected, "expected type")
        ty, u = self._go(env, a, q, expected)
        return SynthResult(self.metas.zonk(ty), u, skeleton, self.alg)

    def check(self, ctx, a, q, expected=None):
        res = self.synth([(e[0], e[2]) for e in ctx], a, q, expected)
        discharge(res, ctx)
        return res.type

    # internals

    def _simple(self, t, what):
        if not is_simple_type(t):
            raise CheckError(f"{what} is not a simple type: {show(t)}", "simple-fragment")

    def _unify(self, actual, expected, rule, subject):
        try:
            unify(actual, expected, self.metas)
        except UnifyError as e:
            raise TypeMismatch(
                f"{show(subject)} has type {show(self.metas.zonk(actual))} but "
                f"{show(self.metas.zonk(expected))} was expected ({e})", rule) from None

    def _shape(self, t, cls):
        if t is None:
            return None
        t = self.metas.resolve(t)
        return t if isinstance(t, cls) else None

    def _open(self, env, x, body):
        """Rename binder x away from env so contexts stay duplicate-free."""
        if x not in env:
            return x, body
        nx = fresh(x, set(env) | fv(body))
        return nx, subst(body, x, Var(nx))

    def effective_grade(self, skeleton, a, q, expected=None):
        """The grade at which a's outermost rule applies: q, or the SubR fallback below it."""
        env = dict(skeleton)
        return self._root(env, a, q, expected)[2]

    def _go(self, env, a, q, exp):
        ty, u, _ = self._root(env, a, q, exp)
        return ty, u

    def _root(self, env, a, q, exp):
        try:
            return (*self._rule(env, a, q, exp), q)
        except UsageError as err:
            for lower in self.alg.fallbacks(q):
                try:
                    return (*self._rule(env, a, lower, exp), lower)
                except UsageError:
                    pass
            raise err

    def _rule(self, env, a, q, exp):
        alg = self.alg
        zero = alg.zero
        match a:
            case Var(x):
                if x not in env:
                    raise CheckError(f"unbound variable {x}", "ST-Var")
                ty, u = env[x], ({} if q.is_zero() else {x: q})
            case UnitTerm():
                ty, u = UNIT_T, {}
            case IntLit():
                ty, u = INT_T, {}
            case IntAdd(l, r):
                _, ul = self._go(env, l, q, INT_T)
                _, ur = self._go(env, r, q, INT_T)
                ty, u = INT_T, vector_add(ul, ur, alg)
            case Lam(r, x, dom, body):
                pi = self._shape(exp, Pi)
                if dom is None:
                    dom_t = pi.dom if pi is not None else self.metas.new()
                else:
                    self._simple(dom, f"domain of {x}")
                    dom_t = dom
                    if pi is not None:
                        self._unify(dom, pi.dom, lam_rule(alg), Var(x))
                q0, q1 = alg.split_lam(q, r)
                x2, body2 = self._open(env, x, body)
                cod_exp = None if pi is None else pi.cod
                b_ty, ub = self._go({**env, x2: dom_t}, body2, q1, cod_exp)
                ub = dict(ub)
                need = ub.pop(x2, zero)
                supply = q1 * r
                if not supply.leq(need):
                    raise UsageError(
                        f"binder {x} is supplied at {q1}*{r} = {supply} but the body needs it at {need}"
                        f" (observer grade {q} split as {q0}*{q1})", lam_rule(alg))
                ty = Pi(fresh("_", fv(b_ty)), r, dom_t, b_ty)
                u = vector_scale(q0, ub)
            case App(f, arg, r):
                f_ty, uf = self._go(env, f, q, None)
                f_ty = self.metas.resolve(f_ty)
                if isinstance(f_ty, Meta):
                    fresh_pi = Pi("_", r, self.metas.new(), self.metas.new())
                    self.metas.bind(f_ty, fresh_pi)
                    f_ty = fresh_pi
                if not isinstance(f_ty, Pi):
                    raise TypeMismatch(f"{show(f)} has type {show(self.metas.zonk(f_ty))}, not a function",
                                       "ST-App")
                if f_ty.r != r:
                    raise TypeMismatch(f"function expects its argument at {f_ty.r} but is applied at {r}",
                                       "ST-App")
                _, ua = self._go(env, arg, q * r, f_ty.dom)
                ty, u = f_ty.cod, vector_add(uf, ua, alg)
            case Pair(a1, r, a2):
                sg = self._shape(exp, Sigma)
                t1, u1 = self._go(env, a1, q * r, None if sg is None else sg.fst)
                t2, u2 = self._go(env, a2, q, None if sg is None else sg.snd)
                ty, u = Sigma("_", r, t1, t2), vector_add(u1, u2, alg)
            case LetUnit(q0, s, b):
                self._elim_grade(q0, "ST-LetUnit")
                _, us = self._go(env, s, q * q0, UNIT_T)
                ty, ub = self._go(env, b, q, exp)
                u = vector_add(us, ub, alg)
            case LetPair(q0, x, r, y, s, b):
                self._elim_grade(q0, "ST-LetPair")
                s_ty, us = self._go(env, s, q * q0, None)
                s_ty = self.metas.resolve(s_ty)
                if isinstance(s_ty, Meta):
                    fresh_sg = Sigma("_", r, self.metas.new(), self.metas.new())
                    self.metas.bind(s_ty, fresh_sg)
                    s_ty = fresh_sg
                if not isinstance(s_ty, Sigma):
                    raise TypeMismatch(f"{show(s)} has type {show(self.metas.zonk(s_ty))}, not a pair",
                                       "ST-LetPair")
                if s_ty.r != r:
                    raise TypeMismatch(f"pair component graded {s_ty.r} but let binds it at {r}",
                                       "ST-LetPair")
                x2, b2 = self._open(env, x, b)
                y2, b2 = self._open({**env, x2: None}, y, b2)
                ty, ub = self._go({**env, x2: s_ty.fst, y2: s_ty.snd}, b2, q, exp)
                ub = dict(ub)
                nx, ny = ub.pop(x2, zero), ub.pop(y2, zero)
                sx, sy = q * q0 * r, q * q0
                if not sx.leq(nx):
                    raise UsageError(f"{x} is supplied at {sx} but the body needs it at {nx}", "ST-LetPair")
                if not sy.leq(ny):
                    raise UsageError(f"{y} is supplied at {sy} but the body needs it at {ny}", "ST-LetPair")
                u = vector_add(us, ub, alg)
            case Inj1(t) | Inj2(t):
                sm = self._shape(exp, Sum)
                left = isinstance(a, Inj1)
                want = None if sm is None else (sm.left if left else sm.right)
                t_ty, u = self._go(env, t, q, want)
                other = self.metas.new() if sm is None else (sm.right if left else sm.left)
                ty = Sum(t_ty, other) if left else Sum(other, t_ty)
            case Case(q0, s, x1, b1, x2, b2):
                self._elim_grade(q0, "ST-Case")
                s_ty, us = self._go(env, s, q * q0, None)
                s_ty = self.metas.resolve(s_ty)
                if isinstance(s_ty, Meta):
                    fresh_sum = Sum(self.metas.new(), self.metas.new())
                    self.metas.bind(s_ty, fresh_sum)
                    s_ty = fresh_sum
                if not isinstance(s_ty, Sum):
                    raise TypeMismatch(f"{show(s)} has type {show(self.metas.zonk(s_ty))}, not a sum",
                                       "ST-Case")
                sx = q * q0
                n1, c1 = self._open(env, x1, b1)
                t1, u1 = self._go({**env, n1: s_ty.left}, c1, q, exp)
                n2, c2 = self._open(env, x2, b2)
                t2, u2 = self._go({**env, n2: s_ty.right}, c2, q, exp if exp is not None else t1)
                self._unify(t2, t1, "ST-Case", b2)
                u1, u2 = dict(u1), dict(u2)
                for n, ub, orig in ((n1, u1, x1), (n2, u2, x2)):
                    need = ub.pop(n, zero)
                    if not sx.leq(need):
                        raise UsageError(f"{orig} is supplied at {sx} but its branch needs it at {need}",
                                         "ST-Case")
                merged = vector_glb(u1, u2, alg)
                if merged is None:
                    bad = next(k for k in set(u1) | set(u2)
                               if alg.glb(u1.get(k, zero), u2.get(k, zero)) is None)
                    raise UsageError(
                        f"branches need {bad} at {u1.get(bad, zero)} and {u2.get(bad, zero)}, "
                        "which have no common lower bound", "ST-Case")
                ty, u = t1, vector_add(us, merged, alg)
            case Sort() | Pi() | Sigma() | Sum() | UnitType() | IntType():
                raise CheckError(f"{show(a)} is a type, not a term of the simple fragment",
                                 "simple-fragment")
            case _:
                raise CheckError(f"cannot check {a!r}")
        if exp is not None:
            self._unify(ty, exp, _rule_name(a, alg), a)
        return ty, u

    def _elim_grade(self, q0, rule):
        if not q0.leq(self.alg.one):
            raise CheckError(f"elimination grade {q0} is not <: 1", rule)


def discharge(res, ctx):
    """ST-SubL: the declared grades must sit below the principal usage."""
    zero = res.algebra.zero
    for e in ctx:
        name, g = e[0], e[1]
        need = res.usage.get(name, zero)
        if not g.leq(need):
            raise UsageError(f"{name} is available at {g} but the term needs it at {need}", "ST-SubL")


def _rule_name(a, alg):
    names = {Var: "ST-Var", Lam: lam_rule(alg), App: "ST-App", Pair: "ST-Pair",
             LetPair: "ST-LetPair", LetUnit: "ST-LetUnit", Inj1: "ST-Inj1", Inj2: "ST-Inj2",
             Case: "ST-Case", UnitTerm: "ST-Unit", IntLit: "ST-Int", IntAdd: "ST-Add"}
    return names.get(type(a), "ST-Conv")


def synth(alg, skeleton, a, q, expected=None):
    return SimpleChecker(alg).synth(skeleton, a, q, expected)


def check(alg, ctx, a, q, expected=None):
    return SimpleChecker(alg).check(ctx, a, q, expected)


def accepts(alg, ctx, a, q, expected=None):
    try:
        check(alg, ctx, a, q, expected)
        return True
    except CheckError:
        return False
