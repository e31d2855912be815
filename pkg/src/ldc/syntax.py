"""One AST for terms, types and sorts, with substitution and printing."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Optional

from .algebra import Grade


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Lam(Term):
    r: Grade
    x: str
    dom: Optional[Term]
    body: Term


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term
    r: Grade


@dataclass(frozen=True)
class UnitTerm(Term):
    pass


@dataclass(frozen=True)
class LetUnit(Term):
    q0: Grade
    scrut: Term
    body: Term


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    r: Grade
    snd: Term


@dataclass(frozen=True)
class LetPair(Term):
    q0: Grade
    x: str
    r: Grade
    y: str
    scrut: Term
    body: Term


@dataclass(frozen=True)
class Inj1(Term):
    t: Term


@dataclass(frozen=True)
class Inj2(Term):
    t: Term


@dataclass(frozen=True)
class Case(Term):
    q0: Grade
    scrut: Term
    x1: str
    b1: Term
    x2: str
    b2: Term


@dataclass(frozen=True)
class Sort(Term):
    name: str


@dataclass(frozen=True)
class Pi(Term):
    x: str
    r: Grade
    dom: Term
    cod: Term


@dataclass(frozen=True)
class Sigma(Term):
    x: str
    r: Grade
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class UnitType(Term):
    pass


@dataclass(frozen=True)
class IntLit(Term):
    n: int


@dataclass(frozen=True)
class IntAdd(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class IntType(Term):
    pass


@dataclass(frozen=True)
class Meta(Term):
    """Unification variable; only ever appears inside inferred types."""
    n: int


UNIT = UnitTerm()
UNIT_T = UnitType()
INT_T = IntType()


def bool_type():
    return Sum(UNIT_T, UNIT_T)


TRUE = Inj1(UNIT)
FALSE = Inj2(UNIT)

VALUE_TYPES = (Lam, Pair, UnitTerm, Inj1, Inj2, Sort, Pi, Sigma, Sum, UnitType, IntType, IntLit)


def is_value(a):
    return isinstance(a, VALUE_TYPES)


# Binding structure: (binder name, subterm it scopes over) per node kind.


def children(a):
    """Immediate subterms paired with the binders in scope over each."""
    match a:
        case Var() | UnitTerm() | Sort() | UnitType() | IntLit() | IntType() | Meta():
            return []
        case Lam(_, x, dom, body):
            return ([((), dom)] if dom is not None else []) + [((x,), body)]
        case App(f, arg, _):
            return [((), f), ((), arg)]
        case LetUnit(_, s, b):
            return [((), s), ((), b)]
        case Pair(a1, _, a2):
            return [((), a1), ((), a2)]
        case LetPair(_, x, _, y, s, b):
            return [((), s), ((x, y), b)]
        case Inj1(t) | Inj2(t):
            return [((), t)]
        case Case(_, s, x1, b1, x2, b2):
            return [((), s), ((x1,), b1), ((x2,), b2)]
        case Pi(x, _, dom, cod):
            return [((), dom), ((x,), cod)]
        case Sigma(x, _, a1, a2):
            return [((), a1), ((x,), a2)]
        case Sum(l, r) | IntAdd(l, r):
            return [((), l), ((), r)]
    raise TypeError(f"not a term: {a!r}")


def fv(a):
    match a:
        case Var(x):
            return {x}
        case _:
            out = set()
            for binders, sub in children(a):
                out |= fv(sub) - set(binders)
            return out


def all_names(a):
    """Free and bound names occurring anywhere in a."""
    out = set()
    match a:
        case Var(x):
            out.add(x)
        case Lam(_, x, _, _) | Pi(x, _, _, _) | Sigma(x, _, _, _):
            out.add(x)
        case LetPair(_, x, _, y, _, _):
            out |= {x, y}
        case Case(_, _, x1, _, x2, _):
            out |= {x1, x2}
    for _, sub in children(a):
        out |= all_names(sub)
    return out


def metas(a):
    if isinstance(a, Meta):
        return {a.n}
    out = set()
    for _, sub in children(a):
        out |= metas(sub)
    return out


_SUFFIX = re.compile(r"^(.*?)(\d+)$")


def fresh(base, avoid):
    """A name derived from base that is not in avoid."""
    if base not in avoid and base != "_":
        return base
    stem = _SUFFIX.sub(r"\1", base.rstrip("'")) or "v"
    if stem == "_":
        stem = "v"
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand


def rebuild(a, subs):
    """Rebuild node a with its children replaced (same order as children())."""
    match a:
        case Lam(r, x, dom, _):
            if dom is None:
                return Lam(r, x, None, subs[0])
            return Lam(r, x, subs[0], subs[1])
        case App(_, _, r):
            return App(subs[0], subs[1], r)
        case LetUnit(q0, _, _):
            return LetUnit(q0, subs[0], subs[1])
        case Pair(_, r, _):
            return Pair(subs[0], r, subs[1])
        case LetPair(q0, x, r, y, _, _):
            return LetPair(q0, x, r, y, subs[0], subs[1])
        case Inj1():
            return Inj1(subs[0])
        case Inj2():
            return Inj2(subs[0])
        case Case(q0, _, x1, _, x2, _):
            return Case(q0, subs[0], x1, subs[1], x2, subs[2])
        case Pi(x, r, _, _):
            return Pi(x, r, subs[0], subs[1])
        case Sigma(x, r, _, _):
            return Sigma(x, r, subs[0], subs[1])
        case Sum():
            return Sum(subs[0], subs[1])
        case IntAdd():
            return IntAdd(subs[0], subs[1])
    return a


def rename_binders(a, mapping):
    """Rename the binders of node a (not its free variables) by mapping."""
    m = lambda n: mapping.get(n, n)
    match a:
        case Lam(r, x, dom, body):
            return Lam(r, m(x), dom, body)
        case LetPair(q0, x, r, y, s, b):
            return LetPair(q0, m(x), r, m(y), s, b)
        case Case(q0, s, x1, b1, x2, b2):
            return Case(q0, s, m(x1), b1, m(x2), b2)
        case Pi(x, r, dom, cod):
            return Pi(m(x), r, dom, cod)
        case Sigma(x, r, a1, a2):
            return Sigma(m(x), r, a1, a2)
    return a


def subst(body, name, repl):
    """Capture-avoiding substitution body{repl/name}."""
    return subst_many(body, {name: repl})


def subst_many(body, sigma):
    """Simultaneous capture-avoiding substitution."""
    if not sigma:
        return body
    repl_fv = set()
    for t in sigma.values():
        repl_fv |= fv(t)
    return _subst(body, sigma, repl_fv)


def _subst(a, sigma, repl_fv):
    match a:
        case Var(x):
            return sigma.get(x, a)
        case UnitTerm() | Sort() | UnitType() | IntLit() | IntType() | Meta():
            return a
    kids = children(a)
    new = []
    renames = {}
    bound_all = {b for binders, _ in kids for b in binders}
    if bound_all & repl_fv:
        avoid = repl_fv | fv(a) | set(sigma) | all_names(a)
        for b in bound_all:
            if b in repl_fv:
                nb = fresh(b, avoid)
                avoid.add(nb)
                renames[b] = nb
    for binders, sub in kids:
        inner = {k: v for k, v in sigma.items() if k not in binders}
        local = {b: Var(renames[b]) for b in binders if b in renames}
        if local:
            sub = _subst(sub, local, set(renames.values()))
        if inner:
            new.append(_subst(sub, inner, repl_fv))
        else:
            new.append(sub)
    out = rebuild(a, new)
    return rename_binders(out, renames) if renames else out


def multi_subst(a, defs):
    """Fold definitions (name, term) into a, last definition first."""
    for name, d in reversed(list(defs)):
        a = subst(a, name, d)
    return a


def alpha_eq(a, b):
    return _alpha(a, b, {}, {}, itertools.count())


def _alpha(a, b, ea, eb, counter):
    if type(a) is not type(b):
        return False
    match a:
        case Var(x):
            return ea.get(x, ("free", x)) == eb.get(b.name, ("free", b.name))
        case Meta(n):
            return n == b.n
        case Sort(s):
            return s == b.name
        case IntLit(n):
            return n == b.n
        case UnitTerm() | UnitType() | IntType():
            return True
    if _grades(a) != _grades(b):
        return False
    ka, kb = children(a), children(b)
    if len(ka) != len(kb):
        return False
    for (ba, sa), (bb, sb) in zip(ka, kb):
        if len(ba) != len(bb):
            return False
        na, nb = dict(ea), dict(eb)
        for x, y in zip(ba, bb):
            tag = ("bound", next(counter))
            na[x] = tag
            nb[y] = tag
        if not _alpha(sa, sb, na, nb, counter):
            return False
    return True


def _grades(a):
    match a:
        case Lam(r, _, dom, _):
            return (r, dom is None)
        case App(_, _, r) | Pair(_, r, _) | Pi(_, r, _, _) | Sigma(_, r, _, _):
            return (r,)
        case LetUnit(q0, _, _) | Case(q0, _, _, _, _, _):
            return (q0,)
        case LetPair(q0, _, r, _, _, _):
            return (q0, r)
    return ()


def size(a):
    return 1 + sum(size(s) for _, s in children(a))


# Printing. The output is accepted by parser.parse.

_PREC_BINDER, _PREC_ARROW, _PREC_SUM, _PREC_PROD, _PREC_APP, _PREC_ATOM = range(6)


def looks_like_type(a):
    match a:
        case UnitType() | IntType() | Sort() | Pi() | Sigma() | Sum() | Meta():
            return True
        case Var(x):
            return x[:1].isupper()
    return False


def show(a, default=None):
    """Render a term; default is the grade elided when printing annotations."""
    return _show(a, _PREC_BINDER, default)


def _g(g):
    s = str(g)
    return s


def _paren(s, prec, need):
    return f"({s})" if prec > need else s


def _show(a, prec, d):
    match a:
        case Var(x):
            return x
        case Meta(n):
            return f"?{n}"
        case Sort(s):
            return s
        case UnitTerm():
            return "unit"
        case UnitType():
            return "Unit"
        case IntType():
            return "Int"
        case IntLit(n):
            return str(n)
        case Inj1(UnitTerm()):
            return "true"
        case Inj2(UnitTerm()):
            return "false"
        case Sum(UnitType(), UnitType()):
            return "Bool"
        case Lam(r, x, dom, body):
            ann = f":{_show(dom, _PREC_BINDER, d)}" if dom is not None else ""
            s = f"\\^{_g(r)} {x}{ann}. {_show(body, _PREC_BINDER, d)}"
            return _paren(s, prec, _PREC_BINDER)
        case LetUnit(q0, s, b):
            t = f"let_{_g(q0)} unit = {_show(s, _PREC_BINDER, d)} in {_show(b, _PREC_BINDER, d)}"
            return _paren(t, prec, _PREC_BINDER)
        case LetPair(q0, x, r, y, s, b):
            t = (f"let_{_g(q0)} ({x}^{_g(r)}, {y}) = {_show(s, _PREC_BINDER, d)} "
                 f"in {_show(b, _PREC_BINDER, d)}")
            return _paren(t, prec, _PREC_BINDER)
        case Case(q0, s, x1, b1, x2, b2):
            t = (f"case_{_g(q0)} {_show(s, _PREC_BINDER, d)} of {x1}. {_show(b1, _PREC_BINDER, d)} ; "
                 f"{x2}. {_show(b2, _PREC_BINDER, d)}")
            return _paren(t, prec, _PREC_BINDER)
        case Pi(x, r, dom, cod):
            if x not in fv(cod):
                t = f"{{}}^{_g(r)} {_show(dom, _PREC_APP, d)} -> {_show(cod, _PREC_ARROW, d)}"
                return _paren(t, prec, _PREC_ARROW)
            t = f"Pi {x}:^{_g(r)} {_show(dom, _PREC_ARROW, d)}. {_show(cod, _PREC_BINDER, d)}"
            return _paren(t, prec, _PREC_BINDER)
        case Sigma(x, r, a1, a2):
            if x not in fv(a2):
                t = f"{{}}^{_g(r)} {_show(a1, _PREC_APP, d)} * {_show(a2, _PREC_PROD, d)}"
                return _paren(t, prec, _PREC_PROD)
            t = f"Sigma {x}:^{_g(r)} {_show(a1, _PREC_ARROW, d)}. {_show(a2, _PREC_BINDER, d)}"
            return _paren(t, prec, _PREC_BINDER)
        case Sum(l, r):
            if looks_like_type(l) or looks_like_type(r):
                t = f"{_show(l, _PREC_SUM, d)} + {_show(r, _PREC_PROD, d)}"
                return _paren(t, prec, _PREC_SUM)
            return f"sum({_show(l, _PREC_BINDER, d)}, {_show(r, _PREC_BINDER, d)})"
        case IntAdd(l, r):
            if not (looks_like_type(l) or looks_like_type(r)):
                t = f"{_show(l, _PREC_SUM, d)} + {_show(r, _PREC_PROD, d)}"
                return _paren(t, prec, _PREC_SUM)
            return f"add({_show(l, _PREC_BINDER, d)}, {_show(r, _PREC_BINDER, d)})"
        case Pair(a1, r, a2):
            first = _show(a1, _PREC_ATOM, d)
            return f"({first}^{_g(r)}, {_show(a2, _PREC_BINDER, d)})"
        case Inj1(t) | Inj2(t):
            kw = "inj1" if isinstance(a, Inj1) else "inj2"
            return _paren(f"{kw} {_show(t, _PREC_ATOM, d)}", prec, _PREC_APP)
        case App(f, arg, r):
            t = f"{_show(f, _PREC_APP, d)} {_show(arg, _PREC_ATOM, d)}^{_g(r)}"
            return _paren(t, prec, _PREC_APP)
    raise TypeError(f"cannot print {a!r}")
