"""Brute-force search over the declarative simply-typed rules, used as ground truth.

Types are inferred by a separate plain unifier; grades are searched exhaustively
over a finite candidate set with subsumption allowed at every node.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import OMEGA, NatAlgebra, Product
from .check_simple import SimpleChecker, discharge
from .errors import CheckError
from .plain import infer_plain, plain_typable
from .syntax import App, Case, Inj1, Inj2, IntAdd, IntLit, Lam, LetPair, LetUnit, Pair, UnitTerm, Var, fv, size


class BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_size: int = 14
    max_depth: int = 40
    grades: tuple = ()


def candidate_values(alg):
    c = alg.carrier_v()
    if c is not None:
        return list(c)
    if isinstance(alg, NatAlgebra):
        return [0, 1, 2, 3] + ([OMEGA] if alg.has_omega else [])
    if isinstance(alg, Product):
        return list(itertools.product(candidate_values(alg.left), candidate_values(alg.right)))
    raise ValueError(f"no candidate grades for {alg.name}")


def default_budget(alg):
    return SearchBudget(grades=tuple(alg.grade(v) for v in candidate_values(alg)))


# Grade search.


def _omega_ok(alg, q1, r):
    if isinstance(alg, Product):
        return _omega_ok(alg.left, q1[0], r[0]) and _omega_ok(alg.right, q1[1], r[1])
    if alg.has_omega:
        return not (q1 is OMEGA and r is not OMEGA)
    return True


class _Search:
    def __init__(self, alg, budget):
        self.alg = alg
        self.budget = budget
        self.cands = [g.value for g in budget.grades] or candidate_values(alg)
        self.one = alg.one_v
        self.zero = alg.zero_v
        self.memo = {}
        self.fv = lru_cache(maxsize=None)(fv)

    def pool(self, v, alg=None):
        alg = alg or self.alg
        if isinstance(alg, Product):
            return list(itertools.product(self.pool(v[0], alg.left), self.pool(v[1], alg.right)))
        base = set(candidate_values(alg) if alg is not self.alg else self.cands)
        if isinstance(alg, NatAlgebra) and v is not OMEGA:
            base |= set(range(v + 1))
        base.add(v)
        base.add(alg.zero_v)
        return list(base)

    def splits(self, v):
        add = self.alg.add_v
        p = self.pool(v)
        return [(a, b) for a in p for b in p if add(a, b) == v]

    def ups(self, v):
        leq = self.alg.leq_v
        out = {c for c in self.cands if leq(v, c)}
        out.add(v)
        return out

    def downs(self, v):
        leq = self.alg.leq_v
        out = {c for c in self.cands if leq(c, v)}
        out.add(v)
        return out

    def derivable(self, gamma, a, q, depth=0):
        """D: some derivation of gamma |- a :^q, allowing SubL and SubR at the root."""
        if depth > self.budget.max_depth:
            raise BudgetExhausted(f"depth {depth}")
        free = self.fv(a)
        leq = self.alg.leq_v
        for n, g in gamma.items():
            if n not in free and not leq(g, self.zero):
                return False
        g_free = tuple(sorted((n, g) for n, g in gamma.items() if n in free))
        key = (a, g_free, q)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = False
        names = [n for n, _ in g_free]
        result = False
        for q2 in self.downs(q):
            for vals in itertools.product(*[self.ups(g) for _, g in g_free]):
                if self.rule(dict(zip(names, vals)), a, q2, depth):
                    result = True
                    break
            if result:
                break
        self.memo[key] = result
        return result

    def split_ctx(self, gamma):
        names = list(gamma)
        for parts in itertools.product(*[self.splits(gamma[n]) for n in names]):
            yield ({n: p[0] for n, p in zip(names, parts)}, {n: p[1] for n, p in zip(names, parts)})

    def rule(self, gamma, a, q, depth):
        alg = self.alg
        mul, leq = alg.mul_v, alg.leq_v
        d = depth + 1
        D = self.derivable
        match a:
            case Var(x):
                return gamma.get(x) == q and all(v == self.zero for n, v in gamma.items() if n != x)
            case UnitTerm() | IntLit():
                return all(v == self.zero for v in gamma.values())
            case Inj1(t) | Inj2(t):
                return D(gamma, t, q, d)
            case Lam(r, x, _, body):
                rv = r.value
                if not alg.has_omega:
                    return D({**gamma, x: mul(q, rv)}, body, q, d)
                for q0 in self.pool(q):
                    if q0 == self.zero:
                        continue
                    for q1 in self.pool(q):
                        if mul(q0, q1) != q or not _omega_ok(alg, q1, rv):
                            continue
                        names = list(gamma)
                        options = [[c for c in self.pool(gamma[n]) if mul(q0, c) == gamma[n]] for n in names]
                        for vals in itertools.product(*options):
                            inner = dict(zip(names, vals))
                            inner[x] = mul(q1, rv)
                            if D(inner, body, q1, d):
                                return True
                return False
            case App(f, arg, r):
                return any(D(g1, f, q, d) and D(g2, arg, mul(q, r.value), d)
                           for g1, g2 in self.split_ctx(gamma))
            case Pair(a1, r, a2):
                return any(D(g1, a1, mul(q, r.value), d) and D(g2, a2, q, d)
                           for g1, g2 in self.split_ctx(gamma))
            case IntAdd(l, r):
                return any(D(g1, l, q, d) and D(g2, r, q, d) for g1, g2 in self.split_ctx(gamma))
            case LetUnit(q0, s, b):
                if not leq(q0.value, self.one):
                    return False
                return any(D(g1, s, mul(q, q0.value), d) and D(g2, b, q, d)
                           for g1, g2 in self.split_ctx(gamma))
            case LetPair(q0, x, r, y, s, b):
                if not leq(q0.value, self.one):
                    return False
                qq0 = mul(q, q0.value)
                return any(D(g1, s, qq0, d) and D({**g2, x: mul(qq0, r.value), y: qq0}, b, q, d)
                           for g1, g2 in self.split_ctx(gamma))
            case Case(q0, s, x1, b1, x2, b2):
                if not leq(q0.value, self.one):
                    return False
                qq0 = mul(q, q0.value)
                return any(D(g1, s, qq0, d) and D({**g2, x1: qq0}, b1, q, d)
                           and D({**g2, x2: qq0}, b2, q, d)
                           for g1, g2 in self.split_ctx(gamma))
        return False


def derivable(alg, ctx, a, q, ty, budget=None):
    """Whether the declarative rules derive ctx |- a :^q ty within the budget."""
    budget = budget or default_budget(alg)
    if size(a) > budget.max_size:
        raise BudgetExhausted(f"term size {size(a)} exceeds {budget.max_size}")
    if not plain_typable([(n, t) for n, _, t, *_ in ctx], a, ty):
        return False
    names = [e[0] for e in ctx]
    if len(set(names)) != len(names):
        return False
    s = _Search(alg, budget)
    return s.derivable({e[0]: e[1].value for e in ctx}, a, q.value)


# Audit: exhaustive enumeration compared against the algorithmic checker.


def enumerate_terms(n, scope, grades, elim_grades):
    """All simple-fragment terms of exactly n nodes over the names in scope."""
    return list(_enum(n, tuple(scope), tuple(grades), tuple(elim_grades), 0))


@lru_cache(maxsize=None)
def _enum_cached(n, scope, grades, elims, depth):
    return tuple(_enum(n, scope, grades, elims, depth))


def _enum(n, scope, grades, elims, depth):
    if n <= 0:
        return
    if n == 1:
        for v in scope:
            yield Var(v)
        yield UnitTerm()
        return
    sub = lambda m, extra=(): _enum_cached(m, scope + extra, grades, elims, depth + 1)
    z, w = f"z{depth}", f"w{depth}"
    for t in sub(n - 1):
        yield Inj1(t)
        yield Inj2(t)
    for r in grades:
        for t in sub(n - 1, (z,)):
            yield Lam(r, z, None, t)
    for i in range(1, n - 1):
        j = n - 1 - i
        for t1 in sub(i):
            for t2 in sub(j):
                for r in grades:
                    yield App(t1, t2, r)
                    yield Pair(t1, r, t2)
                for q0 in elims:
                    yield LetUnit(q0, t1, t2)
        for q0 in elims:
            for r in grades:
                for t1 in sub(i):
                    for t2 in sub(j, (z, w)):
                        yield LetPair(q0, z, r, w, t1, t2)
    for i in range(1, n - 2):
        for j in range(1, n - 1 - i):
            k = n - 1 - i - j
            for q0 in elims:
                for t1 in sub(i):
                    for t2 in sub(j, (z,)):
                        for t3 in sub(k, (w,)):
                            yield Case(q0, t1, z, t2, w, t3)


@dataclass
class Divergence:
    term: object
    ctx: list
    grade: object
    type: object
    checker: bool
    oracle: bool

    @property
    def kind(self):
        return "soundness" if self.checker and not self.oracle else "completeness"


@dataclass
class AuditReport:
    algebra: str
    terms: int = 0
    typable: int = 0
    judgments: int = 0
    divergences: list = field(default_factory=list)

    @property
    def soundness(self):
        return [d for d in self.divergences if d.kind == "soundness"]

    @property
    def completeness(self):
        return [d for d in self.divergences if d.kind == "completeness"]


def _discharges(res, ctx):
    try:
        discharge(res, ctx)
        return True
    except CheckError:
        return False


def audit(alg, max_size=5, grades=None, variables=("x", "y"), terms=None, progress=None):
    """Compare the algorithmic checker with derivation search on every small judgment."""
    grades = list(grades) if grades is not None else [alg.grade(v) for v in candidate_values(alg)]
    elims = [g for g in grades if g.leq(alg.one)]
    budget = SearchBudget(grades=tuple(grades))
    report = AuditReport(alg.name)
    search = _Search(alg, budget)
    if terms is None:
        terms = itertools.chain.from_iterable(
            enumerate_terms(n, variables, grades, elims) for n in range(1, max_size + 1))
    for a in terms:
        report.terms += 1
        inferred = infer_plain(a, list(variables))
        if inferred is None:
            continue
        report.typable += 1
        ctx_types, ty = inferred
        for q in grades:
            try:
                res = SimpleChecker(alg).synth(ctx_types, a, q, ty)
            except CheckError:
                res = None
            for gs in itertools.product(grades, repeat=len(variables)):
                ctx = [(n, g, t) for (n, t), g in zip(ctx_types, gs)]
                report.judgments += 1
                ours = res is not None and _discharges(res, ctx)
                theirs = search.derivable({n: g.value for n, g, _ in ctx}, a, q.value)
                if ours != theirs:
                    report.divergences.append(Divergence(a, ctx, q, ty, ours, theirs))
        if progress:
            progress(report)
    return report
