"""Weighted-heap reduction, compatibility, traces and the harnesses built on them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import OMEGA, NatAlgebra, Product, vector_add
from .check_simple import SimpleChecker
from .errors import CheckError
from .eval_cbn import Stepped, Stuck, Value, step
from .plain import infer_config
from .syntax import (
    App, Case, Inj1, Inj2, IntAdd, IntLit, Lam, LetPair, LetUnit, Pair, UnitTerm, Var,
    all_names, alpha_eq, fresh, fv, is_value, multi_subst, show, subst, subst_many,
)


@dataclass(frozen=True)
class Heap:
    bindings: tuple = ()
    support: frozenset = frozenset()

    @staticmethod
    def of(entries, support=()):
        h = Heap(tuple((n, g, t) for n, g, t in entries), frozenset(support))
        h.validate()
        return h

    def validate(self):
        seen = set()
        for n, _, t in self.bindings:
            if n in seen:
                raise ValueError(f"{n} is defined twice")
            if not fv(t) <= seen:
                raise ValueError(f"definition of {n} refers to {sorted(fv(t) - seen)} not defined before it")
            seen.add(n)

    @property
    def names(self):
        return [n for n, _, _ in self.bindings]

    def lookup(self, x):
        for n, g, t in self.bindings:
            if n == x:
                return g, t
        return None

    def grade(self, x):
        e = self.lookup(x)
        return None if e is None else e[0]

    def set_grade(self, x, g):
        return Heap(tuple((n, g if n == x else h, t) for n, h, t in self.bindings), self.support)

    def extend(self, *entries):
        return Heap(self.bindings + tuple(entries), self.support)

    def replace(self, x, t):
        return Heap(tuple((n, g, t if n == x else d) for n, g, d in self.bindings), self.support)

    def defs(self):
        return [(n, t) for n, _, t in self.bindings]

    def fold(self, a):
        """Substitute the definitions into a, last binding first."""
        return multi_subst(a, self.defs())

    def __str__(self):
        return "[" + ", ".join(f"{n} ^{g} = {show(t)}" for n, g, t in self.bindings) + "]"


@dataclass(frozen=True)
class TraceEntry:
    heap_before: Heap
    term_before: object
    grade: object
    rule: str
    looked_up: str | None
    heap_after: Heap
    term_after: object


@dataclass(frozen=True)
class HeapStepped:
    heap: Heap
    term: object
    entry: TraceEntry


def heap_step(h, a, q, support=frozenset(), discard=None):
    """One deterministic step of [h] a at grade q; Value or Stuck otherwise.

    Grade 0 is not refused here: in a two-point lattice the high level is also the
    top element, and lookups at it must go through. Callers that need q != 0 check it.
    `discard(heap, term, q)` may pick a grade below q to step a redex at (HeapStep-Discard).
    """
    out = _step(h, a, q, frozenset(support) | h.support, discard)
    if isinstance(out, (Value, Stuck)):
        return out
    h2, a2, rule, looked = out
    return HeapStepped(h2, a2, TraceEntry(h, a, q, rule, looked, h2, a2))


def _fresh_names(h, avoid, *bases):
    taken = set(avoid) | set(h.names)
    out = []
    for b in bases:
        n = fresh(b, taken)
        taken.add(n)
        out.append(n)
    return out


def _step(h, a, q, S, discard=None):
    if is_value(a):
        return Value(a)
    if discard is not None:
        q = discard(h, a, q)
    avoid = S | all_names(a)
    match a:
        case Var(x):
            e = h.lookup(x)
            if e is None:
                return Stuck(f"{x} is not bound in the heap")
            r, d = e
            rest = r.algebra.residual(r, q)
            if rest is None:
                return Stuck(f"insufficient resource: {x} is held at {r}, lookup at {q} needs {r} = {q} + q0")
            return h.set_grade(x, rest), d, "HeapStep-Var", x
        case App(f, arg, r):
            if isinstance(f, Lam):
                if f.r != r:
                    return Stuck(f"annotation mismatch: lambda at {f.r}, application at {r}")
                (x2,) = _fresh_names(h, avoid, f.x)
                return h.extend((x2, q * r, arg)), subst(f.body, f.x, Var(x2)), "HeapStep-AppBeta", None
            return _left(_step(h, f, q, S | fv(arg), discard), lambda t: App(t, arg, r), "HeapStep-AppL")
        case LetPair(q0, x, r, y, s, b):
            if isinstance(s, Pair):
                if s.r != r:
                    return Stuck(f"annotation mismatch: pair at {s.r}, let at {r}")
                x2, y2 = _fresh_names(h, avoid, x, y)
                h2 = h.extend((x2, q * q0 * r, s.fst), (y2, q * q0, s.snd))
                return h2, subst_many(b, {x: Var(x2), y: Var(y2)}), "HeapStep-LetPairBeta", None
            rest = fv(b) - {x, y}
            return _left(_step(h, s, q * q0, S | rest, discard), lambda t: LetPair(q0, x, r, y, t, b),
                         "HeapStep-LetPairL")
        case LetUnit(q0, s, b):
            if isinstance(s, UnitTerm):
                return h, b, "HeapStep-LetUnitBeta", None
            return _left(_step(h, s, q * q0, S | fv(b), discard), lambda t: LetUnit(q0, t, b), "HeapStep-LetUnitL")
        case Case(q0, s, x1, b1, x2, b2):
            if isinstance(s, (Inj1, Inj2)):
                first = isinstance(s, Inj1)
                x, b = (x1, b1) if first else (x2, b2)
                (n,) = _fresh_names(h, avoid, x)
                rule = "HeapStep-CaseOneBeta" if first else "HeapStep-CaseTwoBeta"
                return h.extend((n, q * q0, s.t)), subst(b, x, Var(n)), rule, None
            rest = (fv(b1) - {x1}) | (fv(b2) - {x2})
            return _left(_step(h, s, q * q0, S | rest, discard), lambda t: Case(q0, t, x1, b1, x2, b2), "HeapStep-CaseL")
        case IntAdd(l, r):
            if not isinstance(l, IntLit):
                return _left(_step(h, l, q, S | fv(r), discard), lambda t: IntAdd(t, r), "HeapStep-AddL")
            if not isinstance(r, IntLit):
                return _left(_step(h, r, q, S, discard), lambda t: IntAdd(l, t), "HeapStep-AddR")
            return h, IntLit(l.n + r.n), "HeapStep-AddBeta", None
    return Stuck(f"no heap rule for {show(a)}")


def _left(inner, wrap, rule):
    if isinstance(inner, Value):
        return Stuck(f"{rule}: {show(inner.term)} is not an introduction form of the right kind")
    if isinstance(inner, Stuck):
        return inner
    h2, t, r, looked = inner
    return h2, wrap(t), f"{rule}/{r}", looked


@dataclass
class RunResult:
    status: str  # "value" | "stuck" | "fuel"
    heap: Heap
    term: object
    trace: list
    reason: str = ""

    def lookups(self, name=None):
        return [e.looked_up for e in self.trace if e.looked_up is not None and name in (None, e.looked_up)]


def run(h, a, q, fuel=10_000, support=frozenset(), discard=None):
    trace = []
    for _ in range(fuel):
        out = heap_step(h, a, q, support, discard)
        if isinstance(out, Value):
            return RunResult("value", h, a, trace)
        if isinstance(out, Stuck):
            return RunResult("stuck", h, a, trace, out.reason)
        trace.append(out.entry)
        h, a = out.heap, out.term
    return RunResult("fuel", h, a, trace, f"fuel exhausted after {fuel} steps")


# Compatibility.


def decompositions(alg, p):
    """All pairs (g, d) with g + d = p, over a finite pool around p."""
    return [(g, d) for g in _pool(alg, p.value) for d in _pool(alg, p.value)
            if alg.add_v(g, d) == p.value]


def _pool(alg, v):
    c = alg.carrier_v()
    if c is not None:
        return list(c)
    if isinstance(alg, Product):
        return list(itertools.product(_pool(alg.left, v[0]), _pool(alg.right, v[1])))
    if isinstance(alg, NatAlgebra):
        vals = list(range(v + 1)) if v is not OMEGA else [0, 1]
        return vals + ([OMEGA] if alg.has_omega else [])
    raise ValueError(f"cannot enumerate grades of {alg.name}")


class CompatError(Exception):
    pass


def _explain_compat(alg, h, types, wanted, exact):
    """Walk bindings last to first; raise CompatError naming the failing variable."""
    chk = SimpleChecker(alg)
    names = h.names
    later = {n: alg.zero for n in names}
    for i in range(len(names) - 1, -1, -1):
        n, p, d = h.bindings[i]
        g = wanted.get(n, alg.zero)
        ok = False
        for g2, d2 in decompositions(alg, p):
            gg, dd = alg.grade(g2), alg.grade(d2)
            g_ok = gg == g if exact else gg.leq(g)
            if g_ok and dd.leq(later[n]):
                ok = True
                break
        if not ok:
            raise CompatError(f"{n} is held at {p} but the context needs {g} with later definitions "
                              f"needing {later[n]}; no split {p} = {g} + q0 fits")
        try:
            res = chk.synth([(m, types[m]) for m in names[:i]], d, p, types[n])
        except CheckError as err:
            raise CompatError(f"definition of {n} does not check at {p}: {err}") from None
        for m, u in res.usage.items():
            later[m] = later[m] + u


def compatible(alg, h, ctx, types=None, exact=True):
    """H |= ctx for simple-fragment heaps; ctx entries are (name, grade, type)."""
    if [e[0] for e in ctx] != h.names:
        raise CompatError(f"heap names {h.names} and context names {[e[0] for e in ctx]} differ")
    types = types or {e[0]: e[2] for e in ctx}
    try:
        _explain_compat(alg, h, types, {e[0]: e[1] for e in ctx}, exact)
        return True
    except CompatError:
        return False


def compatible_below(alg, h, types, usage):
    """Some context below the given usage (pointwise) is compatible with h."""
    try:
        _explain_compat(alg, h, types, usage, exact=False)
        return True
    except CompatError:
        return False


def config_types(h, a, ty=None):
    """Simple types for every heap name, recovered by plain inference."""
    got = infer_config(h.defs(), a, ty)
    if got is None:
        return None
    return dict(got[0])


def build_compatible_heap(alg, entries, a, q, ty):
    """Grades for (name, type, definition) entries making the heap compatible with a's principal usage."""
    chk = SimpleChecker(alg)
    skel = [(n, t) for n, t, _ in entries]
    res = chk.synth(skel, a, q, ty)
    need = dict(res.usage)
    grades = {}
    for i in range(len(entries) - 1, -1, -1):
        n, t, d = entries[i]
        p = need.get(n, alg.zero)
        if p.is_zero():
            p = alg.zero
        grades[n] = p
        sub = chk.synth(skel[:i], d, p, t)
        need = vector_add(need, sub.usage, alg)
    h = Heap.of([(n, grades[n], d) for n, _, d in entries])
    ctx = [(n, res.usage.get(n, alg.zero), t) for n, t, _ in entries]
    return h, ctx


# Properties on traces.


@dataclass
class Report:
    ok: bool
    message: str = ""
    details: list = field(default_factory=list)


def check_similarity(entry):
    """Folding the heap before and after gives equal terms or one standard step."""
    before = entry.heap_before.fold(entry.term_before)
    after = entry.heap_after.fold(entry.term_after)
    if alpha_eq(before, after):
        return Report(True, "equal")
    out = step(before)
    if isinstance(out, Stepped) and alpha_eq(out.term, after):
        return Report(True, "one step")
    return Report(False, f"{show(before)} does not reach {show(after)} in at most one step")


def check_unchanged(trace):
    """A binding unavailable at the step grade keeps its grade."""
    bad = []
    for k, e in enumerate(trace):
        for n, r, _ in e.heap_before.bindings:
            if r.algebra.residual(r, e.grade) is None and e.heap_after.grade(n) != r:
                bad.append((k, n, r, e.heap_after.grade(n)))
    if bad:
        return Report(False, "grade of an unavailable binding changed", bad)
    return Report(True, f"{len(trace)} steps checked")


def check_irrelevant(h, a, q, name, replacement, fuel=1000):
    """Swapping the body of an unavailable binding leaves the run identical modulo the body."""
    r, original = h.lookup(name)
    if r.algebra.residual(r, q) is not None:
        return Report(True, f"{name} is available at {q}; the lemma does not apply")
    support = fv(replacement) | fv(original)
    left = run(h, a, q, fuel, support)
    right = run(h.replace(name, replacement), a, q, fuel, support)
    if left.status != right.status or len(left.trace) != len(right.trace):
        return Report(False, f"runs differ: {left.status}/{len(left.trace)} vs {right.status}/{len(right.trace)}")
    for k, (x, y) in enumerate(zip(left.trace, right.trace)):
        same = (x.term_after == y.term_after and x.rule == y.rule and x.looked_up == y.looked_up
                and x.heap_after.replace(name, replacement) == y.heap_after)
        if not same:
            return Report(False, f"step {k} differs", [x, y])
    if left.term != right.term:
        return Report(False, "final terms differ")
    return Report(True, f"{len(left.trace)} identical steps")


def check_soundness(alg, h, ctx, a, q, ty, fuel=500):
    """Compatible start never gets stuck and stays compatible after each step."""
    if q.is_zero():
        return Report(False, "precondition: the observer grade must not be 0")
    if not compatible(alg, h, ctx):
        return Report(False, "precondition: heap is not compatible with the context")
    chk = SimpleChecker(alg)
    try:
        chk.check(ctx, a, q, ty)
    except CheckError as err:
        return Report(False, f"precondition: term does not check: {err}")
    types = {n: t for n, _, t in ctx}
    for k in range(fuel):
        out = heap_step(h, a, q, discard=checker_discard(alg, types))
        if isinstance(out, Value):
            return Report(True, f"value after {k} steps")
        if isinstance(out, Stuck):
            return Report(False, f"stuck after {k} steps: {out.reason}", [str(h), show(a)])
        sim = check_similarity(out.entry)
        if not sim.ok:
            return Report(False, f"similarity fails at step {k}: {sim.message}")
        h, a = out.heap, out.term
        types = config_types(h, a, ty)
        if types is None:
            return Report(False, f"configuration after step {k} is not simply typable")
        try:
            res = SimpleChecker(alg).synth([(n, types[n]) for n in h.names], a, q, ty)
        except CheckError as err:
            return Report(False, f"reduct after step {k} does not check: {err}", [str(h), show(a)])
        if not compatible_below(alg, h, types, res.usage):
            return Report(False, f"no compatible context after step {k}", [str(h), show(a)])
    return Report(True, f"fuel {fuel} reached without getting stuck")


def checker_discard(alg, types=None):
    """Step each redex at the grade its typing actually uses, realizing HeapStep-Discard.

    Types of heap names come from `types` when it covers the heap, else from plain inference.
    """
    def lower(h, t, q):
        known = types if types is not None and all(n in types for n in h.names) else config_types(h, t)
        if known is None:
            return q
        try:
            return SimpleChecker(alg).effective_grade([(n, known[n]) for n in h.names], t, q)
        except CheckError:
            return q
    return lower


# Corollary harnesses.


@dataclass
class NIReport:
    outcome: str  # "equal" | "diverge" | "violation" | "precondition"
    message: str = ""
    runs: tuple = ()

    @property
    def ok(self):
        return self.outcome in ("equal", "diverge")


def noninterference_test(alg, f, f_type, a1, a2, high, low, fuel=1000, precondition=True):
    """Run f a1^high and f a2^high at low and compare the observable outcomes.

    precondition=False skips the typing check, to show that an ill-typed leak is observable.
    """
    chk = SimpleChecker
    try:
        if precondition:
            chk(alg).check([], f, low, f_type)
            for arg in (a1, a2):
                chk(alg).check([], arg, low * high, f_type.dom)
    except CheckError as err:
        return NIReport("precondition", str(err))
    r1 = run(Heap(), App(f, a1, high), low, fuel)
    r2 = run(Heap(), App(f, a2, high), low, fuel)
    if r1.status == "fuel" and r2.status == "fuel":
        return NIReport("diverge", "both runs exhausted fuel", (r1, r2))
    if r1.status != r2.status:
        return NIReport("violation", f"statuses differ: {r1.status} vs {r2.status}", (r1, r2))
    if r1.status == "stuck":
        return NIReport("violation", f"both runs stuck: {r1.reason}", (r1, r2))
    secret1, secret2 = _input_names(r1, a1), _input_names(r2, a2)
    c1, c2 = _canonical(r1, secret1), _canonical(r2, secret2)
    if c1[1] != c2[1]:
        return NIReport("violation", f"results differ: {show(r1.term)} vs {show(r2.term)}", (r1, r2))
    if c1[0] != c2[0]:
        return NIReport("violation", "heaps differ outside the high input", (r1, r2))
    return NIReport("equal", show(r1.term), (r1, r2))


def _input_names(result, a):
    if not result.trace:
        return set()
    first = result.trace[0]
    return {n for n, _, t in first.heap_after.bindings if t == a and first.heap_before.lookup(n) is None}


def _canonical(result, secret):
    """Heap and final term with heap names replaced by their positions and secret contents hidden."""
    ren = {n: Var(f"#{i}") for i, n in enumerate(result.heap.names)}
    heap = tuple((g, None if n in secret else subst_many(t, ren)) for n, g, t in result.heap.bindings)
    return heap, subst_many(result.term, ren)


def affine_usage_test(alg, f, f_type, name, value, fuel=1000):
    """Run f applied to a heap name held at 1 and count how often that name is read."""
    try:
        SimpleChecker(alg).check([], f, alg.one, f_type)
    except CheckError as err:
        return Report(False, f"precondition: {err}")
    h = Heap.of([(name, alg.one, value)])
    res = run(h, App(f, Var(name), f_type.r), alg.one, fuel)
    count = len(res.lookups(name))
    if res.status == "stuck":
        return Report(False, f"stuck: {res.reason}", [count])
    return Report(count <= 1, f"{name} looked up {count} time(s); run {res.status}", [count])


# Heap files.


def parse_heap(text, alg, sorts=("*", "box")):
    """One `x ^g = term` per line; later lines may mention earlier names only."""
    from .parser import ParseError, parse, parse_grade

    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("--", 1)[0].strip()
        if not line:
            continue
        head, eq, body = line.partition("=")
        if not eq:
            raise ParseError("expected `x ^g = term`", lineno, 1)
        name, caret, grade = head.partition("^")
        name = name.strip()
        if not caret or not name.isidentifier():
            raise ParseError("expected `x ^g = term`", lineno, 1)
        entries.append((name, parse_grade(grade.strip(), alg), parse(body.strip(), alg, sorts)))
    return Heap.of(entries)


def format_heap(h):
    return "\n".join(f"{n} ^{g} = {show(t)}" for n, g, t in h.bindings)
