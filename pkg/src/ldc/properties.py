"""Metatheory as executable checks; each returns None or a counterexample description."""

from __future__ import annotations

from .algebra import FiniteLattice
from .check_simple import SimpleChecker, accepts
from .errors import CheckError
from .eval_cbn import Stepped, Value, step
from .gen import TermGen, random_heap_program, random_judgment
from .heap import (
    build_compatible_heap, check_similarity, check_soundness, checker_discard, decompositions, run,
)
from .syntax import show, subst


def _desc(j):
    ctx = ", ".join(f"{n}:^{g} {show(t)}" for n, g, t in j.ctx)
    return f"{ctx} |- {show(j.term)} :^{j.grade} {show(j.type)}"


def _principal(alg, ctx, a, q, ty):
    res = SimpleChecker(alg).synth([(n, t) for n, _, t in ctx], a, q, ty)
    return {n: res.usage.get(n, alg.zero) for n, _, _ in ctx}


def multiplication(alg, rng):
    j = random_judgment(alg, rng)
    r0 = rng.choice(alg.carrier() or alg.sample(3))
    ctx = [(n, r0 * g, t) for n, g, t in j.ctx]
    if not accepts(alg, ctx, j.term, r0 * j.grade, j.type):
        return f"scaling by {r0} breaks {_desc(j)}"
    return None


def splitting(alg, rng):
    pool = alg.carrier() or alg.sample(2)
    q1, q2 = rng.choice(pool), rng.choice(pool)
    j = random_judgment(alg, rng)
    q = q1 + q2
    try:
        p = _principal(alg, j.ctx, j.term, q, j.type)
    except CheckError:
        return None if not accepts(alg, j.ctx, j.term, q, j.type) else f"synth fails at {q}"
    ctx = [(n, p[n], t) for n, _, t in j.ctx]
    try:
        p1 = _principal(alg, ctx, j.term, q1, j.type)
        p2 = _principal(alg, ctx, j.term, q2, j.type)
    except CheckError as err:
        return f"accepted at {q1}+{q2} but not at a summand ({err}): {show(j.term)}"
    left, right = [], []
    for n, g, t in ctx:
        splits = [(alg.grade(a), alg.grade(b)) for a, b in decompositions(alg, g)]
        found = next(((a, b) for a, b in splits if a.leq(p1[n]) and b.leq(p2[n])), None)
        if found is None:
            return f"no split of {n}:^{g} into {p1[n]} + {p2[n]} for {show(j.term)}"
        left.append((n, found[0], t))
        right.append((n, found[1], t))
    if not (accepts(alg, left, j.term, q1, j.type) and accepts(alg, right, j.term, q2, j.type)):
        return f"constructed split rejected for {show(j.term)}"
    return None


def factorization(alg, rng):
    """Semirings only; lattices take the meet form below, since factorization would leak there."""
    if isinstance(alg, FiniteLattice):
        return lattice_meet(alg, rng)
    j = random_judgment(alg, rng, nonzero=True)
    try:
        p1 = _principal(alg, j.ctx, j.term, alg.one, j.type)
    except CheckError as err:
        return f"accepted at {j.grade} but not at 1 ({err}): {_desc(j)}"
    ctx1 = [(n, p1[n], t) for n, _, t in j.ctx]
    if not accepts(alg, ctx1, j.term, alg.one, j.type):
        return f"principal at 1 rejected: {_desc(j)}"
    for n, g, _ in j.ctx:
        if not g.leq(j.grade * p1[n]):
            return f"{n}:^{g} is not <: {j.grade}*{p1[n]} in {_desc(j)}"
    return None


def substitution(alg, rng):
    j = random_judgment(alg, rng, names=("a", "b", "z"))
    _, r0, ty_z = next(e for e in j.ctx if e[0] == "z")
    found = _term_of_type(alg, rng, ty_z, r0)
    if found is None:
        return None
    c, delta = found
    ctx = [(n, g, t) for n, g, t in j.ctx if n != "z"] + [("d", delta.get("d", alg.zero), ty_z)]
    b2 = subst(j.term, "z", c)
    if not accepts(alg, ctx, b2, j.grade, j.type):
        return f"substituting {show(c)} for z:^{r0} breaks {_desc(j)}"
    return None


def _term_of_type(alg, rng, ty, r0):
    """Some c with d:ty |- c :^r0 ty, returned with its principal usage."""
    g = TermGen(alg, rng, max_depth=3)
    for _ in range(50):
        c = g.term({"d": ty}, ty)
        try:
            res = SimpleChecker(alg).synth([("d", ty)], c, r0, ty)
        except CheckError:
            continue
        return c, dict(res.usage)
    return None


def preservation(alg, rng):
    j = random_judgment(alg, rng, closed=True, redex=True)
    out = step(j.term)
    if isinstance(out, Stepped) and not accepts(alg, [], out.term, j.grade, j.type):
        return f"{show(j.term)} steps by {out.rule} to {show(out.term)}, which no longer checks at {j.grade}"
    return None


def progress(alg, rng):
    j = random_judgment(alg, rng, closed=True, redex=rng.random() < 0.8)
    out = step(j.term)
    if not isinstance(out, (Stepped, Value)):
        return f"{show(j.term)} is stuck: {out.reason}"
    return None


def _heap_case(alg, rng):
    for _ in range(50):
        entries, a, q, ty = random_heap_program(alg, rng)
        try:
            h, ctx = build_compatible_heap(alg, entries, a, q, ty)
        except CheckError:
            continue
        return h, ctx, a, q, ty
    raise RuntimeError(f"no compatible heap program under {alg.name}")


def heap_soundness(alg, rng):
    h, ctx, a, q, ty = _heap_case(alg, rng)
    rep = check_soundness(alg, h, ctx, a, q, ty, fuel=200)
    if not rep.ok:
        return f"{rep.message}; heap [{h}] term {show(a)} at {q}"
    return None


def similarity(alg, rng):
    h, ctx, a, q, _ = _heap_case(alg, rng)
    res = run(h, a, q, fuel=200, discard=checker_discard(alg, {n: t for n, _, t in ctx}))
    for k, entry in enumerate(res.trace):
        rep = check_similarity(entry)
        if not rep.ok:
            return f"step {k} of {show(a)} from [{h}]: {rep.message}"
    return None


def lattice_meet(alg, rng):
    """Accepted at l1 /\\ l2 implies accepted at l1 and at l2 with the same context."""
    pool = alg.carrier()
    l1, l2 = rng.choice(pool), rng.choice(pool)
    m = alg.glb(l1, l2)
    j = random_judgment(alg, rng)
    try:
        p = _principal(alg, j.ctx, j.term, m, j.type)
    except CheckError:
        return None
    ctx = [(n, p[n], t) for n, _, t in j.ctx]
    for lv in (l1, l2):
        if not accepts(alg, ctx, j.term, lv, j.type):
            return f"accepted at {m} but not at {lv}: {show(j.term)}"
    return None


PROPERTIES = {
    "multiplication": multiplication,
    "splitting": splitting,
    "factorization": factorization,
    "substitution": substitution,
    "preservation": preservation,
    "progress": progress,
    "heap-soundness": heap_soundness,
    "similarity": similarity,
}
