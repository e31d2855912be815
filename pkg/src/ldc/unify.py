"""First-order unification over types with metavariables."""

from __future__ import annotations

import itertools

from .syntax import Meta, Var, _grades, all_names, children, fresh, metas, rebuild, show, subst


class UnifyError(Exception):
    pass


class MetaStore:
    def __init__(self):
        self.solved = {}
        self._ids = itertools.count()

    def new(self):
        return Meta(next(self._ids))

    def resolve(self, t):
        while isinstance(t, Meta) and t.n in self.solved:
            t = self.solved[t.n]
        return t

    def zonk(self, t):
        t = self.resolve(t)
        kids = children(t)
        if not kids:
            return t
        return rebuild(t, [self.zonk(s) for _, s in kids])

    def bind(self, m, t):
        t = self.zonk(t)
        if t == m:
            return
        if m.n in metas(t):
            raise UnifyError(f"occurs check: ?{m.n} in {show(t)}")
        self.solved[m.n] = t


def unify(a, b, store, whnf=None, avoid=frozenset()):
    """Make a and b equal, solving metas; whnf optionally reduces heads first."""
    a, b = store.resolve(a), store.resolve(b)
    if a is b:
        return
    if whnf is not None:
        a, b = store.resolve(whnf(a)), store.resolve(whnf(b))
    if isinstance(a, Meta):
        store.bind(a, b)
        return
    if isinstance(b, Meta):
        store.bind(b, a)
        return
    if type(a) is not type(b):
        raise UnifyError(f"{show(store.zonk(a))} vs {show(store.zonk(b))}")
    match a:
        case Var(x):
            if x != b.name:
                raise UnifyError(f"{x} vs {b.name}")
            return
    if not children(a):
        if a != b:
            raise UnifyError(f"{show(a)} vs {show(b)}")
        return
    if _grades(a) != _grades(b):
        raise UnifyError(f"grade annotations differ: {show(store.zonk(a))} vs {show(store.zonk(b))}")
    ka, kb = children(a), children(b)
    if len(ka) != len(kb):
        raise UnifyError(f"{show(a)} vs {show(b)}")
    for (ba, sa), (bb, sb) in zip(ka, kb):
        if ba != bb:
            used = set(avoid) | all_names(sa) | all_names(sb)
            for x, y in zip(ba, bb):
                z = fresh(x, used)
                used.add(z)
                sa = subst(sa, x, Var(z))
                sb = subst(sb, y, Var(z))
        unify(sa, sb, store, whnf, avoid | set(ba))
