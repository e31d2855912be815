"""Translation of the linear/nonlinear lambda calculus into the three-point linear algebra.

Surface syntax (nonlinear zone / linear zone):
  types   1, X * Y, X -> Y, G A        I, A (x) B, A -o B, F X      plus base names
  terms   x, (), (s, t), fst s, snd s, fn x:X. s, s t, G e
          a, *, e (x) f, let a (x) b be e in f, let * be e in f, lfn a:A. e, e f,
          derelict s, F s, let F x be e in f
Unicode forms of the connectives are accepted as well. Applications take the zone of their head.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import LIN3
from .check_simple import SimpleChecker
from .errors import CheckError
from .syntax import (
    UNIT, UNIT_T, App, Lam, LetPair, LetUnit, Pair, Pi, Sigma, UnitType, Var, all_names, fresh,
)

W = LIN3.parse("w")
ONE = LIN3.one


# Types.


@dataclass(frozen=True)
class TBase:
    name: str


@dataclass(frozen=True)
class TOne:
    pass


@dataclass(frozen=True)
class TI:
    pass


@dataclass(frozen=True)
class TTimes:
    left: object
    right: object


@dataclass(frozen=True)
class TArrow:
    dom: object
    cod: object


@dataclass(frozen=True)
class TTensor:
    left: object
    right: object


@dataclass(frozen=True)
class TLolli:
    dom: object
    cod: object


@dataclass(frozen=True)
class TG:
    body: object


@dataclass(frozen=True)
class TF:
    body: object


# Terms; N* are nonlinear, L* linear.


@dataclass(frozen=True)
class NVar:
    name: str


@dataclass(frozen=True)
class LVar:
    name: str


@dataclass(frozen=True)
class NUnit:
    pass


@dataclass(frozen=True)
class LUnit:
    pass


@dataclass(frozen=True)
class NPair:
    fst: object
    snd: object


@dataclass(frozen=True)
class Fst:
    t: object


@dataclass(frozen=True)
class Snd:
    t: object


@dataclass(frozen=True)
class NLam:
    x: str
    ty: object
    body: object


@dataclass(frozen=True)
class NApp:
    fun: object
    arg: object


@dataclass(frozen=True)
class GIntro:
    e: object


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object


@dataclass(frozen=True)
class LetTensor:
    a: str
    b: str
    e: object
    body: object


@dataclass(frozen=True)
class LetStar:
    e: object
    body: object


@dataclass(frozen=True)
class LLam:
    a: str
    ty: object
    body: object


@dataclass(frozen=True)
class LApp:
    fun: object
    arg: object


@dataclass(frozen=True)
class Derelict:
    s: object


@dataclass(frozen=True)
class FIntro:
    s: object


@dataclass(frozen=True)
class LetF:
    x: str
    e: object
    body: object


NONLINEAR = (NVar, NUnit, NPair, Fst, Snd, NLam, NApp, GIntro)


def zone(t):
    return "C" if isinstance(t, NONLINEAR) else "L"


# Translation.


def translate_type(t):
    match t:
        case TBase(n):
            return Var(n)
        case TOne() | TI():
            return UnitType()
        case TTimes(l, r):
            return Sigma("_", W, translate_type(l), translate_type(r))
        case TTensor(l, r):
            return Sigma("_", ONE, translate_type(l), translate_type(r))
        case TArrow(d, c):
            return Pi("_", W, translate_type(d), translate_type(c))
        case TLolli(d, c):
            return Pi("_", ONE, translate_type(d), translate_type(c))
        case TG(a):
            return translate_type(a)
        case TF(x):
            return Sigma("_", W, translate_type(x), UNIT_T)
    raise TypeError(f"not an LNL type: {t!r}")


def translate_term(t):
    match t:
        case NVar(n) | LVar(n):
            return Var(n)
        case NUnit() | LUnit():
            return UNIT
        case NPair(s, u):
            return Pair(translate_term(s), W, translate_term(u))
        case Tensor(e, f):
            return Pair(translate_term(e), ONE, translate_term(f))
        case Fst(s) | Snd(s):
            body = translate_term(s)
            x, y = _two_fresh(body)
            return LetPair(ONE, x, W, y, body, Var(x if isinstance(t, Fst) else y))
        case LetTensor(a, b, e, f):
            return LetPair(ONE, a, ONE, b, translate_term(e), translate_term(f))
        case LetStar(e, f):
            return LetUnit(ONE, translate_term(e), translate_term(f))
        case NLam(x, ty, s):
            return Lam(W, x, translate_type(ty), translate_term(s))
        case LLam(a, ty, e):
            return Lam(ONE, a, translate_type(ty), translate_term(e))
        case NApp(s, u):
            return App(translate_term(s), translate_term(u), W)
        case LApp(e, f):
            return App(translate_term(e), translate_term(f), ONE)
        case GIntro(e):
            return translate_term(e)
        case Derelict(s):
            return translate_term(s)
        case FIntro(s):
            return Pair(translate_term(s), W, UNIT)
        case LetF(x, e, f):
            e2, f2 = translate_term(e), translate_term(f)
            y = fresh("y", all_names(e2) | all_names(f2) | {x})
            return LetPair(ONE, x, W, y, e2, LetUnit(ONE, Var(y), f2))
    raise TypeError(f"not an LNL term: {t!r}")


def _two_fresh(body):
    used = set(all_names(body))
    x = fresh("x", used)
    used.add(x)
    return x, fresh("y", used)


@dataclass
class Judgment:
    theta: list  # [(name, type)]
    gamma: list
    term: object
    type: object
    kind: str  # "L" or "C"
    source: str = ""


@dataclass
class ValidationReport:
    ok: bool
    grade: object
    context: list
    term: object
    type: object
    message: str = ""


def translated_judgment(j):
    ctx = [(n, W, translate_type(t)) for n, t in j.theta]
    ctx += [(n, ONE, translate_type(t)) for n, t in j.gamma]
    grade = ONE if j.kind == "L" else W
    return ctx, translate_term(j.term), grade, translate_type(j.type)


def validate(j):
    """Check the translated judgment at the grade its zone dictates."""
    ctx, term, grade, ty = translated_judgment(j)
    try:
        SimpleChecker(LIN3).check(ctx, term, grade, ty)
        return ValidationReport(True, grade, ctx, term, ty, "accepted")
    except CheckError as err:
        return ValidationReport(False, grade, ctx, term, ty, str(err))


# Parsing.


class LnlParseError(ValueError):
    pass


_TOK = re.compile(r"\s*(?:(?P<sym>\(x\)|->|-o|\|-|==|[⊗⊸→×(),.:;*\\])|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<num>\d+))")
_KW = {"fst", "snd", "fn", "lfn", "G", "F", "derelict", "let", "be", "in", "I"}
_NORM = {"⊗": "(x)", "⊸": "-o", "→": "->", "×": "*"}


def _tokens(text):
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            raise LnlParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} at {pos}")
        tok = m.group("sym") or m.group("id") or m.group("num")
        out.append(_NORM.get(tok, tok))
        pos = m.end()
    return out


class _P:
    def __init__(self, text, scope):
        self.toks = _tokens(text)
        self.i = 0
        self.scope = dict(scope)

    def peek(self, k=0):
        return self.toks[self.i + k] if self.i + k < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise LnlParseError("unexpected end of input")
        self.i += 1
        return t

    def expect(self, t):
        got = self.next()
        if got != t:
            raise LnlParseError(f"expected {t!r}, got {got!r}")

    def ident(self):
        t = self.next()
        if not re.match(r"[A-Za-z_]", t) or t in _KW:
            raise LnlParseError(f"expected a name, got {t!r}")
        return t

    # types

    def type(self):
        left = self.type_prod()
        if self.peek() in ("->", "-o"):
            op = self.next()
            right = self.type()
            return TArrow(left, right) if op == "->" else TLolli(left, right)
        return left

    def type_prod(self):
        left = self.type_atom()
        while self.peek() in ("*", "(x)"):
            op = self.next()
            right = self.type_atom()
            left = TTimes(left, right) if op == "*" else TTensor(left, right)
        return left

    def type_atom(self):
        t = self.next()
        if t == "1":
            return TOne()
        if t == "I":
            return TI()
        if t in ("G", "F"):
            body = self.type_atom()
            return TG(body) if t == "G" else TF(body)
        if t == "(":
            ty = self.type()
            self.expect(")")
            return ty
        if re.match(r"[A-Za-z_]", t) and t not in _KW:
            return TBase(t)
        raise LnlParseError(f"unexpected {t!r} in a type")

    # terms

    def term(self):
        t = self.peek()
        if t in ("fn", "lfn"):
            self.next()
            x = self.ident()
            self.expect(":")
            ty = self.type()
            self.expect(".")
            body = self.bind({x: "C" if t == "fn" else "L"}, self.term)
            return NLam(x, ty, body) if t == "fn" else LLam(x, ty, body)
        if t == "let":
            self.next()
            if self.peek() == "*":
                self.next()
                self.expect("be")
                e = self.term()
                self.expect("in")
                return LetStar(e, self.term())
            if self.peek() == "F":
                self.next()
                x = self.ident()
                self.expect("be")
                e = self.term()
                self.expect("in")
                return LetF(x, e, self.bind({x: "C"}, self.term))
            a = self.ident()
            self.expect("(x)")
            b = self.ident()
            self.expect("be")
            e = self.term()
            self.expect("in")
            return LetTensor(a, b, e, self.bind({a: "L", b: "L"}, self.term))
        left = self.app()
        if self.peek() == "(x)":
            self.next()
            return Tensor(left, self.term())
        return left

    def bind(self, names, k):
        saved = dict(self.scope)
        self.scope.update(names)
        try:
            return k()
        finally:
            self.scope = saved

    def app(self):
        head = self.prefix()
        while self._starts_atom():
            arg = self.prefix()
            head = NApp(head, arg) if zone(head) == "C" else LApp(head, arg)
        return head

    def _starts_atom(self):
        t = self.peek()
        if t is None:
            return False
        if t in ("(", "*", "fst", "snd", "G", "F", "derelict"):
            return True
        return bool(re.match(r"[A-Za-z_]", t)) and t not in _KW

    def prefix(self):
        t = self.peek()
        if t in ("fst", "snd", "G", "F", "derelict"):
            self.next()
            arg = self.prefix()
            return {"fst": Fst, "snd": Snd, "G": GIntro, "F": FIntro, "derelict": Derelict}[t](arg)
        return self.atom()

    def atom(self):
        t = self.next()
        if t == "*":
            return LUnit()
        if t == "(":
            if self.peek() == ")":
                self.next()
                return NUnit()
            first = self.term()
            if self.peek() == ",":
                self.next()
                second = self.term()
                self.expect(")")
                return NPair(first, second)
            self.expect(")")
            return first
        if re.match(r"[A-Za-z_]", t) and t not in _KW:
            z = self.scope.get(t)
            if z is None:
                raise LnlParseError(f"unbound variable {t}")
            return NVar(t) if z == "C" else LVar(t)
        raise LnlParseError(f"unexpected {t!r} in a term")

    def done(self):
        if self.peek() is not None:
            raise LnlParseError(f"unexpected {self.peek()!r}")


def parse_type(text):
    p = _P(text, {})
    t = p.type()
    p.done()
    return t


def parse_term(text, theta=(), gamma=()):
    p = _P(text, {**{n: "C" for n in theta}, **{n: "L" for n in gamma}})
    t = p.term()
    p.done()
    return t


def _ctx(text):
    out = []
    for item in text.split(","):
        if item.strip():
            name, colon, ty = item.partition(":")
            if not colon:
                raise LnlParseError(f"context entry {item.strip()!r} needs a type")
            out.append((name.strip(), parse_type(ty)))
    return out


def parse_judgment(text):
    """`theta ; gamma |- e : A` (linear) or `theta |- t : X` (nonlinear)."""
    head, sep, rest = text.partition("|-")
    if not sep:
        raise LnlParseError("missing |-")
    if ";" in head:
        th, _, ga = head.partition(";")
        theta, gamma, kind = _ctx(th), _ctx(ga), "L"
    else:
        theta, gamma, kind = _ctx(head), [], "C"
    body, colon, ty = _split_top_colon(rest)
    if not colon:
        raise LnlParseError("judgment needs `: type`")
    term = parse_term(body, [n for n, _ in theta], [n for n, _ in gamma])
    if zone(term) != kind and not isinstance(term, (NVar, LVar)):
        raise LnlParseError(f"a {'linear' if kind == 'L' else 'nonlinear'} judgment has a term of the other zone")
    return Judgment(theta, gamma, term, parse_type(ty), kind, text.strip())


def _split_top_colon(text):
    """Split at the last colon outside binders `fn x:T.`."""
    depth = 0
    cut = None
    i = 0
    while i < len(text):
        c = text[i]
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        elif c == ":" and depth == 0:
            cut = i
        i += 1
    if cut is None:
        return text, "", ""
    prefix = text[:cut]
    if re.search(r"\b(l?fn)\s+[A-Za-z_][A-Za-z0-9_']*\s*$", prefix):
        return text, "", ""
    return text[:cut], ":", text[cut + 1:]


@dataclass
class BetaPair:
    theta: list
    gamma: list
    left: object
    right: object
    source: str = ""


def parse_beta(text):
    """`theta ; gamma |- e == f`."""
    head, sep, rest = text.partition("|-")
    if not sep:
        raise LnlParseError("missing |-")
    th, _, ga = head.partition(";")
    theta, gamma = _ctx(th), _ctx(ga)
    lhs, eq, rhs = rest.partition("==")
    if not eq:
        raise LnlParseError("missing ==")
    names = ([n for n, _ in theta], [n for n, _ in gamma])
    return BetaPair(theta, gamma, parse_term(lhs, *names), parse_term(rhs, *names), text.strip())


def parse_corpus(text):
    """Lines `check: <judgment>` and `beta: <pair>`; `--` starts a comment."""
    judgments, pairs = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("--", 1)[0].strip()
        if not line:
            continue
        tag, _, rest = line.partition(":")
        try:
            if tag.strip() == "check":
                judgments.append(parse_judgment(rest))
            elif tag.strip() == "beta":
                pairs.append(parse_beta(rest))
            else:
                raise LnlParseError(f"unknown entry {tag.strip()!r}")
        except LnlParseError as err:
            raise LnlParseError(f"line {lineno}: {err}") from None
    return judgments, pairs


CLAUSES = {
    "type": ["1", "X*Y", "X->Y", "G", "I", "A(x)B", "A-oB", "F"],
    "term": ["x", "a", "()", "*", "(s,t)", "e(x)f", "fst", "snd", "let(x)", "let*", "fn", "lfn",
             "s t", "e f", "G", "derelict", "F", "letF"],
}


def clauses_used(j):
    """Figure clauses exercised by a judgment, for coverage accounting."""
    seen = set()

    def ty(t):
        match t:
            case TOne():
                seen.add(("type", "1"))
            case TI():
                seen.add(("type", "I"))
            case TTimes(l, r):
                seen.add(("type", "X*Y"))
                ty(l), ty(r)
            case TTensor(l, r):
                seen.add(("type", "A(x)B"))
                ty(l), ty(r)
            case TArrow(d, c):
                seen.add(("type", "X->Y"))
                ty(d), ty(c)
            case TLolli(d, c):
                seen.add(("type", "A-oB"))
                ty(d), ty(c)
            case TG(b):
                seen.add(("type", "G"))
                ty(b)
            case TF(b):
                seen.add(("type", "F"))
                ty(b)

    def tm(t):
        tags = {NVar: "x", LVar: "a", NUnit: "()", LUnit: "*", NPair: "(s,t)", Tensor: "e(x)f", Fst: "fst",
                Snd: "snd", LetTensor: "let(x)", LetStar: "let*", NLam: "fn", LLam: "lfn", NApp: "s t",
                LApp: "e f", GIntro: "G", Derelict: "derelict", FIntro: "F", LetF: "letF"}
        seen.add(("term", tags[type(t)]))
        for v in vars(t).values():
            if isinstance(v, (TBase, TOne, TI, TTimes, TTensor, TArrow, TLolli, TG, TF)):
                ty(v)
            elif hasattr(v, "__dataclass_fields__"):
                tm(v)

    tm(j.term)
    ty(j.type)
    for _, t in j.theta + j.gamma:
        ty(t)
    return seen
