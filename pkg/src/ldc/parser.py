"""Parser for the surface language; sugar is expanded while parsing."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import AlgebraError, Product
from .syntax import (
    FALSE, INT_T, TRUE, UNIT, UNIT_T, App, Case, Inj1, Inj2, IntAdd, IntLit, Lam, LetPair,
    LetUnit, Pair, Pi, Sigma, Sort, Sum, Var, all_names, bool_type, fresh, looks_like_type,
)


class ParseError(ValueError):
    def __init__(self, msg, line, col):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9']*)
  | (?P<sym>:\^|->|→|\\/|/\\|\|-|[\\λ^_.,;:=()+*×{}⊢⊔⊓ωΠΣ])
""", re.VERBOSE)

KEYWORDS = {"let", "in", "case", "of", "inj1", "inj2", "unit", "Unit", "Int", "Pi", "Sigma",
            "if", "then", "else", "unseal", "Bool", "true", "false",
            "sum", "add"}


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            norm = {"λ": "\\", "→": "->", "×": "*", "ω": "w", "Π": "Pi", "Σ": "Sigma",
                    "⊢": "|-", "⊔": "\\/", "⊓": "/\\"}.get(tok, tok)
            if norm in ("Pi", "Sigma", "w"):
                kind = "ident"
            out.append(Tok(kind, norm, line, pos - line_start + 1))
        for i, ch in enumerate(tok):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    out.append(Tok("eof", "", line, pos - line_start + 1))
    return out


@dataclass(frozen=True)
class _Graded:
    """Transient `{}^g A` marker awaiting an arrow or product."""
    g: object
    t: object


class Parser:
    def __init__(self, text, alg, sorts=("*", "box")):
        self.toks = tokenize(text)
        self.i = 0
        self.alg = alg
        self.sorts = set(sorts)
        self.used = set()
        self.counter = 0

    # token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text):
        return self.tok.kind != "eof" and self.tok.text == text

    def eat(self, text):
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.eat(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")

    def error(self, msg, tok=None):
        t = tok or self.tok
        raise ParseError(msg, t.line, t.col)

    def ident(self):
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.error(f"expected a name, found {t.text or 'end of input'!r}")
        self.i += 1
        self.used.add(t.text)
        return t.text

    def binder(self):
        if self.eat("_"):
            return self.wildcard()
        return self.ident()

    def wildcard(self):
        self.counter += 1
        name = f"_{self.counter}"
        return name

    # grades
    def grade(self, alg=None):
        alg = alg or self.alg
        g = self.grade_atom(alg)
        while self.at("\\/") or self.at("/\\"):
            op = self.tok.text
            self.i += 1
            h = self.grade_atom(alg)
            g = g * h if op == "\\/" else g + h
        return g

    def grade_atom(self, alg):
        t = self.tok
        if self.eat("("):
            if isinstance(alg, Product):
                left = self.grade(alg.left)
                self.expect(",")
                right = self.grade(alg.right)
                self.expect(")")
                return alg.grade((left.value, right.value))
            g = self.grade(alg)
            self.expect(")")
            return g
        if t.kind not in ("int", "ident"):
            self.error(f"expected a grade, found {t.text or 'end of input'!r}")
        self.i += 1
        try:
            return alg.parse(t.text)
        except AlgebraError as e:
            self.error(str(e), t)

    def opt_grade(self, lead):
        return self.grade() if self.eat(lead) else self.alg.one

    # terms
    def parse_all(self):
        t = self.term()
        if self.at("^"):
            self.error("a graded operand `t^g` is only allowed as an argument or pair component")
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return _freshen_wildcards(t)

    def term(self):
        t = self.tok
        if self.at("\\"):
            return self.lam()
        if self.at("let"):
            return self.let()
        if self.at("case"):
            return self.case()
        if self.at("if"):
            return self.if_()
        if t.text in ("Pi", "Sigma") and t.kind == "ident":
            return self.binder_type()
        if self.at("unseal"):
            return self.unseal()
        return self.arrow()

    def lam(self):
        self.expect("\\")
        r = self.opt_grade("^")
        x = self.binder()
        dom = self.term() if self.eat(":") else None
        self.expect(".")
        return Lam(r, x, dom, self.term())

    def let(self):
        self.expect("let")
        q0 = self.opt_grade("_")
        if self.eat("unit"):
            self.expect("=")
            s = self.term()
            self.expect("in")
            return LetUnit(q0, s, self.term())
        self.expect("(")
        x = self.binder()
        r = self.opt_grade("^")
        self.expect(",")
        y = self.binder()
        self.expect(")")
        self.expect("=")
        s = self.term()
        self.expect("in")
        return LetPair(q0, x, r, y, s, self.term())

    def case(self):
        self.expect("case")
        q0 = self.opt_grade("_")
        s = self.term()
        self.expect("of")
        x1 = self.binder()
        self.expect(".")
        b1 = self.term()
        self.expect(";")
        x2 = self.binder()
        self.expect(".")
        return Case(q0, s, x1, b1, x2, self.term())

    def if_(self):
        self.expect("if")
        c = self.term()
        self.expect("then")
        a = self.term()
        self.expect("else")
        b = self.term()
        x1, x2 = self.wildcard(), self.wildcard()
        one = self.alg.one
        return Case(one, c, x1, LetUnit(one, Var(x1), a), x2, LetUnit(one, Var(x2), b))

    def unseal(self):
        self.expect("unseal")
        g = self.opt_grade("_")
        t = self.app()
        y, w = self.wildcard(), self.wildcard()
        return LetPair(self.alg.one, y, g, w, t, Var(y))

    def binder_type(self):
        kind = self.tok.text
        self.i += 1
        x = self.binder()
        self.expect(":^")
        r = self.grade()
        dom = self.term()
        self.expect(".")
        body = self.term()
        return Pi(x, r, dom, body) if kind == "Pi" else Sigma(x, r, dom, body)

    def arrow(self):
        left = self.sum_()
        if self.eat("->"):
            right = self.term() if self._starts_binder() else self.arrow()
            g, dom = self.ungrade(left)
            return Pi(self.wildcard(), g, dom, right)
        return self.check_plain(left)

    def _starts_binder(self):
        return self.at("\\") or self.at("let") or self.at("case") or self.at("if") or (
            self.tok.kind == "ident" and self.tok.text in ("Pi", "Sigma"))

    def ungrade(self, t):
        if isinstance(t, _Graded):
            return t.g, t.t
        return self.alg.one, t

    def check_plain(self, t):
        if isinstance(t, _Graded):
            self.error("`{}^g A` must be followed by -> or *")
        return t

    def sum_(self):
        left = self.prod()
        while self.at("+"):
            self.i += 1
            right = self.prod()
            left, right = self.check_plain(left), self.check_plain(right)
            if looks_like_type(left) or looks_like_type(right):
                left = Sum(left, right)
            else:
                left = IntAdd(left, right)
        return left

    def prod(self):
        left = self.graded_operand()
        if self.at("*") or self.at("×"):
            self.i += 1
            right = self.prod()
            g, first = self.ungrade(left)
            return Sigma(self.wildcard(), g, first, self.check_plain(right))
        return left

    def graded_operand(self):
        if self.at("{") and self.peek().text == "}":
            self.i += 2
            self.expect("^")
            g = self.grade()
            return _Graded(g, self.app())
        return self.app()

    def app(self):
        t = self.tok
        if self.at("inj1") or self.at("inj2"):
            kw = t.text
            self.i += 1
            arg = self.app_arg_atom()
            return Inj1(arg) if kw == "inj1" else Inj2(arg)
        if self.at("T") and self.peek().text == "_":
            self.i += 2
            g = self.grade()
            a = self.app_arg_atom()
            return Sigma(self.wildcard(), g, a, UNIT_T)
        if (self.at("eta") or self.at("seal")) and self.peek().text == "_":
            self.i += 2
            g = self.grade()
            a = self.app_arg_atom()
            return Pair(a, g, UNIT)
        head = self.atom()
        while self._starts_atom():
            arg = self.atom()
            r = self.grade() if self.eat("^") else self.alg.one
            head = App(head, arg, r)
        return head

    def app_arg_atom(self):
        if (self.at("inj1") or self.at("inj2") or (self.at("T") and self.peek().text == "_")
                or ((self.at("eta") or self.at("seal")) and self.peek().text == "_")):
            return self.app()
        return self.atom()

    def _starts_atom(self):
        t = self.tok
        if t.kind == "int":
            return True
        if t.kind == "ident":
            return t.text not in ("let", "in", "case", "of", "if", "then", "else", "Pi", "Sigma",
                                  "inj1", "inj2", "unseal") and not (
                t.text in ("T", "eta", "seal") and self.peek().text == "_")
        return t.text == "("

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return IntLit(int(t.text))
        if self.at("*") and "*" in self.sorts:
            self.i += 1
            return Sort("*")
        if self.eat("("):
            return self.paren()
        if t.kind == "ident":
            if t.text in self.sorts:
                self.i += 1
                return Sort(t.text)
            simple = {"unit": UNIT, "Unit": UNIT_T, "Int": INT_T, "true": TRUE, "false": FALSE}
            if t.text in simple:
                self.i += 1
                return simple[t.text]
            if t.text == "Bool":
                self.i += 1
                return bool_type()
            if t.text in ("sum", "add"):
                self.i += 1
                self.expect("(")
                a = self.term()
                self.expect(",")
                b = self.term()
                self.expect(")")
                return Sum(a, b) if t.text == "sum" else IntAdd(a, b)
            return Var(self.ident())
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def paren(self):
        first = self.term()
        if self.eat("^"):
            r = self.grade()
            self.expect(",")
            second = self.term()
            self.expect(")")
            return Pair(first, r, second)
        if self.eat(","):
            second = self.term()
            self.expect(")")
            return self.pair_from_app(first, second)
        self.expect(")")
        return first

    def pair_from_app(self, first, second):
        # `(f a^g, b)`: the trailing grade belongs to the pair.
        if isinstance(first, App):
            return Pair(App(first.fun, first.arg, self.alg.one), first.r, second)
        return Pair(first, self.alg.one, second)


def _freshen_wildcards(t):
    """Give `_` binders names that cannot clash with anything in the term."""
    names = all_names(t)
    wild = sorted(n for n in names if n.startswith("_"))
    if not wild:
        return t
    avoid = {n for n in names if not n.startswith("_")}
    mapping = {}
    for w in wild:
        nw = fresh("u", avoid)
        avoid.add(nw)
        mapping[w] = nw
    return _rename_all(t, mapping)


def _rename_all(t, mapping):
    from .syntax import children, rebuild, rename_binders
    t = rename_binders(t, mapping)
    match t:
        case Var(x):
            return Var(mapping.get(x, x))
    kids = [_rename_all(s, mapping) for _, s in children(t)]
    return rebuild(t, kids) if kids else t


def parse(text, alg, sorts=("*", "box")):
    return Parser(text, alg, sorts).parse_all()


def desugar(text, alg, sorts=("*", "box")):
    """Sugar (`T_m A`, `eta_l a`, Bool, if, seal/unseal) is expanded during parsing."""
    return parse(text, alg, sorts)


def parse_grade(text, alg):
    return alg.parse(text)


def parse_context(text, alg, sorts=("*", "box")):
    """`x :^g A, y :^h B` (definitions as `x = a :^g A`) into (name, grade, type, def) entries."""
    p = Parser(text, alg, sorts)
    out = []
    if p.tok.kind == "eof":
        return out
    while True:
        x = p.ident()
        d = None
        if p.eat("="):
            d = p.term()
        p.expect(":^")
        g = p.grade()
        ty = p.term()
        out.append((x, g, _freshen_wildcards(ty), None if d is None else _freshen_wildcards(d)))
        if not p.eat(","):
            break
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return out


def parse_judgment(text, alg, sorts=("*", "box")):
    """`ctx |- term` or just `term`."""
    if "|-" in text or "⊢" in text:
        sep = "|-" if "|-" in text else "⊢"
        head, _, body = text.partition(sep)
        return parse_context(head, alg, sorts), parse(body, alg, sorts)
    return [], parse(text, alg, sorts)
