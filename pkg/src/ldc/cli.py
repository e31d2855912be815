"""Command-line front end. Exit codes: 0 accept, 1 reject or stuck, 2 misuse."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .algebra import AlgebraError, FiniteLattice, distributivity_failures, parse_algebra, verify_axioms
from .check_pts import DEFAULT_FUEL, PtsChecker, load_pts
from .check_simple import SimpleChecker
from .errors import CheckError
from .eval_cbn import FuelExhausted, Stepped, Value, step
from .heap import checker_discard, config_types, format_heap, parse_heap, run
from .lnl import LnlParseError, parse_corpus, translate_term, validate
from .oracle import audit
from .parser import ParseError, parse, parse_judgment
from .syntax import show

DEFAULT_ALGEBRA = "nat-exact"
DEFAULT_PTS = "type-in-type"

FORMAT = click.Choice(["human", "structured"])


class Reporter:
    """Human lines or one JSON object per line."""

    def __init__(self, fmt):
        self.fmt = fmt

    def header(self, command, **settings):
        if self.fmt == "structured":
            self.emit({"event": "header", "command": command, **settings})
        else:
            click.echo(f"ldc {command}: " + " ".join(f"{k}={v}" for k, v in settings.items()))

    def line(self, text, **fields):
        if self.fmt == "structured":
            self.emit({"event": "line", "text": text, **fields})
        else:
            click.echo(text)

    def result(self, verdict, **fields):
        if self.fmt == "structured":
            self.emit({"event": "result", "verdict": verdict, **fields})
        else:
            extra = " ".join(f"{k}={v}" for k, v in fields.items())
            click.echo(f"{verdict}{': ' + extra if extra else ''}")

    @staticmethod
    def emit(obj):
        click.echo(json.dumps(obj, default=str))


def _misuse(msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(2)


def _algebra(selector, base_dir):
    try:
        return parse_algebra(selector, base_dir)
    except AlgebraError as err:
        _misuse(str(err))


def _grade(alg, text):
    if text is None:
        return alg.one
    try:
        return alg.parse(text)
    except (AlgebraError, ValueError) as err:
        _misuse(f"bad grade {text!r} for {alg.name}: {err}")


def _program(path, alg, sorts):
    """A judgment file: optional `type:` line, then `ctx |- term` or a bare term."""
    expected_text, body = None, []
    for line in Path(path).read_text().splitlines():
        if line.strip().startswith("type:"):
            expected_text = line.strip()[len("type:"):]
        else:
            body.append(line)
    try:
        ctx, term = parse_judgment("\n".join(body), alg, sorts)
        expected = None if expected_text is None else parse(expected_text, alg, sorts)
    except ParseError as err:
        _misuse(f"{path}:{err}")
    return ctx, term, expected


fuel_option = click.option("--fuel", type=click.IntRange(min=1), envvar="LDC_FUEL", default=DEFAULT_FUEL,
                           show_default=True, help="Step budget; LDC_FUEL sets it from the environment.")
algebra_option = click.option("--algebra", "selector", default=DEFAULT_ALGEBRA, show_default=True,
                              help="nat-exact, nat-bounded, lin3, aff3, *-omega, lattice:NAME|FILE, product(A,B).")
format_option = click.option("--format", "fmt", type=FORMAT, default="human", show_default=True)


@click.group()
def main():
    """Checkers, evaluators and analyses for the graded dependency calculus."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@algebra_option
@click.option("--grade", default=None, help="Observer grade (default: 1 of the algebra).")
@click.option("--expected", default=None, help="Expected type; overrides a `type:` line in the file.")
@click.option("--pts", default=None, help=f"PTS preset or spec file; forces the PTS checker (default {DEFAULT_PTS}).")
@fuel_option
@format_option
def check(file, selector, grade, expected, pts, fuel, fmt):
    """Check a judgment file."""
    base = Path(file).parent
    alg = _algebra(selector, base)
    q = _grade(alg, grade)
    try:
        spec = load_pts(pts or DEFAULT_PTS, base)
    except (OSError, ValueError) as err:
        _misuse(f"PTS spec: {err}")
    ctx, term, exp = _program(file, alg, spec.sorts)
    if expected is not None:
        try:
            exp = parse(expected, alg, spec.sorts)
        except ParseError as err:
            _misuse(f"--expected: {err}")
    out = Reporter(fmt)
    out.header("check", algebra=alg.name, grade=q, pts=spec.name, fuel=fuel, file=file)
    checker = "pts" if pts else "simple"
    try:
        if pts:
            ty = PtsChecker(spec, alg, fuel).check(ctx, term, q, exp)
        else:
            try:
                ty = SimpleChecker(alg).check([e[:3] for e in ctx], term, q, exp)
            except CheckError as err:
                if err.rule != "simple-fragment":
                    raise
                checker = "pts"
                ty = PtsChecker(spec, alg, fuel).check(ctx, term, q, exp)
    except CheckError as err:
        out.result("REJECT", checker=checker, rule=err.rule or "-", reason=err.msg)
        sys.exit(1)
    except FuelExhausted as err:
        out.result("REJECT", checker=checker, rule="fuel", reason=str(err))
        sys.exit(1)
    out.result("ACCEPT", checker=checker, type=show(ty))


@main.command("eval")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@algebra_option
@fuel_option
@format_option
def eval_(file, selector, fuel, fmt):
    """Call-by-name evaluation with a step trace."""
    alg = _algebra(selector, Path(file).parent)
    _, term, _ = _program(file, alg, ("*", "box"))
    out = Reporter(fmt)
    out.header("eval", algebra=alg.name, fuel=fuel, file=file)
    a = term
    for k in range(fuel):
        res = step(a)
        if isinstance(res, Value):
            out.result("VALUE", steps=k, term=show(a))
            return
        if not isinstance(res, Stepped):
            out.result("STUCK", steps=k, term=show(a), reason=res.reason)
            sys.exit(1)
        out.line(f"{k + 1:4} {res.rule:24} {show(res.term)}", step=k + 1, rule=res.rule, term=show(res.term))
        a = res.term
    out.result("FUEL", steps=fuel, term=show(a))
    sys.exit(1)


@main.command()
@click.argument("heap_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("term_file", type=click.Path(exists=True, dir_okay=False))
@algebra_option
@click.option("--grade", default=None, help="Observer grade (default: 1 of the algebra).")
@fuel_option
@format_option
def heap(heap_file, term_file, selector, grade, fuel, fmt):
    """Run a term against a weighted heap."""
    alg = _algebra(selector, Path(heap_file).parent)
    q = _grade(alg, grade)
    try:
        h = parse_heap(Path(heap_file).read_text(), alg)
    except (ParseError, ValueError) as err:
        _misuse(f"{heap_file}: {err}")
    _, term, _ = _program(term_file, alg, ("*", "box"))
    out = Reporter(fmt)
    out.header("heap", algebra=alg.name, grade=q, fuel=fuel, heap=heap_file, term=term_file)
    types = config_types(h, term)
    res = run(h, term, q, fuel, discard=checker_discard(alg, types) if types else None)
    for k, e in enumerate(res.trace, 1):
        out.line(f"{k:4} {e.rule:32} {e.heap_after} {show(e.term_after)}", step=k, rule=e.rule,
                 heap=str(e.heap_after), term=show(e.term_after))
    out.line("final heap:")
    for line in format_heap(res.heap).splitlines():
        out.line(f"  {line}", binding=line)
    if res.status == "value":
        out.result("VALUE", steps=len(res.trace), term=show(res.term))
        return
    out.result(res.status.upper(), steps=len(res.trace), term=show(res.term), reason=res.reason)
    sys.exit(1)


@main.command("translate-lnl")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@format_option
def translate_lnl(file, fmt):
    """Translate LNL judgments and beta pairs; check each translation."""
    from .check_pts import beta_equal

    try:
        judgments, pairs = parse_corpus(Path(file).read_text())
    except LnlParseError as err:
        _misuse(f"{file}: {err}")
    out = Reporter(fmt)
    out.header("translate-lnl", algebra="lin3", file=file)
    bad = 0
    for j in judgments:
        rep = validate(j)
        bad += not rep.ok
        ctx = ", ".join(f"{n} :^{g} {show(t)}" for n, g, t in rep.context)
        out.line(f"{'ok ' if rep.ok else 'BAD'} {ctx} |- {show(rep.term)} :^{rep.grade} {show(rep.type)}",
                 source=j.source, ok=rep.ok, term=show(rep.term), type=show(rep.type), grade=rep.grade,
                 reason="" if rep.ok else rep.message)
        if not rep.ok:
            out.line(f"    {rep.message}")
    for p in pairs:
        left, right = translate_term(p.left), translate_term(p.right)
        same = beta_equal(left, right)
        bad += not same
        out.line(f"{'ok ' if same else 'BAD'} {show(left)} == {show(right)}", source=p.source, ok=same)
    out.result("ACCEPT" if not bad else "REJECT", judgments=len(judgments), pairs=len(pairs), failures=bad)
    if bad:
        sys.exit(1)


@main.command()
@algebra_option
@click.option("--max-size", default=5, show_default=True, type=click.IntRange(min=1))
@click.option("--grades", default=None, help="Comma-separated grades (default: the oracle's candidate set).")
@click.option("--ledger", type=click.Path(dir_okay=False), default=None,
              help="Write acceptance-only divergences here.")
@format_option
def oracle(selector, max_size, grades, ledger, fmt):
    """Compare the checker with derivation search on every small judgment."""
    alg = _algebra(selector, None)
    gs = None if grades is None else [_grade(alg, g) for g in grades.split(",")]
    out = Reporter(fmt)
    out.header("oracle", algebra=alg.name, max_size=max_size,
               grades=",".join(map(str, gs)) if gs else "default", variables="x,y")
    rep = audit(alg, max_size=max_size, grades=gs)
    for d in rep.divergences:
        ctx = ", ".join(f"{n} :^{g} {show(t)}" for n, g, t in d.ctx)
        out.line(f"{d.kind}: {ctx} |- {show(d.term)} :^{d.grade} {show(d.type)} "
                 f"checker={d.checker} oracle={d.oracle}", kind=d.kind)
    if ledger:
        write_ledger(ledger, alg.name, max_size, rep)
    out.result("ACCEPT" if not rep.soundness else "REJECT", terms=rep.terms, typable=rep.typable,
               judgments=rep.judgments, soundness=len(rep.soundness), completeness=len(rep.completeness))
    if rep.soundness:
        sys.exit(1)


def ledger_lines(name, max_size, rep):
    lines = [f"# {name}, size <= {max_size}: {len(rep.completeness)} acceptance-only divergence(s)"]
    for d in rep.completeness:
        ctx = ", ".join(f"{n} :^{g} {show(t)}" for n, g, t in d.ctx)
        lines.append(f"{ctx} |- {show(d.term)} :^{d.grade} {show(d.type)}")
    return lines


def write_ledger(path, name, max_size, rep):
    with open(path, "a") as f:
        f.write("\n".join(ledger_lines(name, max_size, rep)) + "\n")


@main.command("algebra-verify")
@click.argument("selector", default=DEFAULT_ALGEBRA)
@format_option
def algebra_verify(selector, fmt):
    """Check an algebra's claimed laws; lattices also report distributivity witnesses."""
    alg = _algebra(selector, Path.cwd())
    out = Reporter(fmt)
    out.header("algebra-verify", algebra=alg.name)
    rep = verify_axioms(alg)
    for line, r in zip(rep.lines(), rep.results):
        out.line(line, law=r.law, claimed=r.claimed, holds=r.holds, witness=list(r.witness))
    if isinstance(alg, FiniteLattice):
        for law, failures in distributivity_failures(alg).items():
            if failures:
                out.line(f"{law} fails on {len(failures)} triple(s), e.g. {failures[0][1]}", law=law,
                         count=len(failures))
    out.result("ACCEPT" if rep.ok else "REJECT", claimed_failures=len(rep.claimed_failures))
    if not rep.ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
