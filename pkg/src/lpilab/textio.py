"""The text format and the command line.

Expression grammar, shared by both contexts:

    expression := ["-"] term (("+" | "-") term)*
    term       := factor ("*" factor)*
    factor     := atom ["^" integer]
    atom       := INT | name | macro | "(" expression ")"
    integer    := ["-"] INT

Multiplication is always written out; "2x1" is a parse error, "2*x1" is
not. In the Laurent context names are the variables x1 .. x8 (plain x and
y abbreviate x1 and x2) and the macros S(n) and AL(n) expand to the
standard polynomial and its unit-augmented relative. In the quotient
context the only names are the two letters x and y, and exponents must be
nonnegative because nothing there is invertible. A negative exponent on a
parenthesized Laurent expression is accepted exactly when the content is
a single word with coefficient 1; anything else has no inverse worth
guessing at.

Reports are JSON objects on standard output, one per invocation, with a
fixed top-level shape (see report_schema.json); all diagnostics go to
standard error. Exit status 0 means the check held or the requested
object was produced, 1 means a counterexample was found, 2 means the
invocation itself was at fault.
"""

import argparse
import json
import os
import random
import sys
from collections import namedtuple
from fractions import Fraction

from . import checkers
from .errors import Inadmissible, LpiLabError, ParseError
from .freegroup import Word
from .group_algebra import (
    LaurentElement,
    OneVarLaurent,
    al_f2,
    is_admissible,
    normalize,
    profile,
    standard_polynomial,
)
from .matrix_algebra import DEFAULT_CAP, Matrix, parse_algebra
from .quotient_algebra import QuotientElement
from .rings import ZZ, PrimeField, UniPoly, ring_from_descriptor

MAX_VARIABLES = 8

Token = namedtuple("Token", "kind text line col")


def tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalpha() or text[j].isdigit()):
                j += 1
            tokens.append(Token("NAME", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*^(),":
            tokens.append(Token("OP", ch, line, col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("END", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text, ring, context):
        self.tokens = tokenize(text)
        self.pos = 0
        self.ring = ring
        self.context = context

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None, text=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        if text is not None and tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        self.pos += 1
        return tok

    def _one(self):
        if self.context == "laurent":
            return LaurentElement.one(self.ring)
        return QuotientElement.one(self.ring)

    def _constant(self, n):
        return self._one().scale(self.ring.from_int(n))

    def parse(self):
        tok = self.peek()
        if tok.kind == "END":
            raise ParseError("empty expression", tok.line, tok.col)
        e = self.expression()
        tok = self.peek()
        if tok.kind != "END":
            raise ParseError(f"unexpected {tok.text!r} after expression", tok.line, tok.col)
        return e

    def expression(self):
        negate = False
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.take()
            negate = True
        e = self.term()
        if negate:
            e = -e
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.take()
            t = self.term()
            e = e + t if op.text == "+" else e - t
        return e

    def term(self):
        e = self.factor()
        while self.peek().kind == "OP" and self.peek().text == "*":
            self.take()
            e = e.mul(self.factor())
        return e

    def factor(self):
        a = self.atom()
        if self.peek().kind == "OP" and self.peek().text == "^":
            caret = self.take()
            k = self.signed_int()
            a = self._power(a, k, caret)
        return a

    def signed_int(self):
        sign = 1
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.take()
            sign = -1
        tok = self.take("INT")
        return sign * int(tok.text)

    def _power(self, a, k, caret):
        if k >= 0:
            out = self._one()
            for _ in range(k):
                out = out.mul(a)
            return out
        if self.context == "quotient":
            raise ParseError("negative exponents have no meaning in the quotient algebra",
                             caret.line, caret.col)
        terms = list(a.terms.items())
        if len(terms) != 1 or terms[0][1] != self.ring.one:
            raise ParseError("only a single word with coefficient 1 can be inverted",
                             caret.line, caret.col)
        word = terms[0][0] ** k
        return LaurentElement.from_word(self.ring, word)

    def atom(self):
        tok = self.peek()
        if tok.kind == "INT":
            self.take()
            return self._constant(int(tok.text))
        if tok.kind == "NAME":
            return self._name()
        if tok.kind == "OP" and tok.text == "(":
            self.take()
            e = self.expression()
            self.take("OP", ")")
            return e
        raise ParseError(f"expected a value, found {tok.text or 'end of input'!r}",
                         tok.line, tok.col)

    def _name(self):
        tok = self.take("NAME")
        name = tok.text
        if self.context == "quotient":
            if name in ("x", "y"):
                return QuotientElement.letter(self.ring, name)
            raise ParseError(f"unknown name {name!r}; the quotient letters are x and y",
                             tok.line, tok.col)
        if name in ("S", "AL"):
            self.take("OP", "(")
            arg = self.take("INT")
            self.take("OP", ")")
            n = int(arg.text)
            if name == "S":
                return standard_polynomial(n, self.ring)
            return al_f2(n, self.ring)
        if name == "x":
            return LaurentElement.from_word(self.ring, Word.gen(1))
        if name == "y":
            return LaurentElement.from_word(self.ring, Word.gen(2))
        if name[0] == "x" and name[1:].isdigit():
            idx = int(name[1:])
            if 1 <= idx <= MAX_VARIABLES:
                return LaurentElement.from_word(self.ring, Word.gen(idx))
            raise ParseError(f"variable index out of range: {name} (x1 .. x{MAX_VARIABLES})",
                             tok.line, tok.col)
        raise ParseError(f"unknown name {name!r}", tok.line, tok.col)


def parse_element(text, ring=ZZ, context="laurent"):
    """Parse an expression into a Laurent or quotient element."""
    if context not in ("laurent", "quotient"):
        raise ParseError(f"unknown context {context!r}")
    return _Parser(text, ring, context).parse()


def parse_word(text):
    """Parse a free group word: a Laurent expression that is a single word
    with coefficient 1."""
    e = parse_element(text, ZZ, "laurent")
    terms = list(e.terms.items())
    if len(terms) != 1 or terms[0][1] != 1:
        raise ParseError(f"not a single word with coefficient 1: {text!r}")
    return terms[0][0]


# ---------------------------------------------------------------------------
# reports


def serialize(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Matrix):
        return v.as_lists()
    if isinstance(v, (Word, LaurentElement, QuotientElement, OneVarLaurent, UniPoly)):
        return v.format()
    if isinstance(v, dict):
        return {
            (f"x{k}" if isinstance(k, int) else str(k)): serialize(x)
            for k, x in v.items()
        }
    if isinstance(v, (list, tuple)):
        return [serialize(x) for x in v]
    return str(v)


def _report(command, config, outcome, details, witness=None, evaluations=None,
            elapsed_ms=None):
    report = {
        "tool": "lpilab",
        "version": "0.1.0",
        "command": command,
        "config": serialize(config),
        "outcome": outcome,
        "details": serialize(details),
    }
    if witness is not None:
        report["witness"] = serialize(witness)
    if evaluations is not None:
        report["evaluations"] = evaluations
    if elapsed_ms is not None:
        report["elapsed_ms"] = elapsed_ms
    return report


def _emit(report):
    print(json.dumps(report, indent=2, sort_keys=True))


def _emit_verdict(command, config, verdict):
    _emit(_report(command, config, verdict.outcome, verdict.details,
                  witness=verdict.witness, evaluations=verdict.evaluations,
                  elapsed_ms=verdict.elapsed_ms))
    return 0 if verdict.outcome == "holds" else 1


def _config(args, *names):
    cfg = {}
    for name in names:
        cfg[name.replace("-", "_")] = getattr(args, name.replace("-", "_"))
    return cfg


def _resolve_seed(args):
    # randomized runs always report the seed that drove them; a missing
    # --seed is filled in and announced so the run can be reproduced
    if args.seed is None:
        args.seed = random.SystemRandom().randrange(2**32)
        print(f"seed not given; using {args.seed}", file=sys.stderr)
    return args.seed


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_parse(args):
    ring = ring_from_descriptor(args.ring)
    e = parse_element(args.expr, ring, args.context)
    details = {"normal_form": e.format(), "context": args.context, "ring": ring.descriptor()}
    if args.context == "laurent":
        details["terms"] = len(e.terms)
        details["variables"] = sorted(f"x{v}" for v in e.variables())
        details["admissible"] = is_admissible(e)
    else:
        details["support"] = e.support_size()
    _emit(_report("parse", {"ring": args.ring, "context": args.context}, "ok", details))
    return 0


def _cmd_check_lpi(args):
    algebra = parse_algebra(args.algebra)
    e = parse_element(args.expr, ZZ, "laurent")
    if args.mode == "random":
        _resolve_seed(args)
    verdict = checkers.check_lpi(algebra, e, mode=args.mode, budget=args.budget,
                                 seed=args.seed, cap=args.cap, workers=args.workers)
    cfg = _config(args, "mode", "seed", "budget", "cap", "workers")
    cfg["algebra"] = args.algebra
    cfg["expr"] = args.expr
    return _emit_verdict("check-lpi", cfg, verdict)


def _cmd_check_gi(args):
    algebra = parse_algebra(args.algebra)
    w = parse_word(args.word)
    if args.mode == "random":
        _resolve_seed(args)
    verdict = checkers.check_group_identity(algebra, w, mode=args.mode,
                                            budget=args.budget, seed=args.seed,
                                            cap=args.cap)
    cfg = _config(args, "mode", "seed", "budget", "cap")
    cfg["algebra"] = args.algebra
    cfg["word"] = args.word
    return _emit_verdict("check-gi", cfg, verdict)


def _cmd_al_verify(args):
    ring = ring_from_descriptor(args.field)
    if not isinstance(ring, PrimeField):
        raise LpiLabError("al-verify needs a prime field, like Fp:2")
    if args.mode == "random":
        _resolve_seed(args)
    verdict = checkers.al_verify(args.n, ring.p, mode=args.mode, budget=args.budget,
                                 seed=args.seed, cap=args.cap, workers=args.workers)
    cfg = _config(args, "mode", "seed", "budget", "cap", "workers")
    cfg["n"] = args.n
    cfg["field"] = args.field
    return _emit_verdict("al-verify", cfg, verdict)


def _cmd_witness(args):
    ring = ring_from_descriptor(args.ring)
    e = parse_element(args.expr, ring, "laurent")
    result = normalize(e)
    prof = profile(result.element)
    details = {
        "input": e.format(),
        "normalized": result.element.format(),
        "substituted_variable": None if result.variable is None else f"x{result.variable}",
        "k": result.k,
        "l": prof.l,
        "r": prof.r,
        "d": prof.d,
        "admissible": True,
    }
    _emit(_report("witness", {"ring": args.ring, "expr": args.expr}, "ok", details))
    return 0


def _cmd_nilbound(args):
    algebra = parse_algebra(args.algebra)
    if args.mode == "random":
        _resolve_seed(args)
    verdict = checkers.nil_exponent_search(algebra, m_max=args.m_max, mode=args.mode,
                                           budget=args.budget, seed=args.seed,
                                           cap=args.cap)
    cfg = _config(args, "mode", "seed", "budget", "cap")
    cfg["algebra"] = args.algebra
    cfg["m_max"] = args.m_max
    return _emit_verdict("nilbound", cfg, verdict)


def _cmd_annihilator(args):
    algebra = parse_algebra(args.algebra)
    result = checkers.finite_annihilator(algebra, cap=args.cap,
                                         merge_duplicates=not args.keep_duplicates)
    details = {
        "g": result.g.format(),
        "degree": result.g.degree,
        "factors": [[t, r, count] for (t, r), count in result.factors],
        "pairs_checked": result.pairs_checked,
        "merged_duplicates": not args.keep_duplicates,
    }
    cfg = _config(args, "cap")
    cfg["algebra"] = args.algebra
    _emit(_report("annihilator", cfg, "ok", details))
    return 0


def _random_poly(rng, deg_max):
    deg = rng.randint(0, deg_max)
    coeffs = [rng.randint(-5, 5) for _ in range(deg)]
    lead = rng.choice([c for c in range(-5, 6) if c != 0])
    return UniPoly(ZZ, coeffs + [lead])


def _cmd_counterexample(args):
    if args.poly is not None:
        coeffs = [int(c.strip()) for c in args.poly.split(",")]
        g = UniPoly(ZZ, coeffs)
        hit = checkers.infinite_counterexample(g)
        details = {
            "g": g.format(),
            "degree": g.degree,
            "t": hit.t,
            "trials": hit.trials,
            "trial_bound": g.degree + 1,
            "g_of_ab": hit.value,
        }
        witness = {"a": hit.a, "b": hit.b}
        _emit(_report("counterexample", {"poly": args.poly}, "ok", details,
                      witness=witness))
        return 0
    _resolve_seed(args)
    cases = []
    max_trials = 0
    for i in range(args.count):
        rng = random.Random(f"{args.seed}/{i}")
        g = _random_poly(rng, args.deg_max)
        hit = checkers.infinite_counterexample(g)
        max_trials = max(max_trials, hit.trials)
        if hit.trials > g.degree + 1:
            raise LpiLabError("trial bound exceeded; implementation bug")
        cases.append({"g": g.format(), "degree": g.degree, "t": hit.t,
                      "trials": hit.trials})
    details = {
        "count": args.count,
        "deg_max": args.deg_max,
        "max_trials": max_trials,
        "all_within_bound": True,
        "cases": cases[:5],
    }
    cfg = _config(args, "seed")
    cfg["count"] = args.count
    cfg["deg_max"] = args.deg_max
    _emit(_report("counterexample", cfg, "ok", details))
    return 0


def _cmd_bounds(args):
    size_bound, dim_bound = checkers.bounds_from_d(args.d, args.q)
    details = {"d": args.d, "q": args.q, "size_bound": size_bound,
               "dimension_bound": dim_bound}
    _emit(_report("bounds", {"d": args.d, "q": args.q}, "ok", details))
    return 0


def _cmd_quotient(args):
    ring = ring_from_descriptor(args.ring)
    _resolve_seed(args)
    verdict = checkers.quotient_pi_check(args.n, samples=args.samples,
                                         seed=args.seed, ring=ring)
    cfg = _config(args, "seed")
    cfg["n"] = args.n
    cfg["samples"] = args.samples
    cfg["ring"] = args.ring
    return _emit_verdict("quotient", cfg, verdict)


def _cmd_s3_expand(args):
    rec = checkers.s3_expand()
    details = {
        "expansion": rec["expansion"].format(),
        "stated": rec["stated"].format(),
        "match_over_ZZ": rec["match_over_ZZ"],
        "expansion_mod2": rec["expansion_mod2"].format(),
        "stated_mod2": rec["stated_mod2"].format(),
        "match_mod2": rec["match_mod2"],
        "table": rec["table"],
    }
    _emit(_report("s3-expand", {}, "ok", details))
    return 0


def _cmd_idempotents(args):
    algebra = parse_algebra(args.algebra)
    total = sum(1 for m in algebra.enumerate_elements(args.cap) if m.mul(m) == m)
    violators = checkers.idempotent_centrality(algebra, cap=args.cap)
    details = {
        "idempotents": total,
        "noncentral_count": len(violators),
        "noncentral": [
            {"idempotent": e, "noncommuting": m} for e, m in violators
        ],
    }
    cfg = _config(args, "cap")
    cfg["algebra"] = args.algebra
    _emit(_report("idempotents", cfg, "ok", details))
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _env_int(name, fallback):
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise LpiLabError(f"{name} must be an integer, got {raw!r}")


def _add_search_flags(p, workers=True):
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=checkers.DEFAULT_BUDGET)
    p.add_argument("--cap", type=int, default=None)
    if workers:
        p.add_argument("--workers", type=int, default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lpilab",
        description="Exact checks for Laurent polynomial identities on "
                    "matrix and quotient algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse an expression and print its normal form")
    p.add_argument("--expr", required=True)
    p.add_argument("--ring", default="ZZ")
    p.add_argument("--context", choices=("laurent", "quotient"), default="laurent")
    p.set_defaults(handler=_cmd_parse)

    p = sub.add_parser("check-lpi", help="test whether an expression vanishes on an algebra")
    p.add_argument("--expr", required=True)
    p.add_argument("--algebra", required=True)
    _add_search_flags(p)
    p.set_defaults(handler=_cmd_check_lpi)

    p = sub.add_parser("check-gi", help="test a group identity on the unit group")
    p.add_argument("--word", required=True)
    p.add_argument("--algebra", required=True)
    _add_search_flags(p, workers=False)
    p.set_defaults(handler=_cmd_check_gi)

    p = sub.add_parser("al-verify", help="check the standard identity S_2n on n-by-n matrices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", required=True)
    _add_search_flags(p)
    p.set_defaults(handler=_cmd_al_verify)

    p = sub.add_parser("witness", help="normalize an expression and print its degree data")
    p.add_argument("--expr", required=True)
    p.add_argument("--ring", default="ZZ")
    p.set_defaults(handler=_cmd_witness)

    p = sub.add_parser("nilbound", help="search square-zero ground sets for nil exponents")
    p.add_argument("--algebra", required=True)
    p.add_argument("--m-max", type=int, default=None)
    _add_search_flags(p, workers=False)
    p.set_defaults(handler=_cmd_nilbound)

    p = sub.add_parser("annihilator", help="build the finite-algebra annihilating polynomial")
    p.add_argument("--algebra", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--keep-duplicates", action="store_true")
    p.set_defaults(handler=_cmd_annihilator)

    p = sub.add_parser("counterexample",
                       help="square-zero pairs over ZZ defeating any nonzero annihilator")
    p.add_argument("--poly", default=None,
                   help="ascending integer coefficients, comma separated")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--deg-max", type=int, default=6)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=_cmd_counterexample)

    p = sub.add_parser("bounds", help="size and dimension bounds from a witness degree")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("quotient", help="standard identities in the junction-free quotient")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ring", default="ZZ")
    p.set_defaults(handler=_cmd_quotient)

    p = sub.add_parser("s3-expand", help="expand S3(X, Y, XY) and compare forms")
    p.set_defaults(handler=_cmd_s3_expand)

    p = sub.add_parser("idempotents", help="list noncentral idempotents of a finite algebra")
    p.add_argument("--algebra", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(handler=_cmd_idempotents)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "cap") and args.cap is None:
        args.cap = _env_int("LPILAB_CAP", DEFAULT_CAP)
    if hasattr(args, "workers") and args.workers is None:
        args.workers = _env_int("LPILAB_WORKERS", 1)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: parse error at line {exc.line} col {exc.col}: {exc}",
              file=sys.stderr)
        return 2
    except Inadmissible as exc:
        print(f"error: inadmissible input: {exc}", file=sys.stderr)
        return 2
    except LpiLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
