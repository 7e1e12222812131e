"""Textual notation for Montesinos, pretzel, and two-bridge links.

Grammar (whitespace-insensitive, ASCII):

    M(f1,...,fr|e)   Montesinos: slopes f_i as p/q or integers, integer e
    P(q1,...,qk)     pretzel: nonzero integer twist parameters
    B(a/b)           two-bridge: positive a, integer b coprime to a

Parsing is forgiving about slope ranges (integer parts of Montesinos slopes
move into e; two-bridge b is folded mod a) but strict about well-formedness:
a written fraction must be in lowest terms, denominators must be nonzero, and
pretzel parameters must be nonzero.  Printing emits the canonical spelling,
and parse(print_expr(x)) == x for every valid expression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Tuple, Union

from .errors import MontyknotError


class ParseError(MontyknotError):
    """Malformed notation text; `position` is the 1-based column of the fault."""

    def __init__(self, message, position):
        super().__init__("column %d: %s" % (position, message))
        self.position = position


@dataclass(frozen=True)
class Montesinos:
    """M(beta_1/alpha_1, ..., beta_r/alpha_r | e) with alpha_i > 1, |beta_i| < alpha_i.

    slopes may be empty: M(|e) is the numerator closure of a bare horizontal
    twist region, the (2, e) torus link.
    """

    slopes: Tuple[Fraction, ...]
    e: int

    def __post_init__(self):
        object.__setattr__(self, "slopes", tuple(Fraction(s) for s in self.slopes))
        object.__setattr__(self, "e", int(self.e))
        for s in self.slopes:
            if s.denominator <= 1 or abs(s.numerator) >= s.denominator:
                raise ValueError("slope %s not in normal range 0 < |b| < a" % s)

    @property
    def r(self):
        return len(self.slopes)


@dataclass(frozen=True)
class Pretzel:
    """P(q_1, ..., q_k): vertical twist regions, each parameter nonzero."""

    twists: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(q) for q in self.twists))
        if not self.twists:
            raise ValueError("pretzel needs at least one twist parameter")
        if any(q == 0 for q in self.twists):
            raise ValueError("pretzel twist parameters must be nonzero")


@dataclass(frozen=True)
class TwoBridge:
    """b(alpha, beta) with 0 < |beta| < alpha and gcd(alpha, beta) = 1.

    The unknot is the special pair (1, 0), the only case with beta = 0.
    """

    alpha: int
    beta: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", int(self.alpha))
        object.__setattr__(self, "beta", int(self.beta))
        if self.alpha == 1 and self.beta == 0:
            return
        if self.alpha <= 1 or not 0 < abs(self.beta) < self.alpha:
            raise ValueError("need 0 < |beta| < alpha, got (%d, %d)" % (self.alpha, self.beta))
        if gcd(self.alpha, abs(self.beta)) != 1:
            raise ValueError("pair (%d, %d) not coprime" % (self.alpha, self.beta))


LinkExpr = Union[Montesinos, Pretzel, TwoBridge]

_TOKEN = re.compile(r"-?\d+|[A-Za-z]+|[(),|/]")


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError("unexpected character %r" % text[i], i + 1)
        tokens.append((m.group(), i + 1))
        i = m.end()
    tokens.append(("", n + 1))  # end marker
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0]

    def take(self, expected=None):
        tok, col = self.tokens[self.pos]
        if expected is not None and tok != expected:
            what = "end of input" if tok == "" else repr(tok)
            raise ParseError("expected %r, found %s" % (expected, what), col)
        self.pos += 1
        return tok, col

    def integer(self):
        tok, col = self.take()
        if not re.fullmatch(r"-?\d+", tok or " "):
            what = "end of input" if tok == "" else repr(tok)
            raise ParseError("expected an integer, found %s" % what, col)
        return int(tok), col

    def fraction_raw(self):
        """A `p/q` or bare-integer token pair: ((p, q) or (p, None), column)."""
        p, col = self.integer()
        if self.peek() == "/":
            self.take("/")
            q, _ = self.integer()
            return (p, q), col
        return (p, None), col


def _normalize_slope(p, q, col):
    if q == 0:
        raise ParseError("zero denominator in %d/%d" % (p, q), col)
    if q < 0:
        p, q = -p, -q
    if gcd(abs(p), q) != 1:
        raise ParseError("fraction %d/%d is not in lowest terms" % (p, q), col)
    return p, q


def parse(text):
    """Parse notation text into a LinkExpr.

    Montesinos slopes written with |p| >= q have their integer part moved
    into e (and drop out entirely when the remainder is zero); the written
    fraction itself must already be in lowest terms with a nonzero
    denominator.  Two-bridge input is folded to 0 < beta < alpha when written
    out of range, and B(1/q) always denotes the unknot pair (1, 0).
    """
    parser = _Parser(text)
    head, col = parser.take()
    if head == "M":
        return _parse_montesinos(parser)
    if head == "P":
        return _parse_pretzel(parser)
    if head == "B":
        return _parse_two_bridge(parser)
    what = "end of input" if head == "" else repr(head)
    raise ParseError("expected 'M', 'P' or 'B', found %s" % what, col)


def _finish(parser, expr):
    tok, col = parser.tokens[parser.pos]
    if tok != "":
        raise ParseError("trailing input %r" % tok, col)
    return expr


def _parse_montesinos(parser):
    parser.take("(")
    e = 0
    slopes = []
    first = True
    while not (first and parser.peek() == "|"):
        first = False
        (p, q), col = parser.fraction_raw()
        if q is None:
            e += p
        else:
            p, q = _normalize_slope(p, q, col)
            if abs(p) >= q:
                # out-of-range slope: peel the integer part into e
                shift, p = divmod(p, q)
                e += shift
            if p != 0:
                slopes.append(Fraction(p, q))
        if parser.peek() != ",":
            break
        parser.take(",")
    parser.take("|")
    e0, _ = parser.integer()
    parser.take(")")
    return _finish(parser, Montesinos(tuple(slopes), e + e0))


def _parse_pretzel(parser):
    parser.take("(")
    twists = []
    while True:
        q, col = parser.integer()
        if q == 0:
            raise ParseError("zero pretzel parameter", col)
        twists.append(q)
        if parser.peek() != ",":
            break
        parser.take(",")
    parser.take(")")
    return _finish(parser, Pretzel(tuple(twists)))


def _parse_two_bridge(parser):
    parser.take("(")
    (a, b), col = parser.fraction_raw()
    if b is None:
        raise ParseError("two-bridge notation needs a/b", col)
    # the written fraction is alpha/beta; alpha must come out positive
    if a < 0:
        a, b = -a, -b
    if a == 0:
        raise ParseError("two-bridge alpha must be positive", col)
    if gcd(a, abs(b)) != 1:
        raise ParseError("pair %d/%d is not coprime" % (a, b), col)
    parser.take(")")
    if a == 1:
        return _finish(parser, TwoBridge(1, 0))
    if not 0 < abs(b) < a:
        b %= a
    return _finish(parser, TwoBridge(a, b))


def print_expr(expr):
    """Canonical text for a LinkExpr; parse(print_expr(x)) == x."""
    if isinstance(expr, Montesinos):
        parts = ["%d/%d" % (s.numerator, s.denominator) for s in expr.slopes]
        return "M(%s|%d)" % (",".join(parts), expr.e)
    if isinstance(expr, Pretzel):
        return "P(%s)" % ",".join(str(q) for q in expr.twists)
    if isinstance(expr, TwoBridge):
        return "B(%d/%d)" % (expr.alpha, expr.beta)
    raise TypeError("not a LinkExpr: %r" % (expr,))
