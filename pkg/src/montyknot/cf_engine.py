"""Continued fraction calculus in the descending convention.

A coefficient sequence [x_1, ..., x_m] denotes b/a = 1/(x_1 - 1/(x_2 - ...)).
Three flavors are tracked: plain (no constraint beyond nonzero coefficients),
even (every coefficient even), and strict (coefficients at odd positions
even, and a +-2 at an odd position must be followed by a coefficient of the
opposite sign).  Expansions of the even and strict flavors drive the
normal-form recognition of the tight fibered families; the two tail rewrites
implement the diagram isotopies used to reduce those normal forms.

All arithmetic is exact; Fraction throughout, no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import MontyknotError

FLAVORS = ("plain", "even", "strict")


class CFEvalError(MontyknotError):
    """An intermediate denominator vanished; the sequence has no finite slope."""


class NoEvenExpansionError(MontyknotError):
    """No all-even expansion exists (numerator and denominator both odd)."""


class NoStrictExpansionError(MontyknotError):
    """No strict expansion found within the documented search bounds."""


class TailMismatchError(MontyknotError):
    """The rewrite's required tail pattern is absent."""


class NotFamilyFormError(MontyknotError):
    """Input is not of the reducible family shape [(-4,-1)^n] or [(-4,-1)^n, -2, d]."""


def _strict_ok(coeffs):
    # 1-based odd positions are indices 0, 2, 4, ...
    for j in range(0, len(coeffs), 2):
        x = coeffs[j]
        if x % 2 != 0:
            return False
        if abs(x) == 2:
            if j + 1 >= len(coeffs) or coeffs[j + 1] * x > 0:
                return False
    return True


@dataclass(frozen=True)
class ContinuedFraction:
    """Nonzero integer coefficients plus a flavor tag, validated on construction."""

    coeffs: tuple
    flavor: str = "plain"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(x) for x in self.coeffs))
        if not self.coeffs:
            raise ValueError("continued fraction needs at least one coefficient")
        if any(x == 0 for x in self.coeffs):
            raise ValueError("continued fraction coefficients must be nonzero")
        if self.flavor not in FLAVORS:
            raise ValueError("unknown flavor %r" % (self.flavor,))
        if self.flavor == "even" and any(x % 2 for x in self.coeffs):
            raise ValueError("even flavor requires every coefficient even")
        if self.flavor == "strict" and not _strict_ok(self.coeffs):
            raise ValueError("coefficients violate the strict conditions")

    def __len__(self):
        return len(self.coeffs)

    def __str__(self):
        return "[%s]" % ", ".join(str(x) for x in self.coeffs)


def _coeffs_of(cf):
    return cf.coeffs if isinstance(cf, ContinuedFraction) else tuple(int(x) for x in cf)


def eval_cf(cf):
    """Value b/a of the descending continued fraction, as a Fraction in lowest terms.

    Raises CFEvalError when a tail value hits 0, which makes the next level
    (or the final reciprocal) undefined; such a sequence denotes the slope
    infinity rather than a finite fraction.
    """
    coeffs = _coeffs_of(cf)
    tail = Fraction(coeffs[-1])
    for x in reversed(coeffs[:-1]):
        if tail == 0:
            raise CFEvalError("zero tail in %s" % list(coeffs))
        tail = x - 1 / tail
    if tail == 0:
        raise CFEvalError("sequence %s has no finite value" % list(coeffs))
    return 1 / tail


def _check_slope(slope):
    slope = Fraction(slope)
    a, b = slope.denominator, slope.numerator
    if a <= 1 or abs(b) >= a or gcd(a, abs(b)) != 1:
        raise ValueError("slope must be b/a with a > 1, |b| < a, gcd = 1; got %s" % slope)
    return slope


def even_expansion(slope):
    """All-even expansion of the slope, or NoEvenExpansionError when none exists.

    An even expansion exists precisely when numerator and denominator are not
    both odd.  The greedy step picks the even integer nearest the running
    target; the remainder's denominator then shrinks strictly, so no
    backtracking is ever needed and the output is deterministic.
    """
    slope = _check_slope(slope)
    if slope.numerator % 2 and slope.denominator % 2:
        raise NoEvenExpansionError("both parts odd: no all-even expansion of %s" % slope)
    target = Fraction(slope.denominator, slope.numerator)
    coeffs = []
    while True:
        p, q = target.numerator, target.denominator
        floor = p // q
        x = min(
            (c for c in (floor - 1, floor, floor + 1) if c % 2 == 0),
            key=lambda c: abs(target - c),
        )
        coeffs.append(x)
        rem = target - x
        if rem == 0:
            return ContinuedFraction(tuple(coeffs), "even")
        # |rem| < 1 strictly (equality would force both parts of the original
        # slope odd), so the next denominator |rem.numerator| drops below q.
        assert abs(rem.numerator) < q
        target = -1 / rem


# Search bounds for strict expansions.  The candidate window keeps every
# integer within distance 2 of the running target; minimal-length solutions
# of the slopes that occur here (odd denominators) always lie inside it.
_STRICT_MAX_LEN = 24
_STRICT_WINDOW = 2
_STRICT_NODE_CAP = 500_000


def strict_expansion(slope, max_len=_STRICT_MAX_LEN):
    """A strict expansion of the slope: minimal length, then minimal |coefficient| sum.

    Bounded iterative-deepening search; raises NoStrictExpansionError when no
    strict sequence of length <= max_len is found (reported as not-found, not
    as a nonexistence proof).

    Slopes of magnitude >= 1/2 are rejected up front: a strict tail rooted at
    an odd position always evaluates outside [-2, 2] (induction: a terminal
    odd-position coefficient has magnitude >= 4 since +-2 may not end the
    sequence, and the +-2 sign condition pins the following tail to the
    half-line that pushes the value past +-2 again), so every strict sequence
    evaluates strictly inside (-1/2, 1/2).
    """
    slope = _check_slope(slope)
    if 2 * abs(slope.numerator) >= slope.denominator:
        raise NoStrictExpansionError("no strict expansion: |%s| >= 1/2" % slope)
    target0 = Fraction(slope.denominator, slope.numerator)
    nodes = [0]

    def candidates(target, pos, need_sign):
        floor = target.numerator // target.denominator
        cands = []
        for c in range(floor - _STRICT_WINDOW, floor + _STRICT_WINDOW + 2):
            if c == 0 or abs(target - c) > _STRICT_WINDOW:
                continue
            if pos % 2 == 1 and c % 2 != 0:
                continue
            if need_sign is not None and c * need_sign <= 0:
                continue
            cands.append(c)
        cands.sort(key=lambda c: (abs(target - c), abs(c), c))
        return cands

    def dfs(target, pos, need_sign, remaining, acc, sols, failed):
        nodes[0] += 1
        if nodes[0] > _STRICT_NODE_CAP:
            raise NoStrictExpansionError(
                "search exceeded %d nodes for %s" % (_STRICT_NODE_CAP, slope)
            )
        key = (target, pos % 2, need_sign, remaining)
        if key in failed:
            return
        found = False
        for x in candidates(target, pos, need_sign):
            rem = target - x
            forces_next = pos % 2 == 1 and abs(x) == 2
            if rem == 0:
                if remaining == 1 and not forces_next:
                    sols.append(tuple(acc + [x]))
                    found = True
                continue
            if remaining > 1:
                acc.append(x)
                before = len(sols)
                dfs(-1 / rem, pos + 1, -1 if forces_next and x > 0 else (1 if forces_next else None),
                    remaining - 1, acc, sols, failed)
                acc.pop()
                if len(sols) > before:
                    found = True
        if not found:
            failed.add(key)

    for length in range(1, max_len + 1):
        sols = []
        dfs(target0, 1, None, length, [], sols, set())
        if sols:
            best = min(sols, key=lambda s: (sum(abs(x) for x in s), s))
            return ContinuedFraction(best, "strict")
    raise NoStrictExpansionError(
        "no strict expansion of %s within length %d" % (slope, max_len)
    )


def rewrite_tail_41(cf):
    """Replace a trailing (-4, -1) by (-2, +1); the evaluation is unchanged.

    Both tails close to the value -3 at their position, so any prefix
    evaluates identically.
    """
    coeffs = _coeffs_of(cf)
    if len(coeffs) < 2 or coeffs[-2:] != (-4, -1):
        raise TailMismatchError("expected tail (-4, -1) in %s" % list(coeffs))
    return ContinuedFraction(coeffs[:-2] + (-2, 1), "plain")


def rewrite_collapse(cf):
    """Replace a trailing (a-2, -1, -2, d) by (a, d+1); the evaluation is unchanged."""
    coeffs = _coeffs_of(cf)
    if len(coeffs) < 4 or coeffs[-3:-1] != (-1, -2):
        raise TailMismatchError("expected tail (a-2, -1, -2, d) in %s" % list(coeffs))
    a = coeffs[-4] + 2
    d = coeffs[-1]
    if a == 0 or d + 1 == 0:
        raise MontyknotError("rewrite would produce a zero coefficient in %s" % list(coeffs))
    return ContinuedFraction(coeffs[:-4] + (a, d + 1), "plain")


def reduce_family_form(cf):
    """Reduce [(-4,-1)^n] or [(-4,-1)^n, -2, d] (d > 0) to the strict form [-2, d'].

    Applies rewrite_tail_41 once when the sequence ends in (-4, -1), then
    rewrite_collapse until only two coefficients remain.
    """
    coeffs = _coeffs_of(cf)
    body = coeffs
    if len(body) % 2 != 0:
        raise NotFamilyFormError("odd length %d" % len(body))
    if body[-2:] != (-4, -1):
        if len(body) < 2 or body[-2] != -2 or body[-1] <= 0:
            raise NotFamilyFormError("tail is not (-2, d) with d > 0: %s" % list(body))
        body = body[:-2]
    for i in range(0, len(body), 2):
        if body[i : i + 2] != (-4, -1):
            raise NotFamilyFormError("prefix is not (-4,-1) pairs: %s" % list(coeffs))
    current = coeffs
    if current[-2:] == (-4, -1):
        current = rewrite_tail_41(current).coeffs
    while len(current) > 2:
        current = rewrite_collapse(current).coeffs
    if current[0] != -2 or current[1] <= 0:
        raise NotFamilyFormError("reduction left %s" % list(current))
    return ContinuedFraction(current, "strict")
