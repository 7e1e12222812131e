"""Core Montesinos calculus: canonical form, determinant, genus, families.

The MontesinosLink data model is the notation module's Montesinos expression;
this module adds the knot-theoretic operations on it: canonical rotation and
odd/even type, the closed determinant formula, recognition of the two tight
fibered families (and of torus two-bridge knots for short presentations),
genus formulas, and presentation conversions to pretzel and two-bridge form.

Family recognition works modulo presentation equivalence: a slope may be
written shifted by an integer with e adjusted to compensate, so membership is
decided on the multiset of slope residues mod 1 together with the total slope
e + sum(slopes), never on the literal spelling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Tuple

from .cf_engine import ContinuedFraction, eval_cf
from .errors import MontyknotError
from .notation import Montesinos, Pretzel, TwoBridge

MontesinosLink = Montesinos


class MultipleEvenDenominatorsError(MontyknotError):
    """Two or more even tangle denominators: the link cannot be a knot."""


class TwoBridgeReductionError(MontyknotError):
    """Reduction produced no valid two-bridge pair (determinant zero)."""


class InvalidFamilyParameters(MontyknotError):
    """Family parameters violate the defining parity constraints."""


@dataclass(frozen=True)
class FamilyMembership:
    mirrored: bool = False


@dataclass(frozen=True)
class OddTight(FamilyMembership):
    """M(-d_1/(2d_1+1), ..., -d_r/(2d_r+1) | 1) with every d_i >= 1, sum even."""

    d: Tuple[int, ...] = ()

    def __post_init__(self):
        if not self.d or any(x < 1 for x in self.d):
            raise InvalidFamilyParameters("d parameters must be positive")
        if sum(self.d) % 2:
            raise InvalidFamilyParameters("sum of d parameters must be even (knot condition)")


@dataclass(frozen=True)
class EvenTight(FamilyMembership):
    """M(-m_1/(m_1+1), ..., -m_r/(m_r+1) | 2) with m_1 odd, later m_i even."""

    m: Tuple[int, ...] = ()

    def __post_init__(self):
        if not self.m or any(x < 1 for x in self.m):
            raise InvalidFamilyParameters("m parameters must be positive")
        if self.m[0] % 2 == 0 or any(x % 2 for x in self.m[1:]):
            raise InvalidFamilyParameters("need m_1 odd and m_i even for i >= 2")


@dataclass(frozen=True)
class TwoBridgeTorus(FamilyMembership):
    """The torus knot T(2, n), n odd and positive; n = 1 is the unknot."""

    n: int = 1

    def __post_init__(self):
        if self.n < 1 or self.n % 2 == 0:
            raise InvalidFamilyParameters("torus parameter must be odd and positive")


@dataclass(frozen=True)
class NotInFamily(FamilyMembership):
    reason: str = ""


def canonicalize(K):
    """Cyclically rotate slopes so an even-denominator slope comes first.

    Raises MultipleEvenDenominatorsError when two or more denominators are
    even, since such a Montesinos link has several components and every knot
    query downstream would be meaningless.
    """
    evens = [i for i, s in enumerate(K.slopes) if s.denominator % 2 == 0]
    if len(evens) > 1:
        raise MultipleEvenDenominatorsError(
            "%d even denominators; a Montesinos knot admits at most one" % len(evens)
        )
    if not evens or evens[0] == 0:
        return K
    i = evens[0]
    return Montesinos(K.slopes[i:] + K.slopes[:i], K.e)


def montesinos_type(K):
    """"odd" or "even" by the parity of the leading denominator (canonical K)."""
    if K.slopes and K.slopes[0].denominator % 2 == 0:
        return "even"
    return "odd"


def mirror(K):
    """The mirror image: all slopes and e negated."""
    return Montesinos(tuple(-s for s in K.slopes), -K.e)


def total_slope(K):
    return K.e + sum(K.slopes, Fraction(0))


def determinant_formula(K):
    """det = |prod(alpha_i) * (e + sum(beta_i/alpha_i))|, exactly."""
    val = prod(s.denominator for s in K.slopes) * total_slope(K)
    assert val.denominator == 1, "determinant formula produced a non-integer"
    return abs(int(val))


def _unimodular_completion(n, d):
    """(x, y) with n*y - d*x = 1, for coprime n, d."""
    x0, x1 = 0, 1
    y0, y1 = 1, 0
    a, b = n, d
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    # a = gcd = n*y0 + d*x0 in this loop's bookkeeping
    assert a in (1, -1)
    y, x = a * y0, -a * x0
    assert n * y - d * x == 1
    return x, y


def _canonical_beta(alpha, beta):
    """Smallest-|beta| representative of {beta, beta^-1} mod alpha, ties positive."""
    if alpha == 1:
        return 0
    b = beta % alpha
    candidates = {b, pow(b, -1, alpha)}
    reps = []
    for c in candidates:
        reps.extend((c, c - alpha))
    return min(reps, key=lambda c: (abs(c), -c))


def two_bridge_reduce(K):
    """The two-bridge pair of a length <= 2 Montesinos link.

    The double branched cover is a lens space; flattening its star-shaped
    plumbing (arm for each slope, central e) into a linear chain gives the
    lens parameters as a 2x2 integer matrix product, from which b(alpha, beta)
    is read off.  Only the arm numerators and denominators enter: the chain
    coefficient lists themselves cancel out of the class of beta mod alpha.
    Postcondition alpha = determinant_formula(K) is asserted.  The sign of
    beta is pinned by the convention that B(n, 1) is the positive T(2, n):
    M(-1/3, -1/3 | 1), a plumbing of two positive Hopf bands, maps to B(3, 1).
    """
    if K.r > 2:
        raise MontyknotError("two-bridge reduction needs length <= 2")
    arms = []
    for s in K.slopes:
        v = Fraction(-s.denominator, s.numerator)
        arms.append((v.numerator, v.denominator))
    if not arms:
        p, q = K.e, 1
    else:
        n1, d1 = arms[0]
        p, q = K.e * n1 - d1, n1
        if len(arms) == 2:
            n2, d2 = arms[1]
            x, y = _unimodular_completion(n2, d2)
            p, q = n2 * p - d2 * q, -x * p + y * q
    q = -q  # mirror convention: see docstring anchor
    if p < 0:
        p, q = -p, -q
    if p == 0:
        raise TwoBridgeReductionError("determinant zero: no two-bridge pair")
    assert p == determinant_formula(K)
    if p == 1:
        return TwoBridge(1, 0)
    return TwoBridge(p, _canonical_beta(p, q))


def odd_family_link(d):
    """M(-d_1/(2d_1+1), ..., -d_r/(2d_r+1) | 1)."""
    d = tuple(int(x) for x in d)
    OddTight(d=d)  # parity validation
    return Montesinos(tuple(Fraction(-x, 2 * x + 1) for x in d), 1)


def even_family_link(m):
    """M(-m_1/(m_1+1), ..., -m_r/(m_r+1) | 2)."""
    m = tuple(int(x) for x in m)
    EvenTight(m=m)
    return Montesinos(tuple(Fraction(-x, x + 1) for x in m), 2)


def pretzel_to_montesinos(P):
    """M form of a pretzel: slope 1/q per region, +-1 regions folded into e.

    A single-crossing tangle has fraction +-1 whether drawn as a vertical or
    a horizontal twist, so the +-1 regions migrate into the closure twists.
    """
    slopes = tuple(Fraction(1, q) for q in P.twists if abs(q) >= 2)
    e = sum(q for q in P.twists if abs(q) == 1)
    return Montesinos(slopes, e)


def two_bridge_to_montesinos(tb):
    """A Montesinos presentation K with two_bridge_reduce(K) == b(alpha, beta).

    alpha/beta splits into integer closure twists plus one normal-form slope;
    of the two chiralities of that presentation, the one whose reduction
    round-trips to the canonically named input is returned.
    """
    if tb == TwoBridge(1, 0):
        return Montesinos((), 1)
    target = TwoBridge(tb.alpha, _canonical_beta(tb.alpha, tb.beta))
    frac = Fraction(tb.alpha, tb.beta)
    n = frac.numerator // frac.denominator
    rem = frac - n
    K = Montesinos(() if rem == 0 else (rem,), n)
    if two_bridge_reduce(K) != target:
        K = mirror(K)
        assert two_bridge_reduce(K) == target
    return K


def as_montesinos(expr):
    """Any link expression as a Montesinos presentation of the same link."""
    if isinstance(expr, Montesinos):
        return expr
    if isinstance(expr, Pretzel):
        return pretzel_to_montesinos(expr)
    if isinstance(expr, TwoBridge):
        return two_bridge_to_montesinos(expr)
    raise TypeError("not a link expression: %r" % (expr,))


def montesinos_to_pretzel(m):
    """P(m_1+1, ..., m_r+1, -1 x (r-2)) for even-family parameters (r >= 2)."""
    m = tuple(int(x) for x in m)
    EvenTight(m=m)  # parity validation
    if len(m) < 2:
        raise InvalidFamilyParameters("pretzel conversion needs r >= 2")
    return Pretzel(tuple(x + 1 for x in m) + (-1,) * (len(m) - 2))


def genus_odd_family(d):
    """g = (sum d_i) / 2 for the odd tight family."""
    d = tuple(int(x) for x in d)
    if sum(d) % 2:
        raise InvalidFamilyParameters("odd family is a knot only for even sum(d)")
    return sum(d) // 2


def genus_even_family(m):
    """g = (1 + sum m_i) / 2 for the even tight family."""
    m = tuple(int(x) for x in m)
    EvenTight(m=m)
    return (1 + sum(m)) // 2


def genus_odd_hm(K, strict_cfs, e):
    """Genus of a fibered odd Montesinos knot from strict expansions.

    g = (sum of even-position coefficients over all expansions + |e| - 1) / 2.
    Fiberedness is the caller's responsibility; this is only invoked on
    recognized family members.
    """
    cfs = tuple(strict_cfs)
    if len(cfs) != K.r or e != K.e:
        raise MontyknotError("strict expansions do not match the link")
    total = 0
    for cf, slope in zip(cfs, K.slopes):
        if not isinstance(cf, ContinuedFraction) or cf.flavor != "strict":
            raise MontyknotError("expansions must be strict continued fractions")
        if len(cf.coeffs) % 2:
            raise MontyknotError("strict expansions must have even length here")
        if eval_cf(cf) != slope:
            raise MontyknotError("expansion %s does not evaluate to slope %s" % (cf, slope))
        total += sum(cf.coeffs[1::2])
    num = total + abs(e) - 1
    if num % 2:
        raise MontyknotError("genus formula gave a non-integer; input is not a knot")
    g = num // 2
    assert g >= 0
    return g


def _match_odd(K):
    """OddTight parameters if K is M(-d_i/(2d_i+1)... | 1) up to presentation."""
    if not K.slopes:
        return None
    ds = []
    target = Fraction(1)
    for s in K.slopes:
        a = s.denominator
        if a % 2 == 0:
            return None
        d = (a - 1) // 2
        if d < 1 or s % 1 != Fraction(d + 1, 2 * d + 1):
            return None
        ds.append(d)
        target += Fraction(-d, 2 * d + 1)
    if sum(ds) % 2 or total_slope(K) != target:
        return None
    return tuple(ds)


def _match_even(K):
    """EvenTight parameters if K is M(-m_i/(m_i+1)... | 2) up to presentation."""
    if not K.slopes or K.slopes[0].denominator % 2:
        return None
    ms = []
    target = Fraction(2)
    for s in K.slopes:
        m = s.denominator - 1
        if s % 1 != Fraction(1, m + 1):
            return None
        ms.append(m)
        target += Fraction(-m, m + 1)
    if ms[0] % 2 == 0 or any(m % 2 for m in ms[1:]):
        return None
    if total_slope(K) != target:
        return None
    return tuple(ms)


def recognize_family(K):
    """Membership of K in the tight fibered families, testing both mirrors.

    Length <= 2 presentations reduce to two-bridge form and are recognized as
    T(2, n) when beta is +-1 mod alpha (mirrored records which).  Longer
    presentations are matched against the odd family (slopes -d/(2d+1), e=1)
    and the even family (slopes -m/(m+1), e=2), directly and after mirroring.
    """
    try:
        K = canonicalize(K)
    except MultipleEvenDenominatorsError:
        return NotInFamily(reason="not a knot (several even denominators)")
    if K.r <= 2:
        try:
            tb = two_bridge_reduce(K)
        except TwoBridgeReductionError:
            return NotInFamily(reason="not a knot (determinant zero)")
        if tb.alpha == 1:
            return TwoBridgeTorus(n=1, mirrored=False)
        if tb.alpha % 2 == 0:
            return NotInFamily(reason="not a knot (even two-bridge determinant)")
        if tb.beta % tb.alpha == 1 % tb.alpha:
            return TwoBridgeTorus(n=tb.alpha, mirrored=False)
        if tb.beta % tb.alpha == -1 % tb.alpha:
            return TwoBridgeTorus(n=tb.alpha, mirrored=True)
        return NotInFamily(reason="two-bridge but not T(2, n)")
    for mirrored, cand in ((False, K), (True, mirror(K))):
        ds = _match_odd(cand)
        if ds is not None:
            return OddTight(d=ds, mirrored=mirrored)
        ms = _match_even(cand)
        if ms is not None:
            return EvenTight(m=ms, mirrored=mirrored)
    return NotInFamily(reason="matches neither tight fibered family")
