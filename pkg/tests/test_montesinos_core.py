"""Montesinos calculus: canonical form, determinant, reduction, recognition."""

import itertools
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from montyknot.cf_engine import ContinuedFraction, strict_expansion
from montyknot.diagram import alexander, components, goeritz_det, synthesize
from montyknot.errors import MontyknotError
from montyknot.montesinos_core import (
    EvenTight,
    InvalidFamilyParameters,
    MultipleEvenDenominatorsError,
    NotInFamily,
    OddTight,
    TwoBridgeReductionError,
    TwoBridgeTorus,
    as_montesinos,
    canonicalize,
    determinant_formula,
    even_family_link,
    genus_even_family,
    genus_odd_family,
    genus_odd_hm,
    mirror,
    montesinos_to_pretzel,
    montesinos_type,
    odd_family_link,
    pretzel_to_montesinos,
    recognize_family,
    total_slope,
    two_bridge_reduce,
    two_bridge_to_montesinos,
)
from montyknot.notation import Montesinos, Pretzel, TwoBridge, parse, print_expr

F = Fraction


def test_canonicalize_rotates_even_denominator_first():
    K = canonicalize(parse("M(1/3,1/2,2/5|0)"))
    assert print_expr(K) == "M(1/2,2/5,1/3|0)"
    K2 = parse("M(-1/3,-1/3,-2/5|1)")
    assert canonicalize(K2) == K2
    with pytest.raises(MultipleEvenDenominatorsError):
        canonicalize(parse("M(1/2,1/2|0)"))


def test_montesinos_type():
    assert montesinos_type(canonicalize(parse("M(1/3,1/2,2/5|0)"))) == "even"
    assert montesinos_type(parse("M(-1/3,-1/3,-2/5|1)")) == "odd"
    assert montesinos_type(parse("M(|3)")) == "odd"


def test_mirror_and_total_slope():
    K = parse("M(-1/3,2/5|2)")
    assert mirror(K) == parse("M(1/3,-2/5|-2)")
    assert mirror(mirror(K)) == K
    assert total_slope(K) == 2 - F(1, 3) + F(2, 5)


def test_determinant_formula_vs_oracle():
    cases = [
        ("M(1/3,2/5,3/7|1)", 227),
        ("M(-1/3,-1/3,-2/5|1)", 3),
        ("M(-1/2,-2/3,-6/7|2)", 1),
        ("M(3/4,-2/5,1/3|3)", 221),
        ("M(|0)", 0),
        ("M(|5)", 5),
        ("M(-1/3|1)", 2),
        ("M(1/3,-1/3|0)", 0),
    ]
    for txt, expect in cases:
        K = parse(txt)
        d = determinant_formula(K)
        assert d == expect, (txt, d)
        assert d == goeritz_det(synthesize(K)), txt


def test_odd_family_determinant_specialization():
    # closed form for the odd family: 2^r prod(d_i + 1/2) |1 - sum d_i/(2d_i+1)|
    for r in (3, 4, 5):
        for d in itertools.combinations_with_replacement(range(1, 6), r):
            if sum(d) % 2:
                continue
            K = odd_family_link(d)
            value = 2 ** r
            for di in d:
                value *= F(2 * di + 1, 2)
            value *= abs(1 - sum(F(di, 2 * di + 1) for di in d))
            assert value.denominator == 1
            assert determinant_formula(K) == int(value), d


def test_recognize_family_direct_and_mirrored():
    assert recognize_family(parse("M(-1/3,-1/3,-2/5|1)")) == OddTight(d=(1, 1, 2))
    assert recognize_family(parse("M(1/3,1/3,2/5|-1)")) == OddTight(d=(1, 1, 2), mirrored=True)
    assert recognize_family(parse("M(-1/3,-2/5,-3/7|1)")) == OddTight(d=(1, 2, 3))
    assert recognize_family(parse("M(-2/5,-2/5,-1/3,-1/3|1)")) == OddTight(d=(2, 2, 1, 1))
    assert recognize_family(parse("M(-1/2,-2/3,-6/7|2)")) == EvenTight(m=(1, 2, 6))
    assert recognize_family(parse("M(1/2,2/3,6/7|-2)")) == EvenTight(m=(1, 2, 6), mirrored=True)


def test_recognize_family_is_presentation_invariant():
    # slopes may shift by integers with e compensating; matching must happen
    # on residues, not on the literal family spelling
    assert recognize_family(parse("M(2/3,2/3,3/5|-2)")) == OddTight(d=(1, 1, 2))
    assert recognize_family(parse("M(1/2,-2/3,-6/7|1)")) == EvenTight(m=(1, 2, 6))


def test_recognize_family_rejections():
    for txt in (
        "M(-1/3,-1/3,-1/3|1)",   # wrong parity of sum(d)
        "M(-1/3,-1/3,-2/5|2)",   # total slope off
        "M(-1/3,-1/5,-2/5|1)",   # -1/5 is not -d/(2d+1) for any d
        "M(1/3,1/3,2/5|1)",      # chirally wrong spelling of a family member
    ):
        assert isinstance(recognize_family(parse(txt)), NotInFamily), txt


def test_recognize_family_two_bridge_branch():
    assert recognize_family(parse("M(-1/3,-1/3|1)")) == TwoBridgeTorus(n=3)
    assert recognize_family(parse("M(1/3,1/3|-1)")) == TwoBridgeTorus(n=3, mirrored=True)
    assert recognize_family(parse("M(-1/2,-1/3|1)")) == TwoBridgeTorus(n=1)
    assert recognize_family(parse("M(|5)")) == TwoBridgeTorus(n=5, mirrored=True)
    r = recognize_family(parse("M(-1/3,-2/5|0)"))
    assert isinstance(r, NotInFamily)  # b(11,...) is not T(2, n)
    r = recognize_family(parse("M(-1/2,-1/2|0)"))
    assert isinstance(r, NotInFamily) and "knot" in r.reason
    assert isinstance(recognize_family(parse("M(1/3,-1/3|0)")), NotInFamily)


def test_two_bridge_reduce_anchors():
    cases = [
        ("M(-1/3|1)", TwoBridge(2, 1)),
        ("M(-2/5|0)", TwoBridge(2, 1)),
        ("M(-1/3|0)", TwoBridge(1, 0)),
        ("M(|1)", TwoBridge(1, 0)),
        ("M(-1/3,-1/3|1)", TwoBridge(3, 1)),   # positive trefoil, the mirror pin
        ("M(1/3,1/3|-1)", TwoBridge(3, -1)),
        ("M(|3)", TwoBridge(3, -1)),
        ("M(-2/5|1)", TwoBridge(3, 1)),
    ]
    for txt, expect in cases:
        got = two_bridge_reduce(parse(txt))
        assert got == expect, (txt, got)
    with pytest.raises(TwoBridgeReductionError):
        two_bridge_reduce(parse("M(1/3,-1/3|0)"))  # determinant 0
    with pytest.raises(MontyknotError):
        two_bridge_reduce(parse("M(-1/3,-1/3,-2/5|1)"))  # r = 3 is misuse


def test_two_bridge_reduction_sweep_matches_diagram_oracle():
    slopes = [
        F(b, a)
        for a in (2, 3, 4, 5)
        for b in range(-a + 1, a)
        if b and gcd(abs(b), a) == 1
    ]
    checked = 0
    for r in (0, 1, 2):
        pool = [()] if r == 0 else (
            [(s,) for s in slopes] if r == 1 else itertools.product(slopes, slopes))
        for combo in pool:
            for e in range(-2, 3):
                K = Montesinos(tuple(combo), e)
                try:
                    tb = two_bridge_reduce(K)
                except TwoBridgeReductionError:
                    assert determinant_formula(K) == 0
                    continue
                dk, db = synthesize(K), synthesize(tb)
                assert components(dk) == components(db), (K, tb)
                assert goeritz_det(dk) == goeritz_det(db) == tb.alpha, (K, tb)
                if components(dk) == 1 and tb.alpha > 1:
                    assert alexander(dk) == alexander(db), (K, tb)
                checked += 1
    assert checked > 400


def test_genus_formulas():
    assert genus_odd_family((1, 1, 2)) == 2
    assert genus_odd_family((1, 2, 3)) == 3
    assert genus_odd_family((2, 2)) == 2
    with pytest.raises(InvalidFamilyParameters):
        genus_odd_family((1, 1, 1))
    assert genus_even_family((1, 2, 6)) == 5
    assert genus_even_family((1, 2)) == 2
    assert genus_even_family((1, 2, 2)) == 3
    with pytest.raises(InvalidFamilyParameters):
        genus_even_family((2, 2))


def test_genus_odd_hm_matches_family_formula():
    K = parse("M(-1/3,-1/3,-2/5|1)")
    cfs = [strict_expansion(s) for s in K.slopes]
    assert [c.coeffs for c in cfs] == [(-2, 1), (-2, 1), (-2, 2)]
    assert genus_odd_hm(K, cfs, 1) == 2

    K = parse("M(-1/3,-2/5,-2/5,-3/7|1)")
    cfs = [strict_expansion(s) for s in K.slopes]
    assert genus_odd_hm(K, cfs, 1) == genus_odd_family((1, 2, 2, 3))


def test_genus_odd_hm_validation():
    K = parse("M(-1/3|1)")
    with pytest.raises(MontyknotError):
        genus_odd_hm(K, [strict_expansion(F(-1, 3))], 1)  # non-integer result
    with pytest.raises(MontyknotError):
        genus_odd_hm(K, [ContinuedFraction((-2, 1), "plain")], 1)  # wrong flavor
    with pytest.raises(MontyknotError):
        genus_odd_hm(K, [], 1)  # arity mismatch


def test_family_link_constructors():
    K = odd_family_link((1, 1, 2))
    assert K == parse("M(-1/3,-1/3,-2/5|1)")
    assert even_family_link((1, 2, 6)) == parse("M(-1/2,-2/3,-6/7|2)")
    with pytest.raises(InvalidFamilyParameters):
        odd_family_link((1, 1, 1))
    with pytest.raises(InvalidFamilyParameters):
        even_family_link((2, 2))


def test_montesinos_to_pretzel():
    assert montesinos_to_pretzel((1, 2, 6)) == Pretzel((2, 3, 7, -1))
    assert montesinos_to_pretzel((1, 2)) == Pretzel((2, 3))
    assert montesinos_to_pretzel((3, 2, 2)) == Pretzel((4, 3, 3, -1))
    with pytest.raises(InvalidFamilyParameters):
        montesinos_to_pretzel((2, 2))
    with pytest.raises(InvalidFamilyParameters):
        montesinos_to_pretzel((1,))


def test_montesinos_to_pretzel_preserves_the_link():
    for m in [(1, 2), (1, 2, 2), (1, 2, 6), (3, 2, 2), (1, 4, 4)]:
        K = even_family_link(m)
        P = montesinos_to_pretzel(m)
        dk, dp = synthesize(K), synthesize(P)
        assert goeritz_det(dk) == goeritz_det(dp), m
        if components(dk) == 1:
            assert alexander(dk) == alexander(dp), m


def test_pretzel_to_montesinos():
    assert pretzel_to_montesinos(Pretzel((-2, 3, 7))) == parse("M(-1/2,1/3,1/7|0)")
    assert pretzel_to_montesinos(Pretzel((3, 3))) == parse("M(1/3,1/3|0)")
    # single-crossing regions carry fraction +-1 and fold into e
    assert pretzel_to_montesinos(Pretzel((1, 1))) == parse("M(|2)")
    assert pretzel_to_montesinos(Pretzel((-1, 1))) == parse("M(|0)")
    assert pretzel_to_montesinos(Pretzel((2, -1))) == parse("M(1/2|-1)")


def test_pretzel_conversion_preserves_the_link():
    pretzels = [(-2, 3, 7), (3, 3), (3, -5, 2), (1, 1), (-1, 1), (2, 2, 2),
                (5, -1, -1), (-3, 3)]
    for qs in pretzels:
        P = Pretzel(qs)
        K = pretzel_to_montesinos(P)
        dp, dk = synthesize(P), synthesize(K)
        assert components(dp) == components(dk), qs
        assert goeritz_det(dp) == goeritz_det(dk), qs
        if components(dp) == 1:
            assert alexander(dp) == alexander(dk), qs


def test_two_bridge_conversion_round_trips():
    for alpha in range(2, 14):
        for beta in range(1, alpha):
            if gcd(alpha, beta) != 1:
                continue
            tb = TwoBridge(alpha, beta)
            K = two_bridge_to_montesinos(tb)
            dk, db = synthesize(K), synthesize(tb)
            assert components(dk) == components(db), tb
            assert goeritz_det(dk) == alpha, tb
            if components(db) == 1:
                assert alexander(dk) == alexander(db), tb
            # the reduction names the converted link exactly like the input
            name = two_bridge_reduce(K)
            again = two_bridge_reduce(two_bridge_to_montesinos(name))
            assert name == again, tb


def test_as_montesinos_dispatch():
    K = parse("M(-1/3|1)")
    assert as_montesinos(K) is K
    assert as_montesinos(Pretzel((3, 3))) == parse("M(1/3,1/3|0)")
    assert as_montesinos(TwoBridge(1, 0)) == parse("M(|1)") or \
        determinant_formula(as_montesinos(TwoBridge(1, 0))) == 1
    with pytest.raises(TypeError):
        as_montesinos("M(-1/3|1)")


slope = st.tuples(
    st.integers(min_value=2, max_value=9), st.integers(min_value=1, max_value=8),
    st.booleans(),
).filter(lambda t: t[1] < t[0] and gcd(t[0], t[1]) == 1).map(
    lambda t: Fraction(-t[1] if t[2] else t[1], t[0]))

montesinos_exprs = st.tuples(
    st.lists(slope, max_size=5), st.integers(min_value=-3, max_value=3),
).map(lambda t: Montesinos(tuple(t[0]), t[1]))


@given(montesinos_exprs)
@settings(max_examples=150)
def test_recognition_is_mirror_equivariant(K):
    a, b = recognize_family(K), recognize_family(mirror(K))
    if isinstance(a, NotInFamily):
        assert isinstance(b, NotInFamily)
    else:
        assert type(a) is type(b)
        # the unknot is amphichiral, so its flag carries no information
        if not (isinstance(a, TwoBridgeTorus) and a.n == 1):
            assert a.mirrored != b.mirrored
        for field in ("d", "m", "n"):
            if hasattr(a, field):
                assert getattr(a, field) == getattr(b, field)


@given(montesinos_exprs)
@settings(max_examples=150)
def test_determinant_is_mirror_invariant(K):
    assert determinant_formula(K) == determinant_formula(mirror(K))
