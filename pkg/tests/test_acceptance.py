"""Acceptance gate: seven timed criteria covering the public contract.

Each criterion prints one pass/fail line with its elapsed time against a
fixed budget.  Run with -s to see the lines as they complete.
"""

import itertools
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

from montyknot.cf_engine import (
    CFEvalError,
    ContinuedFraction,
    eval_cf,
    even_expansion,
    rewrite_collapse,
    rewrite_tail_41,
    strict_expansion,
)
from montyknot.diagram import alexander, components, goeritz_det, synthesize
from montyknot.laurent import lspace_coefficient_form
from montyknot.lspace_pipeline import (
    LSPACE,
    NOT_LSPACE,
    classify,
    enumerate_even,
    enumerate_odd,
)
from montyknot.montesinos_core import (
    Montesinos,
    TwoBridgeTorus,
    as_montesinos,
    determinant_formula,
    even_family_link,
    genus_even_family,
    genus_odd_family,
    genus_odd_hm,
    montesinos_to_pretzel,
    odd_family_link,
    two_bridge_reduce,
)
from montyknot.notation import TwoBridge, parse


@contextmanager
def criterion(num, label, budget_s):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        print("criterion %d (%s): FAIL" % (num, label))
        raise
    dt = time.perf_counter() - t0
    ok = dt < budget_s
    print("criterion %d (%s): %s in %.2fs (budget %ds)"
          % (num, label, "PASS" if ok else "FAIL", dt, budget_s))
    assert ok, "criterion %d exceeded budget: %.2fs >= %ds" % (num, dt, budget_s)


def test_criterion_1_determinant_and_cull_anchors():
    with criterion(1, "determinant and cull anchors", 1):
        K = as_montesinos(parse("M(-1/3,-2/5,-3/7|1)"))
        assert determinant_formula(K) == 17
        assert goeritz_det(synthesize(K)) == 17
        assert 2 * genus_odd_family((1, 2, 3)) + 1 == 7
        assert 17 > 7  # culled

        K = as_montesinos(parse("M(-1/3,-1/3,-2/5|1)"))
        assert determinant_formula(K) == 3
        assert goeritz_det(synthesize(K)) == 3
        assert 2 * genus_odd_family((1, 1, 2)) + 1 == 5
        assert 3 <= 5  # survives

        K = as_montesinos(parse("M(-1/3,-1/3,-1/3|1)"))
        assert determinant_formula(K) == 0
        assert components(synthesize(K)) == 2


def test_criterion_2_pinned_non_example():
    # the tabulated 10-crossing counterexample candidate (10_145 spelling)
    with criterion(2, "pinned ten-crossing non-example", 5):
        expr = parse("M(-1/3,-1/3,-2/5|1)")
        alex = alexander(synthesize(expr))
        assert str(alex) == "t^2 + t - 3 + t^-1 + t^-2"
        assert lspace_coefficient_form(alex) is False
        rep = classify(expr)
        assert rep.verdict == NOT_LSPACE
        assert rep.verdict_basis[-1] == "alexander"
        assert rep.alex_form_pass is False


def test_criterion_3_classification_theorem_bound_16():
    with criterion(3, "classification theorem at bound 16", 60):
        # no odd-family tuple with parameter sum <= 16 is an L-space knot
        for row in enumerate_odd(16):
            rep = classify(odd_family_link(row.parameters))
            assert rep.verdict == NOT_LSPACE, row.parameters

        # even-family tuples (r <= 6): L-space exactly on the (1, 2, 2c) shape
        for row in enumerate_even(16):
            m = row.parameters
            if len(m) > 6:
                continue
            rep = classify(even_family_link(m))
            want = LSPACE if (len(m) == 3 and m[0] == 1
                              and sorted(m[1:])[0] == 2) else NOT_LSPACE
            assert rep.verdict == want, m

        # T(2, 2n+1) for 0 <= n <= 10 via the two-bridge stage
        for n in range(0, 11):
            b = TwoBridge(2 * n + 1, 1) if n else TwoBridge(1, 0)
            rep = classify(b)
            assert rep.verdict == LSPACE, n
            assert rep.family == TwoBridgeTorus(n=2 * n + 1, mirrored=False)
            assert rep.genus == n

        # two-bridge sweep vs the arithmetic torus test: b(a, b) is a torus
        # knot iff b = +-1 mod a
        for a in range(1, 22, 2):
            for b in range(1, a) if a > 1 else [0]:
                if a > 1 and math.gcd(a, b) != 1:
                    continue
                rep = classify(TwoBridge(a, b))
                is_torus = a == 1 or b % a in (1, a - 1)
                assert (rep.verdict == LSPACE) == is_torus, (a, b)

        # pinned rejection: b(5, 3) with its oracle-derived polynomial
        rep = classify(TwoBridge(5, 3))
        assert rep.verdict == NOT_LSPACE
        alex = alexander(synthesize(TwoBridge(5, 3)))
        assert str(alex) == "t - 3 + t^-1"
        assert lspace_coefficient_form(alex) is False


def test_criterion_4_even_census_survivors():
    with criterion(4, "even census cull survivors at bound 16", 30):
        rows = enumerate_even(16)
        by = {r.parameters: r for r in rows}
        surv3 = sorted(r.parameters for r in rows
                       if len(r.parameters) == 3 and r.survived_cull)
        expect = sorted([(5, 2, 2), (3, 2, 2), (1, 4, 4), (1, 4, 6)]
                        + [(1, 2, 2 * c) for c in range(1, 7)])
        assert surv3 == expect, surv3
        # (3,2,4) appears in tabulated survivor lists; exact arithmetic culls
        # it (det 13 > 11 = 2g+1), and its coefficient form independently
        # fails, so the non-L-space conclusion stands either way
        assert by[(3, 2, 4)].det == 13
        assert by[(3, 2, 4)].two_g_plus_one == 11
        assert not by[(3, 2, 4)].survived_cull
        alex = alexander(synthesize(even_family_link((3, 2, 4))))
        assert lspace_coefficient_form(alex) is False
        # the sporadic survivors all fail the coefficient form
        for p in [(5, 2, 2), (3, 2, 2), (1, 4, 4), (1, 4, 6)]:
            assert by[p].alex_form_pass is False, p
        # every (1, 2, 2c) tuple in range passes it
        for c in range(1, 7):
            assert by[(1, 2, 2 * c)].alex_form_pass is True, c


def test_criterion_5_randomized_cross_oracle_agreement():
    with criterion(5, "randomized cross-oracle agreement", 120):
        rng = random.Random(20260819)
        knots = 0
        attempts = 0
        while knots < 500:
            attempts += 1
            assert attempts < 20000, "sampler starved"
            r = rng.randint(1, 5)
            slopes = []
            for _ in range(r):
                a = rng.randint(2, 13)
                b = rng.choice([x for x in range(-a + 1, a)
                                if x and math.gcd(x, a) == 1])
                slopes.append(Fraction(b, a))
            K = Montesinos(tuple(slopes), rng.randint(-3, 3))
            d = synthesize(K)
            det = determinant_formula(K)
            assert goeritz_det(d) == det, K
            if components(d) != 1:
                continue
            knots += 1
            alex = alexander(d)
            assert abs(alex.eval_int(-1)) == det, K
            coeffs = dict(alex.items())
            assert all(coeffs.get(-ex) == c for ex, c in coeffs.items()), K

        # even-family members against their pretzel spellings
        pairs = 0
        for m1 in (1, 3):
            for rest_len in (1, 2, 3):
                for rest in itertools.product((2, 4), repeat=rest_len):
                    m = (m1,) + rest
                    K = even_family_link(m)
                    KP = as_montesinos(montesinos_to_pretzel(m))
                    assert determinant_formula(K) == determinant_formula(KP), m
                    assert alexander(synthesize(K)) == alexander(synthesize(KP)), m
                    pairs += 1
        assert pairs == 28


def test_criterion_6_family_genus_vs_polynomial_span():
    with criterion(6, "family genus vs polynomial span", 30):
        odd_tuples = [d for r in (3, 4)
                      for d in itertools.combinations_with_replacement(range(1, 7), r)
                      if sum(d) % 2 == 0]
        for d in odd_tuples:
            form = odd_family_link(d)
            genus = genus_odd_family(d)
            cfs = [strict_expansion(s) for s in form.slopes]
            assert genus_odd_hm(form, cfs, form.e) == genus, d
            alex = alexander(synthesize(form))
            assert alex.span == 2 * genus, d
            assert alex.items()[-1][1] == 1, d  # monic

        even_tuples = [(m1,) + rest for m1 in (1, 3, 5) for r in (1, 2, 3)
                       for rest in itertools.combinations_with_replacement((2, 4, 6), r)]
        for m in even_tuples:
            form = even_family_link(m)
            genus = genus_even_family(m)
            alex = alexander(synthesize(form))
            assert alex.span == 2 * genus, m
            assert alex.items()[-1][1] == 1, m


def test_criterion_7_continued_fraction_calculus():
    with criterion(7, "continued fraction calculus", 10):
        values = [v for v in range(-6, 7) if v]

        def agree(before, after):
            try:
                lhs = eval_cf(before)
            except CFEvalError:
                try:
                    eval_cf(after)
                except CFEvalError:
                    return
                raise AssertionError("divergence lost: %s" % (before.coeffs,))
            assert eval_cf(after) == lhs, before.coeffs

        # exhaustive tail rewrite invariance, length <= 6
        prefixes = [p for k in range(0, 5)
                    for p in itertools.product(values, repeat=k)]
        for prefix in prefixes:
            cf = ContinuedFraction(prefix + (-4, -1), "plain")
            agree(cf, rewrite_tail_41(cf))

        short = [p for k in range(0, 3)
                 for p in itertools.product(values, repeat=k)]
        for prefix in short:
            for c in values:
                if c == -2:  # the rewrite would emit a zero coefficient
                    continue
                for dd in values:
                    if dd == -1:
                        continue
                    cf = ContinuedFraction(prefix + (c, -1, -2, dd), "plain")
                    agree(cf, rewrite_collapse(cf))

        # [-2]^m evaluates to -m/(m+1)
        for m in range(1, 31):
            cf = ContinuedFraction((-2,) * m, "plain")
            assert eval_cf(cf) == Fraction(-m, m + 1)

        # expansion round-trips for denominators up to 50
        for q in range(2, 51):
            for p in range(1 - q, q):
                if p == 0 or math.gcd(p, q) != 1:
                    continue
                s = Fraction(p, q)
                if not (p % 2 and q % 2):
                    assert eval_cf(even_expansion(s)) == s, s
                if 2 * abs(p) < q:
                    cf = strict_expansion(s)
                    assert cf.flavor == "strict"
                    assert eval_cf(cf) == s, s
