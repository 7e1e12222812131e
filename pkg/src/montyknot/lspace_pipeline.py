"""Staged L-space classification and the enumeration harness.

classify runs the obstruction pipeline on one expression: component count,
family recognition (two-bridge reduction for short presentations), the
determinant-genus cull det <= 2g+1, the Alexander coefficient-form test
against the planar-diagram oracle, and final identification of the known
L-space forms.  Stages run in a fixed order and stop at the first failure;
verdict_basis records exactly the stages that were evaluated.

enumerate_odd / enumerate_even sweep the two tight fibered families up to a
parameter bound, reporting determinant, 2g+1, the cull outcome, and (for
cull survivors) the Alexander form test.  selftest packages a cross-oracle
agreement run plus the fixed regression anchors into a machine-readable
report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from . import diagram, laurent, montesinos_core
from .cf_engine import eval_cf, strict_expansion
from .errors import MontyknotError
from .laurent import LaurentPoly
from .montesinos_core import (
    EvenTight,
    FamilyMembership,
    Montesinos,
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
    odd_family_link,
    recognize_family,
)

LSPACE = "LSPACE"
NOT_LSPACE = "NOT_LSPACE"
NOT_APPLICABLE_LINK = "NOT_APPLICABLE_LINK"

# Stage tags in pipeline order.  The second slot holds "two_bridge" for
# presentations of length <= 2 and "family" otherwise.
STAGE_ORDER = ("components", "two_bridge", "family", "det_genus", "alexander", "identification")


@dataclass(frozen=True)
class ClassificationReport:
    input: object
    canonical: Montesinos
    is_knot: bool
    family: FamilyMembership
    det: int
    genus: Optional[int]
    det_genus_pass: Optional[bool]
    alexander: Optional[LaurentPoly]
    alex_form_pass: Optional[bool]
    verdict: str
    verdict_basis: Tuple[str, ...]

    def __post_init__(self):
        assert self.verdict in (LSPACE, NOT_LSPACE, NOT_APPLICABLE_LINK)
        slots = [STAGE_ORDER.index(t) for t in self.verdict_basis]
        assert slots == sorted(slots), "stages out of order"
        if self.verdict == LSPACE:
            assert self.det_genus_pass is not False
            assert self.alex_form_pass is not False


@dataclass(frozen=True)
class EnumerationRow:
    parameters: Tuple[int, ...]
    det: int
    two_g_plus_one: int
    survived_cull: bool
    alex_form_pass: Optional[bool] = None

    def __post_init__(self):
        assert self.survived_cull == (self.det <= self.two_g_plus_one)


def _is_identified_lspace_form(fam):
    """The even-family parameter shapes known to be L-space knots.

    m = (1, 2, 2c) up to reordering of the even entries: these are exactly
    the pretzel knots P(-2, 3, 2c+1), plus their mirrors.
    """
    if not isinstance(fam, EvenTight) or len(fam.m) != 3 or fam.m[0] != 1:
        return False
    rest = sorted(fam.m[1:])
    return rest[0] == 2 and rest[1] >= 2


def classify(expr) -> ClassificationReport:
    """Run the full staged pipeline on one parsed link expression."""
    K0 = as_montesinos(expr)
    basis: List[str] = ["components"]

    def report(K, is_knot, fam, det, verdict, genus=None, dg=None, alex=None, af=None):
        return ClassificationReport(
            input=expr, canonical=K, is_knot=is_knot, family=fam, det=det,
            genus=genus, det_genus_pass=dg, alexander=alex, alex_form_pass=af,
            verdict=verdict, verdict_basis=tuple(basis),
        )

    try:
        K = canonicalize(K0)
    except MultipleEvenDenominatorsError as err:
        return report(K0, False, NotInFamily(reason=str(err)),
                      determinant_formula(K0), NOT_APPLICABLE_LINK)
    det = determinant_formula(K)
    if diagram.components(diagram.synthesize(K)) != 1:
        return report(K, False, NotInFamily(reason="not a knot"), det,
                      NOT_APPLICABLE_LINK)

    if K.r <= 2:
        basis.append("two_bridge")
        fam = recognize_family(K)
        if isinstance(fam, TwoBridgeTorus):
            return report(K, True, fam, det, LSPACE, genus=(fam.n - 1) // 2)
        return report(K, True, fam, det, NOT_LSPACE)

    basis.append("family")
    fam = recognize_family(K)
    if isinstance(fam, NotInFamily):
        return report(K, True, fam, det, NOT_LSPACE)

    basis.append("det_genus")
    if isinstance(fam, OddTight):
        genus = genus_odd_family(fam.d)
        form = odd_family_link(fam.d)
        cfs = [strict_expansion(s) for s in form.slopes]
        assert genus_odd_hm(form, cfs, form.e) == genus
    else:
        genus = genus_even_family(fam.m)
    if det > 2 * genus + 1:
        return report(K, True, fam, det, NOT_LSPACE, genus=genus, dg=False)

    basis.append("alexander")
    alex = diagram.alexander(diagram.synthesize(K))
    form_ok = laurent.lspace_coefficient_form(alex)
    if not form_ok:
        return report(K, True, fam, det, NOT_LSPACE, genus=genus, dg=True,
                      alex=alex, af=False)

    basis.append("identification")
    verdict = LSPACE if _is_identified_lspace_form(fam) else NOT_LSPACE
    return report(K, True, fam, det, verdict, genus=genus, dg=True,
                  alex=alex, af=True)


def _sorted_tuples(bound, r_min, parts):
    """Nondecreasing tuples over `parts` with at least r_min entries, sum <= bound."""
    out = []

    def rec(prefix, total, least):
        if len(prefix) >= r_min:
            out.append(tuple(prefix))
        for x in parts:
            if x < least or total + x > bound:
                continue
            prefix.append(x)
            rec(prefix, total + x, x)
            prefix.pop()

    rec([], 0, 0)
    return out


def _row(parameters, link, genus):
    det = determinant_formula(link)
    two_g = 2 * genus + 1
    survived = det <= two_g
    af = None
    if survived:
        alex = diagram.alexander(diagram.synthesize(link))
        af = laurent.lspace_coefficient_form(alex)
    return EnumerationRow(parameters=parameters, det=det, two_g_plus_one=two_g,
                          survived_cull=survived, alex_form_pass=af)


def enumerate_odd(bound: int) -> List[EnumerationRow]:
    """All odd-family knot tuples d_1 <= ... <= d_r, r >= 3, sum(d) <= bound, even."""
    if bound < 4:
        raise MontyknotError("enumeration bound must be at least 4")
    rows = []
    for d in _sorted_tuples(bound, 3, range(1, bound + 1)):
        if sum(d) % 2:
            continue
        rows.append(_row(d, odd_family_link(d), genus_odd_family(d)))
    rows.sort(key=lambda r: (len(r.parameters), r.parameters))
    return rows


def enumerate_even(bound: int) -> List[EnumerationRow]:
    """All even-family tuples (m_1 odd; m_2 <= ... <= m_r even), sum(m) <= bound."""
    if bound < 5:
        raise MontyknotError("enumeration bound must be at least 5")
    rows = []
    for m1 in range(1, bound + 1, 2):
        for rest in _sorted_tuples(bound - m1, 2, range(2, bound + 1, 2)):
            m = (m1,) + rest
            rows.append(_row(m, even_family_link(m), genus_even_family(m)))
    rows.sort(key=lambda r: (len(r.parameters), r.parameters))
    return rows


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class SelfTestReport:
    checks: Tuple[CheckResult, ...]
    failures: int

    @property
    def ok(self):
        return self.failures == 0


def _check(checks, name, fn):
    try:
        detail = fn() or ""
        checks.append(CheckResult(name, True, detail))
    except AssertionError as err:
        checks.append(CheckResult(name, False, str(err) or "assertion failed"))
    except MontyknotError as err:
        checks.append(CheckResult(name, False, "%s: %s" % (type(err).__name__, err)))


def selftest() -> SelfTestReport:
    """Cross-oracle agreement plus the fixed regression anchors."""
    from .notation import parse

    checks: List[CheckResult] = []

    def det_anchors():
        for txt, expect in [("M(-1/3,-2/5,-3/7|1)", 17), ("M(-1/3,-1/3,-2/5|1)", 3),
                            ("M(-1/3,-1/3,-1/3|1)", 0), ("M(1/3,2/5,3/7|1)", 227),
                            ("M(3/4,-2/5,1/3|3)", 221), ("P(-2,3,7)", 1)]:
            K = as_montesinos(parse(txt))
            got = montesinos_core.determinant_formula(K)
            oracle = diagram.goeritz_det(diagram.synthesize(K))
            assert got == expect, "%s: formula %d, expected %d" % (txt, got, expect)
            assert oracle == expect, "%s: oracle %d, expected %d" % (txt, oracle, expect)

    def oracle_sweep():
        import itertools
        from fractions import Fraction
        slopes = [Fraction(b, a) for a in (2, 3, 5) for b in (-2, -1, 1, 2)
                  if abs(b) < a and Fraction(b, a).denominator == a]
        n = 0
        for combo in itertools.combinations(slopes, 3):
            for e in (0, 1):
                K = Montesinos(combo, e)
                d = diagram.synthesize(K)
                det = montesinos_core.determinant_formula(K)
                assert diagram.goeritz_det(d) == det, K
                if diagram.components(d) == 1:
                    alex = diagram.alexander(d)
                    assert abs(alex.eval_int(-1)) == det, K
                    n += 1
        assert n >= 10, "sweep too small (%d knots)" % n
        return "%d knots cross-checked" % n

    def alexander_regression():
        alex = diagram.alexander(diagram.synthesize(parse("M(-1/3,-1/3,-2/5|1)")))
        assert str(alex) == "t^2 + t - 3 + t^-1 + t^-2", str(alex)
        assert not laurent.lspace_coefficient_form(alex), "form must fail on -3"
        alex = diagram.alexander(diagram.synthesize(parse("P(-2,3,7)")))
        assert laurent.lspace_coefficient_form(alex), str(alex)
        assert alex.span == 10, alex.span

    def two_bridge_anchors():
        from .notation import TwoBridge
        for txt, expect in [("M(-1/3|1)", TwoBridge(2, 1)), ("M(-2/5|0)", TwoBridge(2, 1)),
                            ("M(-1/3,-1/3|1)", TwoBridge(3, 1)), ("M(|1)", TwoBridge(1, 0))]:
            got = montesinos_core.two_bridge_reduce(parse(txt))
            assert got == expect, "%s -> %s" % (txt, got)

    def cf_suite():
        from fractions import Fraction
        from .cf_engine import ContinuedFraction, even_expansion, rewrite_collapse, rewrite_tail_41
        for m in range(1, 13):
            assert eval_cf(ContinuedFraction((-2,) * m, "plain")) == Fraction(-m, m + 1)
        for q in range(2, 13):
            for p in range(1 - q, q):
                if p == 0 or Fraction(p, q).denominator != q:
                    continue
                s = Fraction(p, q)
                if not (p % 2 and q % 2):
                    assert eval_cf(even_expansion(s)) == s
                if 2 * abs(p) < q:
                    assert eval_cf(strict_expansion(s)) == s
        before = ContinuedFraction((-2, 1, -4, -1), "plain")
        after = rewrite_tail_41(before)
        assert eval_cf(before) == eval_cf(after)
        before = ContinuedFraction((-4, -1, -2, 3), "plain")
        assert eval_cf(rewrite_collapse(before)) == eval_cf(before)

    def classify_anchors():
        for txt, verdict in [("B(3/1)", LSPACE), ("P(-2,3,7)", LSPACE),
                             ("M(-1/2,-2/3,-6/7|2)", LSPACE),
                             ("M(-1/3,-1/3,-2/5|1)", NOT_LSPACE),
                             ("B(5/2)", NOT_LSPACE), ("M(|0)", NOT_APPLICABLE_LINK)]:
            rep = classify(parse(txt))
            assert rep.verdict == verdict, "%s -> %s" % (txt, rep.verdict)

    _check(checks, "determinant anchors vs oracle", det_anchors)
    _check(checks, "determinant triple-oracle sweep", oracle_sweep)
    _check(checks, "alexander regression values", alexander_regression)
    _check(checks, "two-bridge reduction anchors", two_bridge_anchors)
    _check(checks, "continued fraction suite", cf_suite)
    _check(checks, "classification anchors", classify_anchors)
    failures = sum(1 for c in checks if not c.ok)
    return SelfTestReport(checks=tuple(checks), failures=failures)
