"""HTTP facade over the knot calculus.

Every endpoint is a stateless wrapper: parse the expression, call the library,
serialize the result.  Domain failures (parse errors, links where knots are
required, family-parity violations) come back as HTTP 400 with a detail
message; only genuine service bugs surface as 500s.  The CLI talks to this
app in-process through an ASGI transport, so the service is also the single
choke point for output shapes.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .cf_engine import ContinuedFraction, eval_cf, even_expansion, strict_expansion
from .diagram import alexander, components, export_text, goeritz_det, synthesize
from .errors import MontyknotError
from .laurent import lspace_coefficient_form
from .lspace_pipeline import classify, enumerate_even, enumerate_odd, selftest
from .montesinos_core import (
    EvenTight,
    NotInFamily,
    OddTight,
    TwoBridgeTorus,
    as_montesinos,
    canonicalize,
    genus_even_family,
    genus_odd_family,
    montesinos_type,
    recognize_family,
)
from .notation import Montesinos, ParseError, Pretzel, TwoBridge, parse, print_expr


class ExprRequest(BaseModel):
    expr: str = Field(min_length=1, max_length=4096)


class BoundRequest(BaseModel):
    bound: int = Field(ge=4, le=64)


class CfEvalRequest(BaseModel):
    coeffs: List[int] = Field(min_length=1, max_length=64)


class CfExpandRequest(BaseModel):
    slope: str = Field(min_length=1, max_length=64)


class ParseResponse(BaseModel):
    kind: str
    printed: str


class CanonResponse(BaseModel):
    montesinos: str
    type: str
    r: int


class DetResponse(BaseModel):
    expr: str
    det: int


class ComponentsResponse(BaseModel):
    components: int
    crossings: int
    arcs: int
    free_circles: int


class DiagramResponse(BaseModel):
    text: str


class AlexResponse(BaseModel):
    alexander: str
    span: int
    det_at_minus_one: int
    lspace_form: bool


class FamilyModel(BaseModel):
    variant: str
    mirrored: bool
    d: Optional[Tuple[int, ...]] = None
    m: Optional[Tuple[int, ...]] = None
    n: Optional[int] = None
    reason: Optional[str] = None


class GenusResponse(BaseModel):
    genus: int
    family: FamilyModel


class ClassifyResponse(BaseModel):
    input: str
    canonical: str
    is_knot: bool
    family: FamilyModel
    det: int
    genus: Optional[int]
    det_genus_pass: Optional[bool]
    alexander: Optional[str]
    alex_form_pass: Optional[bool]
    verdict: str
    verdict_basis: Tuple[str, ...]


class EnumerationRowModel(BaseModel):
    parameters: Tuple[int, ...]
    det: int
    two_g_plus_one: int
    survived_cull: bool
    alex_form_pass: Optional[bool]


class EnumerateResponse(BaseModel):
    bound: int
    rows: List[EnumerationRowModel]


class CfResponse(BaseModel):
    coeffs: Tuple[int, ...]
    flavor: str
    value: str


class CheckModel(BaseModel):
    name: str
    ok: bool
    detail: str


class SelfTestResponse(BaseModel):
    ok: bool
    failures: int
    checks: List[CheckModel]


class HealthResponse(BaseModel):
    status: str
    version: str


def _family_model(fam):
    out = FamilyModel(variant=type(fam).__name__, mirrored=fam.mirrored)
    if isinstance(fam, OddTight):
        out.d = fam.d
    elif isinstance(fam, EvenTight):
        out.m = fam.m
    elif isinstance(fam, TwoBridgeTorus):
        out.n = fam.n
    elif isinstance(fam, NotInFamily):
        out.reason = fam.reason
    return out


def _parse_slope(text):
    from fractions import Fraction

    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as err:
        raise MontyknotError("bad slope %r: %s" % (text, err))


def create_app() -> FastAPI:
    app = FastAPI(title="montyknot", version=__version__)

    @app.exception_handler(MontyknotError)
    async def _domain_error(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/parse", response_model=ParseResponse)
    def parse_expr(req: ExprRequest):
        expr = parse(req.expr)
        kind = {Montesinos: "montesinos", Pretzel: "pretzel", TwoBridge: "two_bridge"}[type(expr)]
        return ParseResponse(kind=kind, printed=print_expr(expr))

    @app.post("/canon", response_model=CanonResponse)
    def canon(req: ExprRequest):
        K = canonicalize(as_montesinos(parse(req.expr)))
        return CanonResponse(montesinos=print_expr(K), type=montesinos_type(K), r=K.r)

    @app.post("/det", response_model=DetResponse)
    def det(req: ExprRequest):
        K = as_montesinos(parse(req.expr))
        from .montesinos_core import determinant_formula

        return DetResponse(expr=print_expr(K), det=determinant_formula(K))

    @app.post("/components", response_model=ComponentsResponse)
    def comps(req: ExprRequest):
        d = synthesize(parse(req.expr))
        return ComponentsResponse(components=components(d), crossings=len(d.crossings),
                                  arcs=d.arcs, free_circles=d.free_circles)

    @app.post("/diagram", response_model=DiagramResponse)
    def diagram_text(req: ExprRequest):
        return DiagramResponse(text=export_text(synthesize(parse(req.expr))))

    @app.post("/alex", response_model=AlexResponse)
    def alex(req: ExprRequest):
        poly = alexander(synthesize(parse(req.expr)))
        return AlexResponse(alexander=str(poly), span=poly.span,
                            det_at_minus_one=abs(poly.eval_int(-1)),
                            lspace_form=lspace_coefficient_form(poly))

    @app.post("/genus", response_model=GenusResponse)
    def genus(req: ExprRequest):
        K = canonicalize(as_montesinos(parse(req.expr)))
        fam = recognize_family(K)
        if isinstance(fam, OddTight):
            g = genus_odd_family(fam.d)
        elif isinstance(fam, EvenTight):
            g = genus_even_family(fam.m)
        elif isinstance(fam, TwoBridgeTorus):
            g = (fam.n - 1) // 2
        else:
            raise MontyknotError(
                "genus is computed only for recognized family members (%s)" % fam.reason)
        return GenusResponse(genus=g, family=_family_model(fam))

    @app.post("/classify", response_model=ClassifyResponse)
    def classify_expr(req: ExprRequest):
        rep = classify(parse(req.expr))
        return ClassifyResponse(
            input=req.expr.strip(), canonical=print_expr(rep.canonical),
            is_knot=rep.is_knot, family=_family_model(rep.family), det=rep.det,
            genus=rep.genus, det_genus_pass=rep.det_genus_pass,
            alexander=None if rep.alexander is None else str(rep.alexander),
            alex_form_pass=rep.alex_form_pass, verdict=rep.verdict,
            verdict_basis=rep.verdict_basis,
        )

    def _enum_response(bound, rows):
        return EnumerateResponse(bound=bound, rows=[
            EnumerationRowModel(parameters=r.parameters, det=r.det,
                                two_g_plus_one=r.two_g_plus_one,
                                survived_cull=r.survived_cull,
                                alex_form_pass=r.alex_form_pass)
            for r in rows])

    @app.post("/enumerate/odd", response_model=EnumerateResponse)
    def enum_odd(req: BoundRequest):
        return _enum_response(req.bound, enumerate_odd(req.bound))

    @app.post("/enumerate/even", response_model=EnumerateResponse)
    def enum_even(req: BoundRequest):
        return _enum_response(req.bound, enumerate_even(req.bound))

    @app.post("/cf/eval", response_model=CfResponse)
    def cf_eval(req: CfEvalRequest):
        cf = ContinuedFraction(tuple(req.coeffs), "plain")
        return CfResponse(coeffs=cf.coeffs, flavor="plain", value=str(eval_cf(cf)))

    @app.post("/cf/even", response_model=CfResponse)
    def cf_even(req: CfExpandRequest):
        slope = _parse_slope(req.slope)
        cf = even_expansion(slope)
        return CfResponse(coeffs=cf.coeffs, flavor=cf.flavor, value=str(slope))

    @app.post("/cf/strict", response_model=CfResponse)
    def cf_strict(req: CfExpandRequest):
        slope = _parse_slope(req.slope)
        cf = strict_expansion(slope)
        return CfResponse(coeffs=cf.coeffs, flavor=cf.flavor, value=str(slope))

    @app.get("/selftest", response_model=SelfTestResponse)
    def run_selftest():
        rep = selftest()
        return SelfTestResponse(ok=rep.ok, failures=rep.failures, checks=[
            CheckModel(name=c.name, ok=c.ok, detail=c.detail) for c in rep.checks])

    return app
