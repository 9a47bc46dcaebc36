"""HTTP front-end. Run with:  uvicorn coapprox.service.app:app"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..cotrie import UnknownSymbol
from ..order import BudgetExhausted
from ..regex import ParseError
from . import handlers, models

app = FastAPI(
    title="coapprox",
    version=__version__,
    description=(
        "Fuel-indexed evaluation of lazy streams, language tries, and "
        "random-bit samplers: prime sieve audits, regex equivalence, "
        "expectation brackets, and seeded sampling."
    ),
)


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(ParseError)
async def _parse_error(request: Request, exc: ParseError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(UnknownSymbol)
async def _symbol_error(request: Request, exc: UnknownSymbol) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(BudgetExhausted)
async def _budget_error(request: Request, exc: BudgetExhausted) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(handlers.BracketNotConverged)
async def _bracket_error(
    request: Request, exc: handlers.BracketNotConverged
) -> JSONResponse:
    return JSONResponse(
        status_code=409,
        content={
            "detail": str(exc),
            "wp_lower": str(exc.lower),
            "wlp_upper": str(exc.upper),
        },
    )


@app.get("/")
async def health() -> dict:
    return {"name": "coapprox", "version": __version__}


@app.post("/sieve", response_model=models.SieveResponse)
async def sieve(req: models.SieveRequest) -> models.SieveResponse:
    return handlers.run_sieve(req)


@app.post("/regex/match", response_model=models.RegexMatchResponse)
async def regex_match(req: models.RegexMatchRequest) -> models.RegexMatchResponse:
    return handlers.run_regex_match(req)


@app.post("/regex/equiv", response_model=models.RegexEquivResponse)
async def regex_equiv(req: models.RegexEquivRequest) -> models.RegexEquivResponse:
    return handlers.run_regex_equiv(req)


@app.post("/regex/laws", response_model=models.RegexLawsResponse)
async def regex_laws(req: models.RegexLawsRequest) -> models.RegexLawsResponse:
    return handlers.run_regex_laws(req)


@app.post("/wp", response_model=models.WpResponse)
async def wp(req: models.WpRequest) -> models.WpResponse:
    return handlers.run_wp(req)


@app.post("/sample", response_model=models.SampleResponse)
async def sample(req: models.SampleRequest) -> models.SampleResponse:
    return handlers.run_sample(req)


@app.post("/equidist", response_model=models.EquidistResponse)
async def equidist(req: models.EquidistRequest) -> models.EquidistResponse:
    return handlers.run_equidist(req)
