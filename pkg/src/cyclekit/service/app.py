"""FastAPI application exposing the generators, certificates, and searches."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import BudgetExceededError, GraphFormatError, GuardError
from . import handlers
from .models import (
    GenRequest,
    GenResponse,
    SearchRequest,
    SearchResponse,
    SweepRequest,
    SweepResponse,
    VerifyRequest,
    VerifyResponse,
    VersionResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="cyclekit", version=__version__)

    @app.exception_handler(GraphFormatError)
    @app.exception_handler(GuardError)
    @app.exception_handler(ValueError)
    async def bad_input(request: Request, exc: Exception):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(BudgetExceededError)
    async def budget_exhausted(request: Request, exc: Exception):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/api/health")
    async def health():
        return {"status": "ok"}

    @app.get("/api/version", response_model=VersionResponse)
    async def version():
        return VersionResponse(tool="cyclekit", version=__version__)

    @app.post("/api/gen", response_model=GenResponse)
    def gen(request: GenRequest):
        return handlers.run_gen(request)

    @app.post("/api/verify", response_model=VerifyResponse)
    def verify(request: VerifyRequest):
        return handlers.run_verify(request)

    @app.post("/api/search", response_model=SearchResponse)
    def search(request: SearchRequest):
        return handlers.run_search(request)

    @app.post("/api/sweep", response_model=SweepResponse)
    def sweep(request: SweepRequest):
        return handlers.run_sweep(request)

    return app


app = create_app()
