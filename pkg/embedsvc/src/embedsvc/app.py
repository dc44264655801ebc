"""FastAPI application implementing the embedding wire protocol.

Routes:
    POST /v1/embed/sentences  {"sentences": [str, ...]}
        -> {"dim": int, "vectors": [[float, ...], ...]}
    POST /v1/embed/tokens     {"sentences": [{"tokens": [str, ...]}, ...]}
        -> {"dim": int, "vectors": [[[float, ...], ...], ...]}

Errors: 400 malformed request, 413 batch larger than MAX_BATCH, 503 while
models are unavailable. All bodies are UTF-8 JSON.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import ServiceConfig
from .encoders import (
    ModelUnavailable,
    SentenceEncoder,
    TokenEncoder,
    make_sentence_encoder,
    make_token_encoder,
)


class SentencesRequest(BaseModel):
    sentences: list[str]

    model_config = {"extra": "forbid"}


class TokenizedSentence(BaseModel):
    tokens: list[str]

    model_config = {"extra": "forbid"}


class TokensRequest(BaseModel):
    sentences: list[TokenizedSentence]

    model_config = {"extra": "forbid"}


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the service; model loading errors surface as 503 per request."""
    app = FastAPI(title="embedsvc", docs_url=None, redoc_url=None)

    sentence_encoder: SentenceEncoder | None = None
    token_encoder: TokenEncoder | None = None
    load_error: str | None = None
    try:
        sentence_encoder = make_sentence_encoder(config.sentence_model_id)
        token_encoder = make_token_encoder(config.token_model_id)
    except ModelUnavailable as exc:
        load_error = str(exc)

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed request"})

    def unavailable() -> JSONResponse:
        return JSONResponse(
            status_code=503, content={"error": f"model loading: {load_error}"}
        )

    def too_large(size: int) -> JSONResponse:
        return JSONResponse(
            status_code=413,
            content={"error": f"batch of {size} exceeds max_batch {config.max_batch}"},
        )

    @app.post("/v1/embed/sentences")
    async def embed_sentences(request: SentencesRequest):
        if sentence_encoder is None:
            return unavailable()
        if len(request.sentences) > config.max_batch:
            return too_large(len(request.sentences))
        vectors = sentence_encoder.encode_sentences(request.sentences)
        return {"dim": sentence_encoder.dim, "vectors": vectors.tolist()}

    @app.post("/v1/embed/tokens")
    async def embed_tokens(request: TokensRequest):
        if token_encoder is None:
            return unavailable()
        if len(request.sentences) > config.max_batch:
            return too_large(len(request.sentences))
        batches = token_encoder.encode_tokens([s.tokens for s in request.sentences])
        return {
            "dim": token_encoder.dim,
            "vectors": [batch.tolist() for batch in batches],
        }

    return app
