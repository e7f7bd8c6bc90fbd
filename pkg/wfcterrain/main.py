from fastapi import FastAPI, HTTPException

from wfcterrain.config import configure_logging
from wfcterrain.errors import DataError, GenerationFailedError
from wfcterrain.models.domain import GradientField
from wfcterrain.models.reports import ComparisonReport
from wfcterrain.models.requests import EvaluateRequest, GenerateRequest, ModelUploadRequest
from wfcterrain.models.responses import GenerateResponse, ModelUploadResponse
from wfcterrain.services.registry import lookup_model, register_model
from wfcterrain.services.solver import generate_with_report
from wfcterrain.services.stats import compare
from wfcterrain.storage.redis_store import get_store

app = FastAPI(title="wfcterrain")
configure_logging()


@app.get("/healthcheck")
def root():
    return {"message": "Healthcheck", "redis": get_store().ping()}


@app.post("/models")
def upload_model(request: ModelUploadRequest) -> ModelUploadResponse:
    try:
        model_id, model = register_model(request.model_text)
    except DataError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return ModelUploadResponse(model_id=model_id, patterns=len(model))


@app.post("/generate")
def generate(request: GenerateRequest) -> GenerateResponse:
    model = lookup_model(request.model_id)
    if model is None:
        raise HTTPException(status_code=404, detail=f"unknown model {request.model_id}")
    try:
        result = generate_with_report(
            model, request.rows, request.cols, request.seed, request.max_restarts
        )
    except GenerationFailedError as exc:
        raise HTTPException(status_code=422, detail={"error": str(exc), "attempts": exc.attempts})
    return GenerateResponse(
        gx=result.field.gx.tolist(),
        gy=result.field.gy.tolist(),
        seed=result.seed,
        attempt=result.attempt,
        attempts_used=result.attempts_used,
    )


@app.post("/evaluate")
def evaluate(request: EvaluateRequest) -> ComparisonReport:
    try:
        return compare(
            GradientField(request.input_gx, request.input_gy),
            GradientField(request.output_gx, request.output_gy),
            bins=request.bins,
            mode=request.mode,
        )
    except (DataError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
