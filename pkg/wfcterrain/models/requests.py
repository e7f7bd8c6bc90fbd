from pydantic import BaseModel, Field

from wfcterrain.services.solver import DEFAULT_MAX_RESTARTS
from wfcterrain.services.stats import DEFAULT_BINS, MagnitudeMode

MAX_SERVICE_CELLS = 256
MAX_SERVICE_RESTARTS = 10 * DEFAULT_MAX_RESTARTS


class ModelUploadRequest(BaseModel):
    model_text: str = Field(min_length=1)


class GenerateRequest(BaseModel):
    model_id: str = Field(pattern=r"^[0-9a-f]{16}$")
    rows: int = Field(ge=1, le=MAX_SERVICE_CELLS)
    cols: int = Field(ge=1, le=MAX_SERVICE_CELLS)
    seed: int = Field(default=0, ge=0)
    max_restarts: int = Field(default=DEFAULT_MAX_RESTARTS, ge=1, le=MAX_SERVICE_RESTARTS)


class EvaluateRequest(BaseModel):
    input_gx: list[list[int]]
    input_gy: list[list[int]]
    output_gx: list[list[int]]
    output_gy: list[list[int]]
    bins: int = Field(default=DEFAULT_BINS, ge=1)
    mode: MagnitudeMode = MagnitudeMode.EUCLIDEAN
