from pydantic import BaseModel


class ModelUploadResponse(BaseModel):
    model_id: str
    patterns: int


class GenerateResponse(BaseModel):
    gx: list[list[int]]
    gy: list[list[int]]
    seed: int
    attempt: int
    attempts_used: int
