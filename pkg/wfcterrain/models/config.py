"""Validated parameters of one CLI run."""
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from wfcterrain.models.domain import DEFAULT_TRANSFORMS, Transform, parse_transforms
from wfcterrain.services.patterns import AdjacencyMode
from wfcterrain.services.solver import DEFAULT_MAX_RESTARTS
from wfcterrain.services.stats import DEFAULT_BINS, MagnitudeMode
from wfcterrain.services.synthetic import TerrainKind

DEFAULT_FACTOR = 8
DEFAULT_WINDOW_SIZE = 100

Subcommand = Literal["ingest", "extract", "generate", "reconstruct", "evaluate", "render", "synth"]


def _split_ints(text: str, separator: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.replace(" ", "").split(separator))
    except ValueError:
        raise ValueError(f"{what} must be integers separated by {separator!r}, got {text!r}") from None


class RunConfig(BaseModel):
    """Every numeric argument is checked here, before any file is written."""

    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    inputs: list[Path] = Field(default_factory=list)
    out: Optional[Path] = None
    model: Optional[Path] = None
    field: Optional[Path] = None
    output_field: Optional[Path] = None
    reference: Optional[Path] = None
    histogram_out: Optional[Path] = None

    window: Optional[tuple[int, int, int, int]] = None
    factor: int = Field(default=DEFAULT_FACTOR, ge=1)
    allow_quarter_turns: bool = False
    transforms: tuple[Transform, ...] = DEFAULT_TRANSFORMS
    adjacency: AdjacencyMode = AdjacencyMode.OVERLAP
    size: Optional[tuple[int, int]] = None
    seed: int = Field(default=0, ge=0)
    max_restarts: int = Field(default=DEFAULT_MAX_RESTARTS, ge=1)
    parallel_attempts: int = Field(default=1, ge=1)
    count: int = Field(default=1, ge=1)
    base_height: int = 0
    bins: int = Field(default=DEFAULT_BINS, ge=1)
    mode: MagnitudeMode = MagnitudeMode.EUCLIDEAN
    verify: bool = False
    kind: TerrainKind = TerrainKind.SINE
    rows: int = Field(default=DEFAULT_WINDOW_SIZE, ge=1)
    cols: int = Field(default=DEFAULT_WINDOW_SIZE, ge=1)

    @field_validator("window", mode="before")
    @classmethod
    def _parse_window(cls, value):
        """``row,col`` (100x100 window) or ``row,col,height,width``."""
        if value is None or not isinstance(value, str):
            return value
        parts = _split_ints(value, ",", "window")
        if len(parts) == 2:
            parts = parts + (DEFAULT_WINDOW_SIZE, DEFAULT_WINDOW_SIZE)
        if len(parts) != 4:
            raise ValueError(f"window takes row,col[,height,width], got {value!r}")
        return parts

    @field_validator("window")
    @classmethod
    def _check_window(cls, value):
        if value is not None:
            row0, col0, height, width = value
            if row0 < 0 or col0 < 0 or height < 1 or width < 1:
                raise ValueError(f"window origin must be >= 0 and size >= 1, got {value}")
        return value

    @field_validator("size", mode="before")
    @classmethod
    def _parse_size(cls, value):
        """``ROWSxCOLS`` in wave cells."""
        if value is None or not isinstance(value, str):
            return value
        parts = _split_ints(value.lower(), "x", "size")
        if len(parts) != 2:
            raise ValueError(f"size takes ROWSxCOLS, got {value!r}")
        return parts

    @field_validator("size")
    @classmethod
    def _check_size(cls, value):
        if value is not None and min(value) < 1:
            raise ValueError(f"size must be at least 1x1, got {value}")
        return value

    @field_validator("transforms", mode="before")
    @classmethod
    def _parse_transforms(cls, value):
        if isinstance(value, str):
            return parse_transforms(value)
        return value

    @field_validator("transforms")
    @classmethod
    def _check_transforms(cls, value, info):
        turns = [t.value for t in value if t.is_quarter_turn]
        if turns and not info.data.get("allow_quarter_turns", False):
            raise ValueError(f"transforms {turns} need --allow-quarter-turns")
        return value
