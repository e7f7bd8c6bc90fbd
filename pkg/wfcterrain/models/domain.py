"""Raster and gradient types shared across the pipeline."""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

NODATA = -32768
MIN_ELEVATION = -500
MAX_ELEVATION = 9000

_TILE_NAME = re.compile(r"^([NS])(\d{1,2})([EW])(\d{1,3})$", re.IGNORECASE)


def _as_grid(values, name: str) -> np.ndarray:
    grid = np.array(values, dtype=np.int64)
    if grid.ndim != 2 or grid.shape[0] < 1 or grid.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2D grid, got shape {grid.shape}")
    grid.setflags(write=False)
    return grid


@dataclass(frozen=True, eq=False)
class HeightMap:
    """Row-major grid of integer elevations in meters, north row first.

    ``xllcorner``, ``yllcorner`` and ``cellsize`` are passed through to the
    ASCII grid header untouched by any computation.
    """

    cells: np.ndarray
    nodata: int = NODATA
    xllcorner: float = 0.0
    yllcorner: float = 0.0
    cellsize: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "cells", _as_grid(self.cells, "heightmap"))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], **kwargs) -> "HeightMap":
        return cls(np.array(rows, dtype=np.int64), **kwargs)

    @property
    def rows(self) -> int:
        return int(self.cells.shape[0])

    @property
    def cols(self) -> int:
        return int(self.cells.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def void_count(self) -> int:
        return int(np.count_nonzero(self.cells == self.nodata))

    def has_voids(self) -> bool:
        return self.void_count() > 0

    def tolist(self) -> list[list[int]]:
        return self.cells.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeightMap):
            return NotImplemented
        return self.nodata == other.nodata and np.array_equal(self.cells, other.cells)

    __hash__ = None


@dataclass(frozen=True)
class TileId:
    """SRTM tile name, e.g. ``N26E057``; southern/western tiles are negative."""

    northing: int
    easting: int

    @classmethod
    def parse(cls, name: str) -> "TileId":
        stem = name.rsplit("/", 1)[-1].split(".", 1)[0]
        match = _TILE_NAME.match(stem)
        if match is None:
            raise ValueError(f"invalid SRTM tile name: {name!r}")
        ns, lat, ew, lon = match.groups()
        northing = int(lat) if ns.upper() == "N" else -int(lat)
        easting = int(lon) if ew.upper() == "E" else -int(lon)
        return cls(northing, easting)

    def __str__(self) -> str:
        ns = "N" if self.northing >= 0 else "S"
        ew = "E" if self.easting >= 0 else "W"
        return f"{ns}{abs(self.northing):02d}{ew}{abs(self.easting):03d}"


@dataclass(frozen=True, eq=False)
class GradientField:
    """Co-registered forward-difference slopes, ``gx`` along columns and ``gy`` along rows."""

    gx: np.ndarray
    gy: np.ndarray

    def __post_init__(self):
        gx = _as_grid(self.gx, "gx")
        gy = _as_grid(self.gy, "gy")
        if gx.shape != gy.shape:
            raise ValueError(f"gx shape {gx.shape} differs from gy shape {gy.shape}")
        object.__setattr__(self, "gx", gx)
        object.__setattr__(self, "gy", gy)

    @property
    def rows(self) -> int:
        return int(self.gx.shape[0])

    @property
    def cols(self) -> int:
        return int(self.gx.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradientField):
            return NotImplemented
        return np.array_equal(self.gx, other.gx) and np.array_equal(self.gy, other.gy)

    __hash__ = None


class Transform(str, Enum):
    """Heightmap-level augmentation applied before gradients are computed."""

    IDENTITY = "identity"
    HFLIP = "hflip"
    VFLIP = "vflip"
    ROT180 = "rot180"
    ROT90 = "rot90"
    ROT270 = "rot270"

    @property
    def is_quarter_turn(self) -> bool:
        return self in (Transform.ROT90, Transform.ROT270)


DEFAULT_TRANSFORMS: tuple[Transform, ...] = (
    Transform.IDENTITY,
    Transform.HFLIP,
    Transform.VFLIP,
    Transform.ROT180,
)

_TRANSFORM_ORDER = {t: i for i, t in enumerate(Transform)}


def canonical_transforms(transforms: Iterable[Transform | str]) -> tuple[Transform, ...]:
    """Deduplicate and order transforms by declaration order."""
    unique = {Transform(t) for t in transforms}
    return tuple(sorted(unique, key=_TRANSFORM_ORDER.__getitem__))


def parse_transforms(text: str) -> tuple[Transform, ...]:
    """Parse a comma-separated list such as ``identity,hflip``."""
    names = [part.strip().lower() for part in text.split(",") if part.strip()]
    if not names:
        raise ValueError("at least one transform is required")
    try:
        return canonical_transforms(names)
    except ValueError:
        valid = ", ".join(t.value for t in Transform)
        raise ValueError(f"unknown transform in {text!r}; expected any of: {valid}") from None
