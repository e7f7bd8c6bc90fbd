"""Deterministic terrain fixtures for runs without SRTM tiles."""
from enum import Enum

import numpy as np

from wfcterrain.models.domain import MAX_ELEVATION, MIN_ELEVATION, HeightMap

SINE_AMPLITUDE = 50
SINE_PERIOD = 16
RANDOM_WALK_BASE = 1000
RANDOM_WALK_STEP = 3


class TerrainKind(str, Enum):
    RAMP = "ramp"
    SINE = "sine"
    RANDOM_WALK = "random-walk"


def synthetic_terrain(kind: TerrainKind | str, rows: int, cols: int, seed: int = 0) -> HeightMap:
    """Build a ``rows`` x ``cols`` heightmap; identical arguments give identical grids.

    ``ramp`` is the column index, ``sine`` a 50 m egg-crate of period 16 px,
    ``random-walk`` a 2D cumulative sum of seeded steps in [-3, 3] around 1000 m.
    """
    kind = TerrainKind(kind)
    if rows < 1 or cols < 1:
        raise ValueError(f"terrain size must be positive, got {rows}x{cols}")

    if kind is TerrainKind.RAMP:
        cells = np.tile(np.arange(cols, dtype=np.int64), (rows, 1))
    elif kind is TerrainKind.SINE:
        y = np.arange(rows)[:, None]
        x = np.arange(cols)[None, :]
        phase = 2 * np.pi / SINE_PERIOD
        cells = np.rint(SINE_AMPLITUDE * np.sin(phase * x) * np.cos(phase * y)).astype(np.int64)
    else:
        rng = np.random.default_rng(seed)
        steps = rng.integers(-RANDOM_WALK_STEP, RANDOM_WALK_STEP + 1, size=(rows, cols))
        cells = RANDOM_WALK_BASE + np.cumsum(np.cumsum(steps, axis=0), axis=1)

    return HeightMap(np.clip(cells, MIN_ELEVATION, MAX_ELEVATION).astype(np.int64))
