"""Forward-difference slope fields and heightmap-level augmentation."""
import logging
from typing import Iterable

import numpy as np

from wfcterrain.errors import GridRangeError, VoidDataError
from wfcterrain.models.domain import DEFAULT_TRANSFORMS, GradientField, HeightMap, Transform, canonical_transforms

logger = logging.getLogger(__name__)


def compute_gradients(hm: HeightMap) -> GradientField:
    """gx[y][x] = H[y][x+1] - H[y][x], gy[y][x] = H[y+1][x] - H[y][x], cropped to (rows-1)x(cols-1)."""
    if hm.rows < 2 or hm.cols < 2:
        raise GridRangeError(f"gradients need at least 2x2 heights, got {hm.rows}x{hm.cols}")
    if hm.has_voids():
        raise VoidDataError(f"heightmap contains {hm.void_count()} void cells")
    cells = hm.cells
    gx = cells[:-1, 1:] - cells[:-1, :-1]
    gy = cells[1:, :-1] - cells[:-1, :-1]
    return GradientField(gx, gy)


def transform_heightmap(hm: HeightMap, transform: Transform | str) -> HeightMap:
    """Reindex the elevation grid; metadata is kept as is."""
    transform = Transform(transform)
    cells = hm.cells
    if transform is Transform.HFLIP:
        cells = cells[:, ::-1]
    elif transform is Transform.VFLIP:
        cells = cells[::-1, :]
    elif transform is Transform.ROT180:
        cells = cells[::-1, ::-1]
    elif transform is Transform.ROT90:
        cells = np.rot90(cells, 1)
    elif transform is Transform.ROT270:
        cells = np.rot90(cells, 3)
    return HeightMap(
        np.ascontiguousarray(cells),
        nodata=hm.nodata,
        xllcorner=hm.xllcorner,
        yllcorner=hm.yllcorner,
        cellsize=hm.cellsize,
    )


def training_set(
    hm: HeightMap,
    transforms: Iterable[Transform | str] = DEFAULT_TRANSFORMS,
    allow_quarter_turns: bool = False,
) -> list[GradientField]:
    """One gradient field per transform, in canonical transform order.

    Quarter turns are rejected unless ``allow_quarter_turns`` is set: they
    exchange what the x and y channels mean. Gradients are recomputed from
    the rotated heightmap, which is that channel exchange done right.
    """
    ordered = canonical_transforms(transforms)
    if not ordered:
        raise ValueError("at least one transform is required")
    turns = [t.value for t in ordered if t.is_quarter_turn]
    if turns and not allow_quarter_turns:
        raise ValueError(f"quarter-turn transforms {turns} need allow_quarter_turns=True")

    fields = [compute_gradients(transform_heightmap(hm, t)) for t in ordered]
    logger.debug("training set: %s", ", ".join(t.value for t in ordered))
    return fields
