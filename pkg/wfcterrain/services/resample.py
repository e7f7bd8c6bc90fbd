"""Windowing and bilinear downsampling of heightmaps."""
import logging

import numpy as np

from wfcterrain.errors import GridRangeError, VoidDataError
from wfcterrain.models.domain import HeightMap

logger = logging.getLogger(__name__)


def window(hm: HeightMap, row0: int, col0: int, height: int, width: int) -> HeightMap:
    """Exact copy of the ``height`` x ``width`` sub-grid whose top-left cell is (row0, col0)."""
    if height < 1 or width < 1:
        raise GridRangeError(f"window size must be positive, got {height}x{width}")
    if row0 < 0 or col0 < 0 or row0 + height > hm.rows or col0 + width > hm.cols:
        raise GridRangeError(
            f"window rows {row0}..{row0 + height - 1}, cols {col0}..{col0 + width - 1} "
            f"exceeds {hm.rows}x{hm.cols} grid"
        )
    cells = hm.cells[row0:row0 + height, col0:col0 + width].copy()
    voids = int(np.count_nonzero(cells == hm.nodata))
    if voids:
        raise VoidDataError(f"window at ({row0}, {col0}) contains {voids} void cells")
    return HeightMap(
        cells,
        nodata=hm.nodata,
        xllcorner=hm.xllcorner + col0 * hm.cellsize,
        yllcorner=hm.yllcorner + (hm.rows - row0 - height) * hm.cellsize,
        cellsize=hm.cellsize,
    )


def _sample_axis(size: int, out_size: int, factor: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lower index, upper index and fractional weight of each pixel-centre sample."""
    coords = (np.arange(out_size, dtype=np.float64) + 0.5) * factor - 0.5
    coords = np.clip(coords, 0.0, size - 1)
    lower = np.floor(coords).astype(np.int64)
    upper = np.minimum(lower + 1, size - 1)
    return lower, upper, coords - lower


def _round_half_away(values: np.ndarray) -> np.ndarray:
    return (np.sign(values) * np.floor(np.abs(values) + 0.5)).astype(np.int64)


def _weighted_support(shape: tuple[int, int], rows_axis, cols_axis) -> np.ndarray:
    """Mask of source cells that enter some output sample with nonzero weight."""
    y0, y1, wy = rows_axis
    x0, x1, wx = cols_axis
    used = np.zeros(shape, dtype=bool)
    for rows, row_w in ((y0, 1 - wy), (y1, wy)):
        for cols, col_w in ((x0, 1 - wx), (x1, wx)):
            rr, cc = np.meshgrid(rows, cols, indexing="ij")
            live = np.outer(row_w, col_w) > 0
            used[rr[live], cc[live]] = True
    return used


def downsample_bilinear(hm: HeightMap, factor: int) -> HeightMap:
    """Shrink by an integer factor, sampling source pixel centres bilinearly.

    Output cell (i, j) reads source coordinate ((i+0.5)*factor-0.5,
    (j+0.5)*factor-0.5) clamped to the grid, rounded half away from zero and
    clamped to the input's value range.
    """
    if factor < 1:
        raise GridRangeError(f"downsample factor must be >= 1, got {factor}")
    if factor > hm.rows or factor > hm.cols:
        raise GridRangeError(f"factor {factor} exceeds the {hm.rows}x{hm.cols} grid")

    out_rows, out_cols = hm.rows // factor, hm.cols // factor
    y0, y1, wy = _sample_axis(hm.rows, out_rows, factor)
    x0, x1, wx = _sample_axis(hm.cols, out_cols, factor)

    used = _weighted_support(hm.shape, (y0, y1, wy), (x0, x1, wx))
    support = hm.cells[used]
    voids = int(np.count_nonzero(support == hm.nodata))
    if voids:
        raise VoidDataError(f"downsample support contains {voids} void cells")

    cells = hm.cells.astype(np.float64)
    top = cells[np.ix_(y0, x0)] * (1 - wx) + cells[np.ix_(y0, x1)] * wx
    bottom = cells[np.ix_(y1, x0)] * (1 - wx) + cells[np.ix_(y1, x1)] * wx
    blended = top * (1 - wy)[:, None] + bottom * wy[:, None]

    out = np.clip(_round_half_away(blended), support.min(), support.max())
    logger.debug("downsampled %dx%d by %d to %dx%d", hm.rows, hm.cols, factor, out_rows, out_cols)
    return HeightMap(
        out,
        nodata=hm.nodata,
        xllcorner=hm.xllcorner,
        yllcorner=hm.yllcorner + (hm.rows - out_rows * factor) * hm.cellsize,
        cellsize=hm.cellsize * factor,
    )


def downsample_window(hm: HeightMap, factor: int, row0: int, col0: int, height: int, width: int) -> HeightMap:
    """``window(downsample_bilinear(hm, factor), row0, col0, height, width)`` without touching cells outside its support.

    Only the source rows and columns the window samples are read, so voids
    elsewhere in a tile do not block ingestion.
    """
    if factor < 1:
        raise GridRangeError(f"downsample factor must be >= 1, got {factor}")
    if factor > hm.rows or factor > hm.cols:
        raise GridRangeError(f"factor {factor} exceeds the {hm.rows}x{hm.cols} grid")
    out_rows, out_cols = hm.rows // factor, hm.cols // factor
    if height < 1 or width < 1:
        raise GridRangeError(f"window size must be positive, got {height}x{width}")
    if row0 < 0 or col0 < 0 or row0 + height > out_rows or col0 + width > out_cols:
        raise GridRangeError(
            f"window rows {row0}..{row0 + height - 1}, cols {col0}..{col0 + width - 1} "
            f"exceeds {out_rows}x{out_cols} downsampled grid"
        )

    # one extra source row/col covers the upper bilinear neighbour of the last sample
    row_end = min((row0 + height) * factor + 1, hm.rows)
    col_end = min((col0 + width) * factor + 1, hm.cols)
    crop = HeightMap(hm.cells[row0 * factor:row_end, col0 * factor:col_end], nodata=hm.nodata)
    small = downsample_bilinear(crop, factor)
    return HeightMap(
        small.cells[:height, :width],
        nodata=hm.nodata,
        xllcorner=hm.xllcorner + col0 * factor * hm.cellsize,
        yllcorner=hm.yllcorner + (hm.rows - (row0 + height) * factor) * hm.cellsize,
        cellsize=hm.cellsize * factor,
    )
