"""Integration of gradient fields back into heightmaps.

Heights are accumulated in int64 so no realistic output size or slope can
overflow. A field is integrable exactly when its curl residual is zero
everywhere, and then row-first and column-first integration agree.
"""
import logging

import numpy as np

from wfcterrain.errors import IntegrabilityError
from wfcterrain.models.domain import GradientField, HeightMap
from wfcterrain.models.reports import CurlResidualReport

logger = logging.getLogger(__name__)


def residual_grid(gf: GradientField) -> np.ndarray:
    """(gx[y][x] + gy[y][x+1]) - (gy[y][x] + gx[y+1][x]) over interior cells."""
    gx, gy = gf.gx, gf.gy
    return (gx[:-1, :-1] + gy[:-1, 1:]) - (gy[:-1, :-1] + gx[1:, :-1])


def curl_residual(gf: GradientField) -> CurlResidualReport:
    residual = residual_grid(gf)
    return CurlResidualReport(
        max_abs_residual=int(np.abs(residual).max()) if residual.size else 0,
        violation_count=int(np.count_nonzero(residual)),
        rows=int(residual.shape[0]),
        cols=int(residual.shape[1]),
    )


def _complete_corner(heights: np.ndarray) -> None:
    # no gradient reaches the bottom-right corner; complete it with zero curl
    heights[-1, -1] = heights[-2, -1] + heights[-1, -2] - heights[-2, -2]


def integrate_rows_first(gf: GradientField, base_height: int = 0) -> np.ndarray:
    """First row from cumulative gx, then every column downwards from cumulative gy."""
    gx, gy = gf.gx, gf.gy
    rows, cols = gf.shape
    heights = np.zeros((rows + 1, cols + 1), dtype=np.int64)
    heights[0, 0] = base_height
    heights[0, 1:] = base_height + np.cumsum(gx[0])
    heights[1:, :cols] = heights[0, :cols] + np.cumsum(gy, axis=0)
    heights[1:rows, cols] = heights[1:rows, cols - 1] + gx[1:, cols - 1]
    _complete_corner(heights)
    return heights


def integrate_columns_first(gf: GradientField, base_height: int = 0) -> np.ndarray:
    """First column from cumulative gy, then every row rightwards from cumulative gx."""
    gx, gy = gf.gx, gf.gy
    rows, cols = gf.shape
    heights = np.zeros((rows + 1, cols + 1), dtype=np.int64)
    heights[0, 0] = base_height
    heights[1:, 0] = base_height + np.cumsum(gy[:, 0])
    heights[:rows, 1:] = heights[:rows, :1] + np.cumsum(gx, axis=1)
    heights[rows, 1:cols] = heights[rows - 1, 1:cols] + gy[rows - 1, 1:]
    _complete_corner(heights)
    return heights


def path_deviation(gf: GradientField, base_height: int = 0) -> int:
    """Largest cell difference between the two integration orders."""
    rows_first = integrate_rows_first(gf, base_height)
    cols_first = integrate_columns_first(gf, base_height)
    return int(np.abs(rows_first - cols_first).max())


def integrate(gf: GradientField, base_height: int = 0, verify: bool = False) -> HeightMap:
    """Heightmap of (rows+1) x (cols+1) cells with H[0][0] = ``base_height``.

    Raises IntegrabilityError if any curl residual is nonzero. With
    ``verify`` the column-first result is compared cell by cell as well.
    """
    report = curl_residual(gf)
    if not report.integrable:
        raise IntegrabilityError(report)

    heights = integrate_rows_first(gf, base_height)
    if verify:
        deviation = int(np.abs(heights - integrate_columns_first(gf, base_height)).max())
        if deviation:
            raise AssertionError(f"integration orders disagree by {deviation} m on an integrable field")
        logger.info("verified both integration orders agree on %dx%d heights", *heights.shape)
    return HeightMap(heights)
