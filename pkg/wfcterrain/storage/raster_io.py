"""Raster file formats: SRTM .hgt tiles, ESRI ASCII grids and 16-bit PGM renders."""
from __future__ import annotations

import logging
import math
from pathlib import Path

import numpy as np

from wfcterrain.errors import GridParseError, MalformedFileError
from wfcterrain.models.domain import MAX_ELEVATION, MIN_ELEVATION, NODATA, GradientField, HeightMap, TileId
from wfcterrain.storage.files import atomic_write, atomic_write_many

logger = logging.getLogger(__name__)

PGM_MAXVAL = 65535
PGM_MIDGRAY = 32768

_REQUIRED_KEYS = ("ncols", "nrows")
_HEADER_KEYS = (
    "ncols", "nrows", "xllcorner", "yllcorner", "xllcenter", "yllcenter", "cellsize", "nodata_value",
)


# ---------------------------------------------------------------------------
# SRTM .hgt
# ---------------------------------------------------------------------------


def parse_hgt(data: bytes, tile: TileId) -> HeightMap:
    """Decode a square tile of big-endian int16 samples, north row first.

    Any square size is accepted; SRTM1 tiles are 3601x3601. The header
    metadata places pixel centres on whole degrees, as SRTM does.
    """
    size = math.isqrt(len(data) // 2)
    if size == 0 or 2 * size * size != len(data):
        raise MalformedFileError(f"{tile}: {len(data)} bytes is not a square grid of 16-bit samples")

    cells = np.frombuffer(data, dtype=">i2").reshape(size, size).astype(np.int64)
    valid = cells[cells != NODATA]
    if valid.size and (valid.min() < MIN_ELEVATION or valid.max() > MAX_ELEVATION):
        raise MalformedFileError(
            f"{tile}: elevations outside [{MIN_ELEVATION}, {MAX_ELEVATION}] m "
            f"(min {valid.min()}, max {valid.max()})"
        )

    cellsize = 1.0 / (size - 1) if size > 1 else 1.0
    hm = HeightMap(
        cells,
        nodata=NODATA,
        xllcorner=tile.easting - cellsize / 2,
        yllcorner=tile.northing - cellsize / 2,
        cellsize=cellsize,
    )
    logger.debug("decoded %s: %dx%d, %d voids", tile, size, size, hm.void_count())
    return hm


def encode_hgt(hm: HeightMap) -> bytes:
    """Inverse of ``parse_hgt`` for square heightmaps."""
    if hm.rows != hm.cols:
        raise MalformedFileError(f"hgt tiles are square, got {hm.rows}x{hm.cols}")
    return hm.cells.astype(">i2").tobytes()


def read_hgt(path: str | Path) -> HeightMap:
    path = Path(path)
    data = path.read_bytes()
    try:
        tile = TileId.parse(path.name)
    except ValueError as exc:
        raise MalformedFileError(str(exc)) from None
    return parse_hgt(data, tile)


# ---------------------------------------------------------------------------
# ESRI ASCII grid
# ---------------------------------------------------------------------------


def _parse_int(token: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        value = float(token)
    except ValueError:
        raise GridParseError(f"line {line_no}: {token!r} is not a number") from None
    if not value.is_integer():
        raise GridParseError(f"line {line_no}: {token!r} is not an integer elevation")
    return int(value)


def _origin(header: dict[str, str], axis: str, cellsize: float) -> float:
    if f"{axis}llcenter" in header:
        return float(header[f"{axis}llcenter"]) - cellsize / 2
    return float(header.get(f"{axis}llcorner", 0.0))


def _read_grid_text(path: Path) -> str:
    try:
        return path.read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise GridParseError(f"{path}: byte {exc.start} is not ASCII") from None


def read_ascii_grid(text: str) -> HeightMap:
    """Parse an ESRI ASCII grid; only ``ncols`` and ``nrows`` are mandatory.

    Origins given as ``xllcenter``/``yllcenter`` are shifted by half a cell
    to the corner convention used everywhere else.
    """
    if not text.isascii():
        raise GridParseError("ASCII grids must be plain ASCII text")
    lines = [(i + 1, line.split()) for i, line in enumerate(text.splitlines())]
    lines = [(no, tokens) for no, tokens in lines if tokens]

    header: dict[str, str] = {}
    while lines and lines[0][1][0].lower() in _HEADER_KEYS:
        no, tokens = lines.pop(0)
        if len(tokens) != 2:
            raise GridParseError(f"line {no}: header entries are 'key value', got {' '.join(tokens)!r}")
        header[tokens[0].lower()] = tokens[1]

    if lines and lines[0][1][0][:1].isalpha():
        no, tokens = lines[0]
        raise GridParseError(f"line {no}: unknown header key {tokens[0]!r}")
    missing = [key for key in _REQUIRED_KEYS if key not in header]
    if missing:
        raise GridParseError(f"missing header keys: {', '.join(missing)}")
    for axis in ("x", "y"):
        if f"{axis}llcorner" in header and f"{axis}llcenter" in header:
            raise GridParseError(f"both {axis}llcorner and {axis}llcenter given")

    try:
        ncols = int(header["ncols"])
        nrows = int(header["nrows"])
        cellsize = float(header.get("cellsize", 1.0))
        xll = _origin(header, "x", cellsize)
        yll = _origin(header, "y", cellsize)
        nodata = int(float(header.get("nodata_value", NODATA)))
    except ValueError as exc:
        raise GridParseError(f"bad header value: {exc}") from None
    if ncols < 1 or nrows < 1:
        raise GridParseError(f"grid dimensions must be positive, got {nrows}x{ncols}")

    if len(lines) != nrows:
        raise GridParseError(f"expected {nrows} data rows, found {len(lines)}")
    cells = []
    for no, tokens in lines:
        if len(tokens) != ncols:
            raise GridParseError(f"line {no}: expected {ncols} values, found {len(tokens)}")
        cells.append([_parse_int(token, no) for token in tokens])

    return HeightMap(np.array(cells, dtype=np.int64), nodata=nodata, xllcorner=xll, yllcorner=yll, cellsize=cellsize)


def write_ascii_grid(hm: HeightMap) -> str:
    header = [
        f"ncols {hm.cols}",
        f"nrows {hm.rows}",
        f"xllcorner {float(hm.xllcorner)!r}",
        f"yllcorner {float(hm.yllcorner)!r}",
        f"cellsize {float(hm.cellsize)!r}",
        f"NODATA_value {hm.nodata}",
    ]
    body = [" ".join(str(v) for v in row) for row in hm.cells.tolist()]
    return "\n".join(header + body) + "\n"


def load_heightmap(path: str | Path) -> HeightMap:
    """Read a heightmap from an ``.hgt`` tile or an ASCII grid, chosen by suffix."""
    path = Path(path)
    if path.suffix.lower() == ".hgt":
        return read_hgt(path)
    return read_ascii_grid(_read_grid_text(path))


def save_heightmap(hm: HeightMap, path: str | Path) -> Path:
    path = Path(path)
    if path.suffix.lower() == ".hgt":
        return atomic_write(path, encode_hgt(hm))
    return atomic_write(path, write_ascii_grid(hm))


# ---------------------------------------------------------------------------
# Gradient fields as a pair of ASCII grids
# ---------------------------------------------------------------------------


def gradient_paths(stem: str | Path) -> tuple[Path, Path]:
    """``<stem>.gx.asc`` and ``<stem>.gy.asc``; a trailing ``.gx.asc``/``.gy.asc`` is stripped first."""
    name = str(stem)
    for suffix in (".gx.asc", ".gy.asc"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
    return Path(f"{name}.gx.asc"), Path(f"{name}.gy.asc")


def save_gradient_field(gf: GradientField, stem: str | Path) -> tuple[Path, Path]:
    gx_path, gy_path = gradient_paths(stem)
    atomic_write_many({
        gx_path: write_ascii_grid(HeightMap(gf.gx)),
        gy_path: write_ascii_grid(HeightMap(gf.gy)),
    })
    return gx_path, gy_path


def load_gradient_field(stem: str | Path) -> GradientField:
    gx_path, gy_path = gradient_paths(stem)
    gx = read_ascii_grid(_read_grid_text(gx_path))
    gy = read_ascii_grid(_read_grid_text(gy_path))
    if gx.shape != gy.shape:
        raise GridParseError(f"{gx_path} is {gx.rows}x{gx.cols} but {gy_path} is {gy.rows}x{gy.cols}")
    return GradientField(gx.cells, gy.cells)


# ---------------------------------------------------------------------------
# PGM render
# ---------------------------------------------------------------------------


def render_pgm(hm: HeightMap) -> bytes:
    """Binary 16-bit PGM with min-max normalisation; a constant grid renders mid-gray."""
    cells = hm.cells
    if cells.size == 0:
        raise GridParseError("cannot render an empty grid")
    low, high = int(cells.min()), int(cells.max())
    if low == high:
        samples = np.full(cells.shape, PGM_MIDGRAY, dtype=np.int64)
    else:
        # integer arithmetic keeps the endpoints exact; +half rounds to nearest
        span = high - low
        samples = ((cells - low) * PGM_MAXVAL * 2 + span) // (2 * span)
    header = f"P5\n{hm.cols} {hm.rows}\n{PGM_MAXVAL}\n".encode("ascii")
    return header + samples.astype(">u2").tobytes()
