"""Observe/propagate generation over a grid of candidate-pattern sets.

A wave cell holds one pattern; neighbouring cells overlap by one row or
column, so a fully collapsed R x C wave decodes to an (R+1) x (C+1) field.
Entropy is the number of remaining candidates.
"""
from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from wfcterrain.errors import ContradictionError, GenerationFailedError, ModelError, SolverLogicError
from wfcterrain.models.domain import GradientField
from wfcterrain.models.patterns import Direction, Model

logger = logging.getLogger(__name__)

DEFAULT_MAX_RESTARTS = 100
DONE = None

Cell = tuple[int, int]


class Propagation(Enum):
    OK = "ok"
    CONTRADICTION = "contradiction"


class WaveGrid:
    """Superposition state of one generation attempt. Single owner, not thread-safe.

    Domains are frozensets that are replaced, never mutated, so cells may
    share the initial full domain.
    """

    def __init__(self, model: Model, rows: int, cols: int, rng: np.random.Generator):
        self.model = model
        self.rows = rows
        self.cols = cols
        self.rng = rng
        full = frozenset(range(len(model)))
        self.domains: list[frozenset[int]] = [full] * (rows * cols)
        self.sizes = np.full(rows * cols, len(full), dtype=np.int64)
        # per direction: patterns with at least one supporter in a full neighbouring domain
        self.full_support = tuple(
            frozenset(q for q in range(len(model)) if model.rules.allowed[d.opposite][q])
            for d in Direction
        )

    def index(self, cell: Cell) -> int:
        return cell[0] * self.cols + cell[1]

    def cell(self, index: int) -> Cell:
        return divmod(index, self.cols)

    def domain(self, cell: Cell) -> frozenset[int]:
        return self.domains[self.index(cell)]

    def restrict(self, cell: Cell, allowed: Iterable[int]) -> None:
        """Replace a cell's domain by its intersection with ``allowed``."""
        i = self.index(cell)
        self.domains[i] = self.domains[i] & frozenset(allowed)
        self.sizes[i] = len(self.domains[i])

    def neighbour(self, index: int, direction: Direction) -> int | None:
        row, col = divmod(index, self.cols)
        dr, dc = direction.offset
        row, col = row + dr, col + dc
        if 0 <= row < self.rows and 0 <= col < self.cols:
            return row * self.cols + col
        return None

    def is_collapsed(self) -> bool:
        return bool((self.sizes == 1).all())

    def has_contradiction(self) -> bool:
        return bool((self.sizes == 0).any())

    def pattern_ids(self) -> np.ndarray:
        """Collapsed pattern id per cell, shape (rows, cols)."""
        if not self.is_collapsed():
            raise SolverLogicError("wave is not fully collapsed")
        return np.array([next(iter(d)) for d in self.domains], dtype=np.int64).reshape(self.rows, self.cols)


def init_wave(model: Model, out_rows: int, out_cols: int, rng: np.random.Generator | int = 0) -> WaveGrid:
    """Blank wave: every cell may hold every pattern."""
    if len(model) == 0:
        raise ModelError("model has an empty pattern catalog")
    if out_rows < 1 or out_cols < 1:
        raise ValueError(f"wave size must be positive, got {out_rows}x{out_cols}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return WaveGrid(model, out_rows, out_cols, rng)


def min_entropy_cell(grid: WaveGrid) -> Cell | None:
    """An uncollapsed cell with the fewest candidates, ties broken by the grid's rng.

    Returns ``DONE`` once every cell is collapsed.
    """
    sizes = grid.sizes
    if (sizes == 0).any():
        raise ContradictionError(f"cell {grid.cell(int(np.argmin(sizes)))} has no candidates")
    open_sizes = sizes[sizes >= 2]
    if open_sizes.size == 0:
        return DONE
    candidates = np.flatnonzero(sizes == open_sizes.min())
    chosen = int(candidates[grid.rng.integers(len(candidates))])
    return grid.cell(chosen)


def observe(grid: WaveGrid, cell: Cell) -> int:
    """Collapse ``cell`` to one candidate drawn in proportion to catalog frequency."""
    i = grid.index(cell)
    domain = sorted(grid.domains[i])
    if len(domain) < 2:
        raise SolverLogicError(f"cell {cell} has {len(domain)} candidates; observe needs at least 2")
    weights = grid.model.catalog.frequencies[domain].astype(np.float64)
    chosen = int(grid.rng.choice(domain, p=weights / weights.sum()))
    grid.domains[i] = frozenset((chosen,))
    grid.sizes[i] = 1
    return chosen


def _revise(grid: WaveGrid, source: int, target: int, direction: Direction) -> frozenset[int]:
    """Candidates of ``target`` with a supporter in ``source``; target lies in ``direction`` from source."""
    src = grid.domains[source]
    dst = grid.domains[target]
    if len(src) == len(grid.model):
        return dst & grid.full_support[direction]
    allowed = grid.model.rules.allowed
    if len(dst) < len(src):
        back = allowed[direction.opposite]
        return frozenset(q for q in dst if not back[q].isdisjoint(src))
    forward = allowed[direction]
    return dst & frozenset().union(*(forward[p] for p in src))


def _start_indices(grid: WaveGrid, start: Cell | Iterable[Cell] | None) -> list[int]:
    if start is None:
        return list(range(grid.rows * grid.cols))
    if isinstance(start, tuple) and len(start) == 2 and all(isinstance(v, (int, np.integer)) for v in start):
        return [grid.index(start)]
    return [grid.index(c) for c in start]


def propagate(grid: WaveGrid, start: Cell | Iterable[Cell] | None = None) -> Propagation:
    """Worklist arc consistency from ``start`` (a cell, several cells, or None for all cells)."""
    queue = deque(_start_indices(grid, start))
    queued = set(queue)
    revisions = 0

    while queue:
        source = queue.popleft()
        queued.discard(source)
        for direction in Direction:
            target = grid.neighbour(source, direction)
            if target is None:
                continue
            revised = _revise(grid, source, target, direction)
            revisions += 1
            if len(revised) == len(grid.domains[target]):
                continue
            grid.domains[target] = revised
            grid.sizes[target] = len(revised)
            if not revised:
                logger.debug("contradiction at %s after %d revisions", grid.cell(target), revisions)
                return Propagation.CONTRADICTION
            if target not in queued:
                queue.append(target)
                queued.add(target)
    return Propagation.OK


def decode(grid: WaveGrid) -> GradientField:
    """Overlay the collapsed patterns into an (rows+1) x (cols+1) gradient field."""
    ids = grid.pattern_ids()
    values = grid.model.catalog.values[ids]
    rows, cols = grid.rows, grid.cols
    channels = []
    for offset in (0, 4):
        out = np.empty((rows + 1, cols + 1), dtype=np.int64)
        out[:rows, :cols] = values[:, :, offset]
        out[:rows, cols] = values[:, -1, offset + 1]
        out[rows, :cols] = values[-1, :, offset + 2]
        out[rows, cols] = values[-1, -1, offset + 3]
        channels.append(out)
    return GradientField(*channels)


def attempt_rng(seed: int, attempt: int) -> np.random.Generator:
    """Independent stream for one attempt, derived from (seed, attempt)."""
    if seed < 0 or attempt < 0:
        raise ValueError("seed and attempt index must be non-negative")
    return np.random.default_rng([seed, attempt])


def run_attempt(model: Model, out_rows: int, out_cols: int, seed: int, attempt: int) -> WaveGrid | None:
    """One observe/propagate run; the collapsed wave, or None on contradiction."""
    grid = init_wave(model, out_rows, out_cols, attempt_rng(seed, attempt))
    if propagate(grid) is Propagation.CONTRADICTION:
        return None
    while True:
        cell = min_entropy_cell(grid)
        if cell is DONE:
            return grid
        observe(grid, cell)
        if propagate(grid, cell) is Propagation.CONTRADICTION:
            return None


def _attempt_field(model: Model, out_rows: int, out_cols: int, seed: int, attempt: int) -> GradientField | None:
    grid = run_attempt(model, out_rows, out_cols, seed, attempt)
    return None if grid is None else decode(grid)


@dataclass(frozen=True)
class GenerationResult:
    field: GradientField
    seed: int
    attempt: int

    @property
    def attempts_used(self) -> int:
        return self.attempt + 1


def _check_generation_args(out_rows: int, out_cols: int, seed: int, max_restarts: int) -> None:
    if max_restarts < 1:
        raise ValueError(f"max_restarts must be >= 1, got {max_restarts}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    if out_rows < 1 or out_cols < 1:
        raise ValueError(f"output must be at least 1x1 cells, got {out_rows}x{out_cols}")


def generate_with_report(
    model: Model,
    out_rows: int,
    out_cols: int,
    seed: int = 0,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
    parallel_attempts: int = 1,
) -> GenerationResult:
    """Generate, restarting from a fresh wave on contradiction.

    With ``parallel_attempts`` > 1 attempts run in batches on worker
    processes and the lowest successful attempt index of a batch wins, which
    is the attempt a sequential run would have returned.
    """
    _check_generation_args(out_rows, out_cols, seed, max_restarts)
    if len(model) == 0:
        raise ModelError("model has an empty pattern catalog")
    logger.info("generating %dx%d cells, seed %d, up to %d attempts", out_rows, out_cols, seed, max_restarts)

    if parallel_attempts <= 1:
        for attempt in range(max_restarts):
            grid = run_attempt(model, out_rows, out_cols, seed, attempt)
            if grid is not None:
                logger.info("seed %d: attempt %d succeeded", seed, attempt)
                return GenerationResult(decode(grid), seed, attempt)
            logger.debug("seed %d: attempt %d contradicted", seed, attempt)
    else:
        with ProcessPoolExecutor(max_workers=parallel_attempts) as pool:
            for first in range(0, max_restarts, parallel_attempts):
                batch = range(first, min(first + parallel_attempts, max_restarts))
                futures = [
                    pool.submit(_attempt_field, model, out_rows, out_cols, seed, attempt)
                    for attempt in batch
                ]
                for attempt, future in zip(batch, futures):
                    field = future.result()
                    if field is not None:
                        for pending in futures:
                            pending.cancel()
                        logger.info("seed %d: attempt %d succeeded (parallel)", seed, attempt)
                        return GenerationResult(field, seed, attempt)
                logger.debug("seed %d: attempts %d-%d contradicted", seed, batch[0], batch[-1])

    raise GenerationFailedError(max_restarts, seed)


def generate(
    model: Model,
    out_rows: int,
    out_cols: int,
    seed: int = 0,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
) -> GradientField:
    return generate_with_report(model, out_rows, out_cols, seed, max_restarts).field
