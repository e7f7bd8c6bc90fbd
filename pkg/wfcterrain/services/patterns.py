"""Pattern extraction and adjacency inference.

Adjacency between two patterns is decided purely by their overlap: b may sit
to the RIGHT of a when a's right column equals b's left column on both
channels, and likewise DOWN with rows. LEFT and UP are the mirrored relation.
"""
from __future__ import annotations

import logging
import time
from collections import defaultdict
from enum import Enum
from typing import Sequence

import numpy as np

from wfcterrain.errors import GridRangeError, ModelError
from wfcterrain.models.domain import GradientField
from wfcterrain.models.patterns import (
    PATTERN_LENGTH,
    AdjacencyRules,
    Direction,
    Model,
    Pattern,
    PatternCatalog,
)

logger = logging.getLogger(__name__)


class AdjacencyMode(str, Enum):
    OVERLAP = "overlap"
    OBSERVED = "observed"


def field_windows(field: GradientField) -> np.ndarray:
    """Every 2x2x2 window of a field, shape (rows-1, cols-1, 8), no wraparound."""
    if field.rows < 2 or field.cols < 2:
        raise GridRangeError(f"a {field.rows}x{field.cols} field is smaller than the 2x2 pattern window")
    gx, gy = field.gx, field.gy
    return np.stack(
        [
            gx[:-1, :-1], gx[:-1, 1:], gx[1:, :-1], gx[1:, 1:],
            gy[:-1, :-1], gy[:-1, 1:], gy[1:, :-1], gy[1:, 1:],
        ],
        axis=-1,
    )


def extract_patterns(fields: Sequence[GradientField]) -> PatternCatalog:
    """Count every window of every field into one canonical catalog."""
    if not fields:
        raise ModelError("no training fields given")
    windows = np.concatenate([field_windows(f).reshape(-1, PATTERN_LENGTH) for f in fields])
    catalog = PatternCatalog.from_counts(windows)
    logger.debug("extracted %d windows into %d patterns", len(windows), len(catalog))
    return catalog


def window_ids(field: GradientField, catalog: PatternCatalog) -> np.ndarray:
    """Catalog id of each window position; -1 where the window is not in the catalog."""
    windows = field_windows(field)
    ids = [catalog.index_of(w) for w in windows.reshape(-1, PATTERN_LENGTH).tolist()]
    return np.array([-1 if i is None else i for i in ids], dtype=np.int64).reshape(windows.shape[:2])


def overlap_compatible(a: Pattern, b: Pattern, direction: Direction) -> bool:
    return a.edge(direction, outgoing=True) == b.edge(direction, outgoing=False)


def infer_adjacency(catalog: PatternCatalog) -> AdjacencyRules:
    """Overlap adjacency over all pattern pairs, via a hash index of boundary keys.

    Each pattern's incoming edge is indexed once, so each lookup returns the
    compatible set directly; cost is linear in patterns plus output size.
    """
    if len(catalog) == 0:
        raise ModelError("cannot infer adjacency for an empty catalog")
    tables = []
    for direction in (Direction.RIGHT, Direction.DOWN):
        out_idx, in_idx = direction.edges
        incoming: dict[tuple[int, ...], list[int]] = defaultdict(list)
        for pid, key in enumerate(catalog.values[:, list(in_idx)].tolist()):
            incoming[tuple(key)].append(pid)
        frozen = {key: frozenset(ids) for key, ids in incoming.items()}
        empty: frozenset[int] = frozenset()
        tables.append([frozen.get(tuple(key), empty) for key in catalog.values[:, list(out_idx)].tolist()])
    return AdjacencyRules.from_right_down(*tables)


def infer_adjacency_bruteforce(catalog: PatternCatalog) -> AdjacencyRules:
    """Reference O(P^2) comparison of every ordered pair in every direction."""
    if len(catalog) == 0:
        raise ModelError("cannot infer adjacency for an empty catalog")
    tables = []
    for direction in Direction:
        out_idx, in_idx = direction.edges
        outgoing = catalog.values[:, list(out_idx)]
        incoming = catalog.values[:, list(in_idx)]
        matches = (outgoing[:, None, :] == incoming[None, :, :]).all(axis=-1)
        tables.append(tuple(frozenset(np.flatnonzero(row).tolist()) for row in matches))
    return AdjacencyRules(tuple(tables))


def observed_adjacency(fields: Sequence[GradientField], catalog: PatternCatalog) -> AdjacencyRules:
    """Only the neighbour pairs that occur in the training fields."""
    if len(catalog) == 0:
        raise ModelError("cannot infer adjacency for an empty catalog")
    right: list[set[int]] = [set() for _ in range(len(catalog))]
    down: list[set[int]] = [set() for _ in range(len(catalog))]
    for field in fields:
        ids = window_ids(field, catalog)
        if (ids < 0).any():
            raise ModelError("training field has windows missing from the catalog")
        for a, b in zip(ids[:, :-1].ravel().tolist(), ids[:, 1:].ravel().tolist()):
            right[a].add(b)
        for a, b in zip(ids[:-1, :].ravel().tolist(), ids[1:, :].ravel().tolist()):
            down[a].add(b)
    return AdjacencyRules.from_right_down(right, down)


def build_model(fields: Sequence[GradientField], mode: AdjacencyMode | str = AdjacencyMode.OVERLAP) -> Model:
    """Extract the catalog and infer its adjacency rules."""
    mode = AdjacencyMode(mode)
    catalog = extract_patterns(fields)
    logger.info("catalog: %d patterns from %d fields", len(catalog), len(fields))

    started = time.perf_counter()
    if mode is AdjacencyMode.OVERLAP:
        rules = infer_adjacency(catalog)
    else:
        rules = observed_adjacency(fields, catalog)
    elapsed = time.perf_counter() - started
    logger.info(
        "%s adjacency inferred in %.3f s: %d right pairs, %d down pairs",
        mode.value, elapsed, rules.pair_count(Direction.RIGHT), rules.pair_count(Direction.DOWN),
    )

    repeating = rules.self_adjacent_everywhere()
    if repeating:
        logger.warning(
            "%d patterns are self-adjacent in all four directions and may tile repetitively",
            len(repeating),
        )
    return Model(catalog, rules)
