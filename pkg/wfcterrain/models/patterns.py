"""Slope patterns, their catalog and adjacency rules."""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

PATTERN_SIZE = 2
CHANNELS = 2
PATTERN_LENGTH = PATTERN_SIZE * PATTERN_SIZE * CHANNELS
MODEL_FORMAT_VERSION = 1

# Component layout of a pattern vector: gx00 gx01 gx10 gx11 gy00 gy01 gy10 gy11
_LEFT_COLUMN = (0, 2, 4, 6)
_RIGHT_COLUMN = (1, 3, 5, 7)
_TOP_ROW = (0, 1, 4, 5)
_BOTTOM_ROW = (2, 3, 6, 7)


class Direction(IntEnum):
    RIGHT = 0
    DOWN = 1
    LEFT = 2
    UP = 3

    @property
    def offset(self) -> tuple[int, int]:
        """(row, col) step to the neighbour in this direction."""
        return _OFFSETS[self]

    @property
    def opposite(self) -> "Direction":
        return Direction((self + 2) % 4)

    @property
    def letter(self) -> str:
        return self.name[0]

    @property
    def edges(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Components of (a, b) that must agree when b sits in this direction from a."""
        return _EDGES[self]


_OFFSETS = {
    Direction.RIGHT: (0, 1),
    Direction.DOWN: (1, 0),
    Direction.LEFT: (0, -1),
    Direction.UP: (-1, 0),
}

_EDGES = {
    Direction.RIGHT: (_RIGHT_COLUMN, _LEFT_COLUMN),
    Direction.DOWN: (_BOTTOM_ROW, _TOP_ROW),
    Direction.LEFT: (_LEFT_COLUMN, _RIGHT_COLUMN),
    Direction.UP: (_TOP_ROW, _BOTTOM_ROW),
}


@dataclass(frozen=True)
class Pattern:
    """A 2x2 window over both slope channels, with its training frequency."""

    values: tuple[int, ...]
    frequency: int = 1

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if len(values) != PATTERN_LENGTH:
            raise ValueError(f"a pattern has {PATTERN_LENGTH} components, got {len(values)}")
        if self.frequency < 1:
            raise ValueError("pattern frequency must be at least 1")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_cells(cls, gx: Sequence[Sequence[int]], gy: Sequence[Sequence[int]], frequency: int = 1) -> "Pattern":
        flat = list(np.asarray(gx, dtype=np.int64).ravel()) + list(np.asarray(gy, dtype=np.int64).ravel())
        return cls(tuple(flat), frequency)

    @property
    def gx(self) -> np.ndarray:
        return np.array(self.values[:4], dtype=np.int64).reshape(2, 2)

    @property
    def gy(self) -> np.ndarray:
        return np.array(self.values[4:], dtype=np.int64).reshape(2, 2)

    def edge(self, direction: Direction, outgoing: bool = True) -> tuple[int, ...]:
        indices = direction.edges[0 if outgoing else 1]
        return tuple(self.values[i] for i in indices)


@dataclass(frozen=True, eq=False)
class PatternCatalog:
    """Deduplicated patterns in lexicographic order of their 8 components.

    Pattern ids are row indices into ``values``.
    """

    values: np.ndarray
    frequencies: np.ndarray
    pattern_size: int = PATTERN_SIZE
    channels: int = CHANNELS

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.int64).reshape(-1, PATTERN_LENGTH)
        frequencies = np.asarray(self.frequencies, dtype=np.int64).reshape(-1)
        if len(values) != len(frequencies):
            raise ValueError("one frequency per pattern is required")
        values.setflags(write=False)
        frequencies.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "frequencies", frequencies)

    @classmethod
    def from_counts(cls, values: np.ndarray, counts: np.ndarray | None = None) -> "PatternCatalog":
        """Merge duplicate rows, summing their counts, and sort canonically."""
        values = np.asarray(values, dtype=np.int64).reshape(-1, PATTERN_LENGTH)
        counts = np.ones(len(values), dtype=np.int64) if counts is None else np.asarray(counts, dtype=np.int64)
        if len(values) == 0:
            return cls(values, counts)
        unique, inverse = np.unique(values, axis=0, return_inverse=True)
        merged = np.bincount(inverse.reshape(-1), weights=counts, minlength=len(unique)).astype(np.int64)
        return cls(unique, merged)

    @classmethod
    def from_patterns(cls, patterns: Iterable[Pattern]) -> "PatternCatalog":
        patterns = list(patterns)
        values = np.array([p.values for p in patterns], dtype=np.int64).reshape(-1, PATTERN_LENGTH)
        return cls.from_counts(values, np.array([p.frequency for p in patterns], dtype=np.int64))

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __getitem__(self, pattern_id: int) -> Pattern:
        return Pattern(tuple(self.values[pattern_id].tolist()), int(self.frequencies[pattern_id]))

    def __iter__(self) -> Iterator[Pattern]:
        return (self[i] for i in range(len(self)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PatternCatalog):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(self.frequencies, other.frequencies)

    __hash__ = None

    @cached_property
    def _ids(self) -> dict[tuple[int, ...], int]:
        return {tuple(row): i for i, row in enumerate(self.values.tolist())}

    def index_of(self, values: Sequence[int]) -> int | None:
        """Id of the pattern with these components, or None if absent."""
        return self._ids.get(tuple(int(v) for v in values))

    def subset(self, pattern_ids: Iterable[int]) -> "PatternCatalog":
        ids = np.array(sorted(set(pattern_ids)), dtype=np.int64)
        return PatternCatalog(self.values[ids], self.frequencies[ids])


@dataclass(frozen=True, eq=False)
class AdjacencyRules:
    """For every direction and pattern id, the ids allowed as neighbour in that direction."""

    allowed: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self):
        if len(self.allowed) != len(Direction):
            raise ValueError("adjacency rules need one table per direction")
        sizes = {len(table) for table in self.allowed}
        if len(sizes) > 1:
            raise ValueError("adjacency tables disagree on the pattern count")

    @classmethod
    def from_right_down(cls, right: Sequence[Iterable[int]], down: Sequence[Iterable[int]]) -> "AdjacencyRules":
        """Build all four tables from RIGHT and DOWN; LEFT and UP follow by symmetry."""
        size = len(right)
        if len(down) != size:
            raise ValueError("RIGHT and DOWN tables disagree on the pattern count")
        right_sets = [frozenset(int(b) for b in row) for row in right]
        down_sets = [frozenset(int(b) for b in row) for row in down]
        left: list[set[int]] = [set() for _ in range(size)]
        up: list[set[int]] = [set() for _ in range(size)]
        for a in range(size):
            for b in right_sets[a]:
                left[b].add(a)
            for b in down_sets[a]:
                up[b].add(a)
        return cls((
            tuple(right_sets),
            tuple(down_sets),
            tuple(frozenset(s) for s in left),
            tuple(frozenset(s) for s in up),
        ))

    def __len__(self) -> int:
        return len(self.allowed[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, AdjacencyRules):
            return NotImplemented
        return self.allowed == other.allowed

    __hash__ = None

    def compatible(self, pattern_id: int, direction: Direction) -> frozenset[int]:
        return self.allowed[direction][pattern_id]

    def pair_count(self, direction: Direction) -> int:
        return sum(len(s) for s in self.allowed[direction])

    def self_adjacent_everywhere(self) -> list[int]:
        """Ids that may neighbour themselves in all four directions."""
        return [p for p in range(len(self)) if all(p in self.allowed[d][p] for d in Direction)]


@dataclass(frozen=True)
class Model:
    """A trained pattern catalog with its adjacency rules; immutable."""

    catalog: PatternCatalog
    rules: AdjacencyRules
    version: int = MODEL_FORMAT_VERSION

    def __post_init__(self):
        if len(self.catalog) != len(self.rules):
            raise ValueError(
                f"catalog has {len(self.catalog)} patterns but rules cover {len(self.rules)}"
            )

    def __len__(self) -> int:
        return len(self.catalog)
