"""Versioned text format for trained models.

    wfcterrain-model v1
    pattern_size 2 channels 2 patterns <P>
    pattern <id> gx00 gx01 gx10 gx11 gy00 gy01 gy10 gy11 freq <n>    (P lines, id order)
    adj <id> R <ids...>
    adj <id> D <ids...>

LEFT and UP tables are rebuilt from RIGHT and DOWN on load.
"""
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from wfcterrain.errors import ModelFormatError
from wfcterrain.models.patterns import (
    CHANNELS,
    MODEL_FORMAT_VERSION,
    PATTERN_LENGTH,
    PATTERN_SIZE,
    AdjacencyRules,
    Direction,
    Model,
    PatternCatalog,
)
from wfcterrain.storage.files import atomic_write

logger = logging.getLogger(__name__)

MAGIC = "wfcterrain-model"


def dump_model(model: Model) -> str:
    catalog, rules = model.catalog, model.rules
    lines = [
        f"{MAGIC} v{MODEL_FORMAT_VERSION}",
        f"pattern_size {catalog.pattern_size} channels {catalog.channels} patterns {len(catalog)}",
    ]
    for pid, (values, freq) in enumerate(zip(catalog.values.tolist(), catalog.frequencies.tolist())):
        lines.append(f"pattern {pid} {' '.join(map(str, values))} freq {freq}")
    for pid in range(len(catalog)):
        for direction in (Direction.RIGHT, Direction.DOWN):
            ids = sorted(rules.allowed[direction][pid])
            lines.append(" ".join(["adj", str(pid), direction.letter, *map(str, ids)]))
    return "\n".join(lines) + "\n"


def _ints(tokens: list[str], line_no: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ModelFormatError(f"line {line_no}: expected integers, got {' '.join(tokens)!r}") from None


def _parse_header(lines: list[str]) -> int:
    if not lines:
        raise ModelFormatError("empty model file")
    magic = lines[0].split()
    if len(magic) != 2 or magic[0] != MAGIC:
        raise ModelFormatError(f"not a model file: {lines[0]!r}")
    if magic[1] != f"v{MODEL_FORMAT_VERSION}":
        raise ModelFormatError(f"unsupported model version {magic[1]!r}")

    shape = lines[1].split() if len(lines) > 1 else []
    if len(shape) != 6 or shape[0::2] != ["pattern_size", "channels", "patterns"]:
        raise ModelFormatError("line 2: expected 'pattern_size <n> channels <n> patterns <n>'")
    pattern_size, channels, count = _ints(shape[1::2], 2)
    if pattern_size != PATTERN_SIZE or channels != CHANNELS:
        raise ModelFormatError(
            f"only pattern_size {PATTERN_SIZE} with {CHANNELS} channels is supported, "
            f"got pattern_size {pattern_size} channels {channels}"
        )
    if count < 1:
        raise ModelFormatError("model has no patterns")
    return count


def load_model(text: str) -> Model:
    if not text.isascii():
        raise ModelFormatError("model files must be plain ASCII text")
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    count = _parse_header(lines)

    values = np.zeros((count, PATTERN_LENGTH), dtype=np.int64)
    freqs = np.zeros(count, dtype=np.int64)
    body = lines[2:]
    if len(body) != 3 * count:
        raise ModelFormatError(f"expected {count} pattern lines and {2 * count} adjacency lines, found {len(body)} lines")

    for offset, line in enumerate(body[:count]):
        line_no = offset + 3
        tokens = line.split()
        if len(tokens) != PATTERN_LENGTH + 4 or tokens[0] != "pattern" or tokens[-2] != "freq":
            raise ModelFormatError(f"line {line_no}: malformed pattern line")
        numbers = _ints(tokens[1:-2] + tokens[-1:], line_no)
        if numbers[0] != offset:
            raise ModelFormatError(f"line {line_no}: pattern id {numbers[0]} out of order")
        if numbers[-1] < 1:
            raise ModelFormatError(f"line {line_no}: frequency must be positive")
        values[offset] = numbers[1:-1]
        freqs[offset] = numbers[-1]

    catalog = PatternCatalog(values, freqs)
    if not np.array_equal(PatternCatalog.from_counts(values).values, values):
        raise ModelFormatError("patterns are not unique and in canonical order")

    tables: dict[str, list[list[int] | None]] = {"R": [None] * count, "D": [None] * count}
    for offset, line in enumerate(body[count:]):
        line_no = offset + count + 3
        tokens = line.split()
        if len(tokens) < 3 or tokens[0] != "adj" or tokens[2] not in tables:
            raise ModelFormatError(f"line {line_no}: malformed adjacency line")
        pid, *ids = _ints([tokens[1], *tokens[3:]], line_no)
        if not 0 <= pid < count or any(not 0 <= i < count for i in ids):
            raise ModelFormatError(f"line {line_no}: pattern id out of range")
        if tables[tokens[2]][pid] is not None:
            raise ModelFormatError(f"line {line_no}: duplicate {tokens[2]} entry for pattern {pid}")
        tables[tokens[2]][pid] = ids

    if any(row is None for table in tables.values() for row in table):
        raise ModelFormatError("every pattern needs one R and one D adjacency line")
    rules = AdjacencyRules.from_right_down(tables["R"], tables["D"])
    _check_overlap(catalog, rules)
    return Model(catalog, rules)


def _check_overlap(catalog: PatternCatalog, rules: AdjacencyRules) -> None:
    for direction in (Direction.RIGHT, Direction.DOWN):
        out_idx, in_idx = direction.edges
        outgoing = catalog.values[:, list(out_idx)]
        incoming = catalog.values[:, list(in_idx)]
        for a, allowed in enumerate(rules.allowed[direction]):
            for b in allowed:
                if not np.array_equal(outgoing[a], incoming[b]):
                    raise ModelFormatError(
                        f"adjacency {a} {direction.letter} {b} does not satisfy overlap equality"
                    )


def save_model_file(model: Model, path: str | Path) -> Path:
    return atomic_write(path, dump_model(model))


def load_model_file(path: str | Path) -> Model:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise ModelFormatError(f"{path}: byte {exc.start} is not ASCII") from None
    model = load_model(text)
    logger.info("loaded model %s: %d patterns", path, len(model))
    return model
