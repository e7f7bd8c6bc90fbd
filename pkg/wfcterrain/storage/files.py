"""Atomic artifact writes: every output goes to a temp file and is renamed on success."""
import logging
import os
import tempfile
from pathlib import Path
from typing import Mapping

logger = logging.getLogger(__name__)


def _write_temp(path: Path, data: bytes | str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = data.encode("ascii") if isinstance(data, str) else data
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
    except BaseException:
        os.unlink(tmp_name)
        raise
    return Path(tmp_name)


def atomic_write_many(outputs: Mapping[str | Path, bytes | str]) -> list[Path]:
    """Write several files so that none of them appears unless all were written."""
    staged: list[tuple[Path, Path]] = []
    try:
        for target, data in outputs.items():
            target = Path(target)
            staged.append((_write_temp(target, data), target))
    except BaseException:
        for tmp, _ in staged:
            tmp.unlink(missing_ok=True)
        raise
    for tmp, target in staged:
        os.replace(tmp, target)
        logger.info("wrote %s", target)
    return [target for _, target in staged]


def atomic_write(path: str | Path, data: bytes | str) -> Path:
    return atomic_write_many({path: data})[0]
