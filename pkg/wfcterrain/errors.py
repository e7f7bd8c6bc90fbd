"""Exception hierarchy shared by the library, the CLI and the HTTP service."""
from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from wfcterrain.models.reports import CurlResidualReport


class WfcTerrainError(Exception):
    """Base class for every error raised by wfcterrain."""


class DataError(WfcTerrainError):
    """Input data cannot be processed. CLI exit code 2."""

    exit_code = 2


class MalformedFileError(DataError):
    """A binary input (e.g. an .hgt tile) has the wrong size or content."""


class GridParseError(DataError):
    """An ASCII grid is missing header keys or has ragged rows."""


class GridRangeError(DataError, ValueError):
    """A window, factor or dimension falls outside the grid it applies to."""


class VoidDataError(DataError):
    """A region that must be void-free contains the nodata marker."""


class ModelFormatError(DataError):
    """A model file is truncated, inconsistent or of an unknown version."""


class ModelError(DataError):
    """A model cannot be used for the requested operation (e.g. empty catalog)."""


class IntegrabilityError(DataError):
    """A gradient field has a nonzero curl residual and cannot be integrated."""

    def __init__(self, report: "CurlResidualReport"):
        self.report = report
        super().__init__(
            f"gradient field is not integrable: {report.violation_count} cells with "
            f"nonzero curl, max |residual| {report.max_abs_residual}"
        )


class GenerationFailedError(WfcTerrainError):
    """Every generation attempt ended in a contradiction. CLI exit code 3."""

    exit_code = 3

    def __init__(self, attempts: int, seed: int):
        self.attempts = attempts
        self.seed = seed
        super().__init__(f"generation failed after {attempts} attempts (seed {seed})")


class SolverLogicError(WfcTerrainError, RuntimeError):
    """A solver precondition was violated by the caller."""


class ContradictionError(WfcTerrainError):
    """A wave cell ran out of candidate patterns."""
