from pydantic import BaseModel, ConfigDict, Field, model_validator


class CurlResidualReport(BaseModel):
    """Discrete integrability check of a gradient field."""

    model_config = ConfigDict(frozen=True)

    max_abs_residual: int = Field(ge=0)
    violation_count: int = Field(ge=0)
    rows: int = Field(ge=0)
    cols: int = Field(ge=0)

    @property
    def integrable(self) -> bool:
        return self.violation_count == 0


class SlopeSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    median: float
    std: float = Field(ge=0)
    n: int = Field(ge=1)


class HistogramPair(BaseModel):
    """Input and output histograms over one shared set of bin edges."""

    model_config = ConfigDict(frozen=True)

    bin_edges: list[float]
    counts_in: list[int]
    counts_out: list[int]
    intersection_score: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_bins(self):
        bins = len(self.bin_edges) - 1
        if bins < 1 or len(self.counts_in) != bins or len(self.counts_out) != bins:
            raise ValueError("bin edges must number one more than the counts of each histogram")
        if any(b <= a for a, b in zip(self.bin_edges, self.bin_edges[1:])):
            raise ValueError("bin edges must be strictly ascending")
        return self


class ComparisonReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    summary_in: SlopeSummary
    summary_out: SlopeSummary
    histogram: HistogramPair
    mode: str = "euclidean"

    def flat(self) -> dict:
        """The report as the flat JSON document written by ``evaluate``."""
        return {
            "mean_in": self.summary_in.mean,
            "mean_out": self.summary_out.mean,
            "median_in": self.summary_in.median,
            "median_out": self.summary_out.median,
            "std_in": self.summary_in.std,
            "std_out": self.summary_out.std,
            "n_in": self.summary_in.n,
            "n_out": self.summary_out.n,
            "bin_edges": self.histogram.bin_edges,
            "counts_in": self.histogram.counts_in,
            "counts_out": self.histogram.counts_out,
            "intersection_score": self.histogram.intersection_score,
        }
