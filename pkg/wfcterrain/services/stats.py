"""Slope-magnitude statistics and input/output histogram comparison."""
from enum import Enum
from typing import Sequence

import numpy as np

from wfcterrain.errors import DataError
from wfcterrain.models.domain import GradientField
from wfcterrain.models.reports import ComparisonReport, HistogramPair, SlopeSummary

DEFAULT_BINS = 50


class MagnitudeMode(str, Enum):
    EUCLIDEAN = "euclidean"
    COMPONENTS = "components"


def slope_magnitude(gf: GradientField) -> np.ndarray:
    """sqrt(gx^2 + gy^2) per cell, meters per pixel."""
    return np.hypot(gf.gx.astype(np.float64), gf.gy.astype(np.float64))


def slope_samples(gf: GradientField, mode: MagnitudeMode | str = MagnitudeMode.EUCLIDEAN) -> np.ndarray:
    """Flat magnitude samples; ``components`` pools |gx| and |gy| as separate samples."""
    mode = MagnitudeMode(mode)
    if mode is MagnitudeMode.EUCLIDEAN:
        return slope_magnitude(gf).ravel()
    return np.concatenate([np.abs(gf.gx).ravel(), np.abs(gf.gy).ravel()]).astype(np.float64)


def summarize(values: Sequence[float] | np.ndarray) -> SlopeSummary:
    """Mean, median (midpoint for even n) and population standard deviation."""
    data = np.asarray(values, dtype=np.float64).ravel()
    if data.size == 0:
        raise DataError("cannot summarize an empty sequence")
    return SlopeSummary(
        mean=float(np.mean(data)),
        median=float(np.median(data)),
        std=float(np.std(data)),
        n=int(data.size),
    )


def histogram_intersection(counts_a: np.ndarray, counts_b: np.ndarray) -> float:
    """Sum over bins of the smaller normalised mass."""
    a = np.asarray(counts_a, dtype=np.float64)
    b = np.asarray(counts_b, dtype=np.float64)
    score = float(np.minimum(a / a.sum(), b / b.sum()).sum())
    return min(1.0, max(0.0, score))


def compare(
    input_gf: GradientField,
    output_gf: GradientField,
    bins: int = DEFAULT_BINS,
    mode: MagnitudeMode | str = MagnitudeMode.EUCLIDEAN,
) -> ComparisonReport:
    """Summaries of both magnitude sets and their histograms over shared uniform bins on [0, max]."""
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    mode = MagnitudeMode(mode)
    samples_in = slope_samples(input_gf, mode)
    samples_out = slope_samples(output_gf, mode)
    if samples_in.size == 0 or samples_out.size == 0:
        raise DataError("cannot compare empty fields")

    top = float(max(samples_in.max(), samples_out.max()))
    edges = np.linspace(0.0, top if top > 0 else 1.0, bins + 1)
    counts_in, _ = np.histogram(samples_in, bins=edges)
    counts_out, _ = np.histogram(samples_out, bins=edges)

    histogram = HistogramPair(
        bin_edges=edges.tolist(),
        counts_in=counts_in.tolist(),
        counts_out=counts_out.tolist(),
        intersection_score=histogram_intersection(counts_in, counts_out),
    )
    return ComparisonReport(
        summary_in=summarize(samples_in),
        summary_out=summarize(samples_out),
        histogram=histogram,
        mode=mode.value,
    )


def gnuplot_histogram(histogram: HistogramPair) -> str:
    """Two gnuplot data blocks (input, then output) of ``bin_center count`` lines."""
    edges = histogram.bin_edges
    centers = [(lo + hi) / 2 for lo, hi in zip(edges, edges[1:])]
    blocks = []
    for label, counts in (("input", histogram.counts_in), ("output", histogram.counts_out)):
        lines = [f"# {label}: bin_center count"]
        lines += [f"{center!r} {count}" for center, count in zip(centers, counts)]
        blocks.append("\n".join(lines))
    return "\n\n\n".join(blocks) + "\n"
