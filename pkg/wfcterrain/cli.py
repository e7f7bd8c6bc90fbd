"""Command-line driver wiring the pipeline stages into scriptable runs.

Exit codes: 0 success, 1 usage error, 2 data error, 3 generation failure.
Seeds and winning attempt indices are always printed so that any output
can be regenerated.
"""
import json
import logging
import time
from pathlib import Path

import click
import numpy as np
from pydantic import ValidationError

from wfcterrain.config import configure_logging
from wfcterrain.errors import DataError, GenerationFailedError
from wfcterrain.models.config import RunConfig
from wfcterrain.models.domain import GradientField
from wfcterrain.services.gradient import compute_gradients, training_set
from wfcterrain.services.patterns import build_model
from wfcterrain.services.reconstruct import integrate, path_deviation
from wfcterrain.services.resample import downsample_bilinear, downsample_window
from wfcterrain.services.solver import generate_with_report
from wfcterrain.services.stats import compare, gnuplot_histogram
from wfcterrain.services.synthetic import synthetic_terrain
from wfcterrain.storage.files import atomic_write
from wfcterrain.storage.model_io import load_model_file, save_model_file
from wfcterrain.storage.raster_io import (
    load_gradient_field,
    load_heightmap,
    render_pgm,
    save_gradient_field,
    save_heightmap,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_GENERATION = 3


def _config(subcommand: str, **options) -> RunConfig:
    values = {key: value for key, value in options.items() if value is not None}
    try:
        return RunConfig(subcommand=subcommand, **values)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'argument'}: {err['msg']}" for err in exc.errors()
        )
        raise click.UsageError(problems) from None


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------


def cmd_ingest(config: RunConfig) -> int:
    hm = load_heightmap(config.inputs[0])
    if config.window is not None:
        out = downsample_window(hm, config.factor, *config.window)
    else:
        out = downsample_bilinear(hm, config.factor)
    save_heightmap(out, config.out)
    click.echo(f"{out.rows}x{out.cols} heightmap, {out.void_count()} voids -> {config.out}")
    return EXIT_OK


def cmd_extract(config: RunConfig) -> int:
    fields = []
    for path in config.inputs:
        fields.extend(training_set(load_heightmap(path), config.transforms, config.allow_quarter_turns))
    started = time.perf_counter()
    model = build_model(fields, config.adjacency)
    elapsed = time.perf_counter() - started
    save_model_file(model, config.out)
    click.echo(
        f"{len(model)} patterns from {len(fields)} fields "
        f"({config.adjacency.value} adjacency, {elapsed:.2f} s) -> {config.out}"
    )
    return EXIT_OK


def cmd_generate(config: RunConfig) -> int:
    model = load_model_file(config.model)
    rows, cols = config.size
    for k in range(config.count):
        seed = config.seed + k
        result = generate_with_report(
            model, rows, cols, seed, config.max_restarts, config.parallel_attempts
        )
        stem = config.out if config.count == 1 else f"{config.out}_{k}"
        gx_path, gy_path = save_gradient_field(result.field, stem)
        click.echo(
            f"seed {seed}: attempt {result.attempt} succeeded after {result.attempts_used} "
            f"attempts -> {gx_path}, {gy_path}"
        )
    return EXIT_OK


def cmd_reconstruct(config: RunConfig) -> int:
    gf = load_gradient_field(config.field)
    base = config.base_height
    if config.reference is not None:
        base = int(np.rint(np.median(load_heightmap(config.reference).cells)))
    hm = integrate(gf, base, verify=config.verify)
    if config.verify:
        click.echo(f"max integration-order deviation: {path_deviation(gf, base)}")
    save_heightmap(hm, config.out)
    click.echo(f"{hm.rows}x{hm.cols} heightmap, base height {base} -> {config.out}")
    return EXIT_OK


def _load_field(path: Path) -> GradientField:
    """A gradient pair stem, or a heightmap file whose gradients are taken."""
    if path.is_file():
        return compute_gradients(load_heightmap(path))
    return load_gradient_field(path)


def cmd_evaluate(config: RunConfig) -> int:
    report = compare(
        _load_field(config.field),
        _load_field(config.output_field),
        bins=config.bins,
        mode=config.mode,
    )
    document = json.dumps(report.flat(), indent=2) + "\n"
    if config.histogram_out is not None:
        atomic_write(config.histogram_out, gnuplot_histogram(report.histogram))
    if config.out is None:
        click.echo(document, nl=False)
    else:
        atomic_write(config.out, document)
        click.echo(
            f"mean {report.summary_in.mean:.2f} -> {report.summary_out.mean:.2f}, "
            f"intersection {report.histogram.intersection_score:.3f} -> {config.out}"
        )
    return EXIT_OK


def cmd_render(config: RunConfig) -> int:
    hm = load_heightmap(config.inputs[0])
    atomic_write(config.out, render_pgm(hm))
    click.echo(f"{hm.rows}x{hm.cols} render -> {config.out}")
    return EXIT_OK


def cmd_synth(config: RunConfig) -> int:
    hm = synthetic_terrain(config.kind, config.rows, config.cols, config.seed)
    save_heightmap(hm, config.out)
    click.echo(f"{config.kind.value} {hm.rows}x{hm.cols} (seed {config.seed}) -> {config.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# click wiring
# ---------------------------------------------------------------------------

_path = click.Path(dir_okay=False)


@click.group()
def cli():
    """Synthesize terrain heightmaps from SRTM slope patterns."""


@cli.command()
@click.option("--hgt", "source", required=True, type=_path,
              help="SRTM .hgt tile or ASCII grid.")
@click.option("--factor", type=int, help="Bilinear downsample factor (default 8).")
@click.option("--window", help="row,col[,height,width] in downsampled pixels (size default 100x100).")
@click.option("--out", required=True, type=_path)
def ingest(source, factor, window, out):
    """Downsample and window a tile into an ASCII grid."""
    return cmd_ingest(_config("ingest", inputs=[source], factor=factor, window=window, out=out))


@cli.command()
@click.argument("heightmaps", nargs=-1, required=True, type=_path)
@click.option("--transforms", help="Comma-separated heightmap transforms (default identity,hflip,vflip,rot180).")
@click.option("--allow-quarter-turns", is_flag=True, help="Permit rot90/rot270.")
@click.option("--adjacency", type=click.Choice(["overlap", "observed"]), help="Adjacency inference mode.")
@click.option("--out", required=True, type=_path)
def extract(heightmaps, transforms, allow_quarter_turns, adjacency, out):
    """Learn a pattern model from one or more heightmaps."""
    return cmd_extract(_config(
        "extract", inputs=list(heightmaps), transforms=transforms,
        allow_quarter_turns=allow_quarter_turns, adjacency=adjacency, out=out,
    ))


@cli.command()
@click.option("--model", required=True, type=_path)
@click.option("--size", required=True, help="Output size ROWSxCOLS in wave cells.")
@click.option("--seed", type=int)
@click.option("--max-restarts", type=int)
@click.option("--parallel-attempts", type=int, help="Worker processes racing attempts.")
@click.option("--count", type=int, help="Number of outputs; output k uses seed+k.")
@click.option("--out", required=True, type=_path, help="Output stem for .gx.asc/.gy.asc.")
def generate(model, size, seed, max_restarts, parallel_attempts, count, out):
    """Generate gradient fields from a model."""
    return cmd_generate(_config(
        "generate", model=model, size=size, seed=seed, max_restarts=max_restarts,
        parallel_attempts=parallel_attempts, count=count, out=out,
    ))


@cli.command()
@click.option("--field", required=True, help="Gradient field stem.")
@click.option("--base-height", type=int)
@click.option("--base-from", "reference", type=_path,
              help="Use the median of this heightmap as base height.")
@click.option("--verify", is_flag=True, help="Check both integration orders agree.")
@click.option("--out", required=True, type=_path)
def reconstruct(field, base_height, reference, verify, out):
    """Integrate a gradient field into a heightmap."""
    return cmd_reconstruct(_config(
        "reconstruct", field=field, base_height=base_height, reference=reference, verify=verify, out=out,
    ))


@cli.command()
@click.option("--input", "field", required=True, help="Input gradient field stem or heightmap.")
@click.option("--output", "output_field", required=True, help="Generated gradient field stem or heightmap.")
@click.option("--bins", type=int)
@click.option("--mode", type=click.Choice(["euclidean", "components"]))
@click.option("--out", type=_path, help="JSON report path (stdout if omitted).")
@click.option("--histogram-out", type=_path, help="gnuplot histogram data path.")
def evaluate(field, output_field, bins, mode, out, histogram_out):
    """Compare slope statistics of an input and a generated field."""
    return cmd_evaluate(_config(
        "evaluate", field=field, output_field=output_field, bins=bins, mode=mode,
        out=out, histogram_out=histogram_out,
    ))


@cli.command()
@click.option("--heightmap", required=True, type=_path)
@click.option("--out", required=True, type=_path)
def render(heightmap, out):
    """Render a heightmap as a 16-bit PGM."""
    return cmd_render(_config("render", inputs=[heightmap], out=out))


@cli.command()
@click.option("--kind", type=click.Choice(["ramp", "sine", "random-walk"]))
@click.option("--rows", type=int)
@click.option("--cols", type=int)
@click.option("--seed", type=int)
@click.option("--out", required=True, type=_path)
def synth(kind, rows, cols, seed, out):
    """Write a synthetic test heightmap."""
    return cmd_synth(_config("synth", kind=kind, rows=rows, cols=cols, seed=seed, out=out))


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    try:
        result = cli.main(args=argv, prog_name="wfcterrain", standalone_mode=False)
    except GenerationFailedError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_GENERATION
    except (DataError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_DATA
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except (click.Abort, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK
