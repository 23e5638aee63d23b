"""Command line interface: ``mcacube {arrange,evaluate,sweep,render}``."""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import sys
from dataclasses import dataclass, field

from .arrange import arrange_cube, read_arrangement, write_arrangement
from .cube import CubeError, apply_arrangement, load_fact_table, sample_facts, sparsity
from .homogeneity import (
    DegenerateShapeError,
    UndefinedGainError,
    evaluate,
    gain,
    ih,
)
from .jacobi import ConvergenceError
from .mca import MCAError
from .render import render

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
SWEEP_HEADER = ["rate", "sparsity", "ih_initial", "ih_arranged", "gain"]


@dataclass
class RunConfig:
    command: str
    facts: str
    schema: str
    out: str
    arrangement: str | None = None
    seed: int = 0
    rates: list[float] = field(default_factory=lambda: [1.0])
    dims: tuple[str, str] | None = None
    format: str = "ppm"
    scale: int = 1


def _rates(text: str) -> list[float]:
    try:
        rates = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rate list {text!r}") from None
    if not rates or any(not 0 < r <= 1 for r in rates):
        raise argparse.ArgumentTypeError("rates must be a non-empty list of values in (0, 1]")
    return rates


def _dims(text: str) -> tuple[str, str]:
    parts = [x.strip() for x in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError("--dims takes exactly two dimension names, e.g. A,B")
    return parts[0], parts[1]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcacube",
        description="Reorder the modalities of a sparse data cube with MCA and score the layout.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--facts", required=True, help="comma-separated fact file")
        p.add_argument("--schema", required=True, help="JSON schema document")
        p.add_argument("--out", required=True, help="output file")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("arrange", help="compute an arrangement and print a summary")
    common(p)
    p = sub.add_parser("evaluate", help="write a homogeneity report")
    common(p)
    p.add_argument("--arrangement", help="arrangement document applied before scoring")
    p = sub.add_parser("sweep", help="homogeneity versus sparsity by fact sampling")
    common(p)
    p.add_argument("--rates", type=_rates, default=[1.0], help="e.g. 1,0.8,0.6")
    p = sub.add_parser("render", help="occupancy heatmap of two dimensions")
    common(p)
    p.add_argument("--arrangement")
    p.add_argument("--dims", type=_dims, required=True, help="row,column dimension names")
    p.add_argument("--format", choices=("ppm", "svg"), default="ppm")
    p.add_argument("--scale", type=int, default=1, help="pixels (ppm) per cell")
    return parser


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _load(config: RunConfig):
    cube = load_fact_table(config.facts, config.schema)
    arrangement = None
    if config.arrangement:
        arrangement = read_arrangement(config.arrangement, cube.schema)
    return cube, arrangement


def cmd_arrange(config: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    cube, _ = _load(config)
    arrangement = arrange_cube(cube)
    write_arrangement(arrangement, config.out)
    arranged = apply_arrangement(cube, arrangement)
    before, after = ih(cube), ih(arranged)
    print(f"sparsity: {sparsity(cube)!r}", file=stdout)
    print(f"ih_initial: {before!r}", file=stdout)
    print(f"ih_arranged: {after!r}", file=stdout)
    print(f"gain: {gain(before, after)!r}", file=stdout)
    return EXIT_OK


def cmd_evaluate(config: RunConfig, stdout=None) -> int:
    cube, arrangement = _load(config)
    if arrangement is not None:
        cube = apply_arrangement(cube, arrangement)
    evaluate(cube).write(config.out)
    return EXIT_OK


def rate_seed(seed: int, rate: float) -> int:
    """Seed for one sweep row, derived from ``(seed, rate)`` only."""
    digest = hashlib.sha256(f"{int(seed)}:{float(rate)!r}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def sweep_rows(cube, rates, seed: int) -> list[dict]:
    rows = []
    for rate in rates:
        sample = sample_facts(cube, rate, rate_seed(seed, rate))
        arranged = apply_arrangement(sample, arrange_cube(sample))
        before, after = ih(sample), ih(arranged)
        try:
            g = gain(before, after)
        except UndefinedGainError:
            g = None
        rows.append(
            {"rate": rate, "sparsity": sparsity(sample), "ih_initial": before,
             "ih_arranged": after, "gain": g}
        )
    return rows


def cmd_sweep(config: RunConfig, stdout=None) -> int:
    cube, _ = _load(config)
    rows = sweep_rows(cube, config.rates, config.seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow(["" if row[k] is None else repr(row[k]) for k in SWEEP_HEADER])
    _write(config.out, buf.getvalue())
    return EXIT_OK


def cmd_render(config: RunConfig, stdout=None) -> int:
    cube, arrangement = _load(config)
    _write(config.out, render(cube, config.dims, arrangement, config.format, config.scale))
    return EXIT_OK


COMMANDS = {
    "arrange": cmd_arrange,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "render": cmd_render,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        facts=args.facts,
        schema=args.schema,
        out=args.out,
        arrangement=getattr(args, "arrangement", None),
        seed=args.seed,
        rates=getattr(args, "rates", [1.0]),
        dims=getattr(args, "dims", None),
        format=getattr(args, "format", "ppm"),
        scale=getattr(args, "scale", 1),
    )
    try:
        return COMMANDS[config.command](config)
    except (CubeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MCAError, ConvergenceError, DegenerateShapeError, UndefinedGainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
