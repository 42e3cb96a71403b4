"""Command-line entry point for Grassmann endmember extraction."""

from __future__ import annotations

import argparse
import json
import logging
from pathlib import Path
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

BACKEND_ROOT = Path(__file__).resolve().parents[1]
if str(BACKEND_ROOT) not in sys.path:
    sys.path.append(str(BACKEND_ROOT))

from pydantic import ValidationError

from chsa.dao import write_stratification
from chsa.models import ChsaParams
from chsa.service import stratify
from core import VERSION
from core.config import Config
from core.errors import GrassmannError, InputError, MalformedArtifact
from core.serialization import read_model, sidecar_path, write_model
from mds.dao import read_embedding, write_embedding
from mds.models import AUTO
from mds.service import embed
from pipeline.dao import load_cube, read_class_map, read_report, report_document, write_cube, write_plot_data, write_report
from pipeline.service import extract_endmembers, extract_patches, sample_classes, simplex_dataset, synthetic_cube
from subspace.dao import read_distance_matrix, read_subspace_meta, read_subspace_set, write_distance_matrix, write_subspace_set
from subspace.models import SubspaceSetMeta
from subspace.service import distance_matrix

from cli.models import ArtifactMeta, RunConfig

logger = logging.getLogger(__name__)

INPUT_DESTS = ("input", "header", "class_map")
OUTPUT_DESTS = ("output", "stratification_output")
CHSA_DESTS = ("neighbors", "gamma", "lambda_", "solver_tolerance", "negativity_threshold")


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _dimension(value: str):
    if value.lower() == AUTO:
        return AUTO
    try:
        return int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'auto' or an integer, got {value!r}") from exc


def _add_chsa_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("CHSA")
    group.add_argument("--neighbors", type=int, help="nearest neighbors per point (default 7)")
    group.add_argument("--gamma", type=float, help="l2 penalty (default 1e-10)")
    group.add_argument("--lambda", dest="lambda_", type=float, help="l1 penalty (default 1e-5)")
    group.add_argument("--solver-tolerance", type=float, help="KKT stationarity tolerance (default 1e-9)")
    group.add_argument("--negativity-threshold", type=float, help="weights below minus this are negative (default 1e-7)")


def build_parser() -> Tuple[argparse.ArgumentParser, argparse._SubParsersAction]:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, help="joblib workers (-1 for all cores)")
    common.add_argument("--log-level", help="logging level (default from GRASSMANN_LOG_LEVEL)")
    common.add_argument("--config", help="re-run with the RunConfig echoed in an earlier artifact")

    parser = _Parser(prog="grassmann-endmembers", description="Endmember extraction on Grassmann manifolds")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    simplex = commands.add_parser("simplex-gen", parents=[common], help="generators plus random weighted flag means")
    simplex.add_argument("--generators", type=int, default=3)
    simplex.add_argument("--ambient", type=int, default=10)
    simplex.add_argument("--dim", type=int, default=3)
    simplex.add_argument("--count", type=int, default=5000, help="total points, generators included")
    simplex.add_argument("--seed", type=int, default=0)
    simplex.add_argument("--weight-method", choices=["uniform", "dirichlet"], default="uniform")
    simplex.add_argument("--output", "-o")

    synth = commands.add_parser("synth-cube", parents=[common], help="write a synthetic mixture cube")
    synth.add_argument("--rows", type=int, default=145)
    synth.add_argument("--cols", type=int, default=145)
    synth.add_argument("--bands", type=int, default=200)
    synth.add_argument("--endmembers", type=int, default=4)
    synth.add_argument("--noise", type=float, default=0.01)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--interleave", choices=["BSQ", "BIL", "BIP"], default="BSQ")
    synth.add_argument("--dtype", choices=["float32", "float64", "int16"], default="float64")
    synth.add_argument("--output", "-o", help="header path")

    patches = commands.add_parser("patches", parents=[common], help="subspaces from s x s pixel patches")
    patches.add_argument("--header")
    patches.add_argument("--patch-size", type=int, default=3)
    patches.add_argument("--stride", type=int)
    patches.add_argument("--rank-tolerance", type=float)
    patches.add_argument("--output", "-o")

    classes = commands.add_parser("class-sample", parents=[common], help="subspaces from random same-class draws")
    classes.add_argument("--header")
    classes.add_argument("--class-map")
    classes.add_argument("--draw-size", type=int, default=9)
    classes.add_argument("--draws-per-class", type=int, default=10)
    classes.add_argument("--seed", type=int, default=0)
    classes.add_argument("--rank-tolerance", type=float)
    classes.add_argument("--output", "-o")

    distances = commands.add_parser("distances", parents=[common], help="chordal distance matrix")
    distances.add_argument("--input", "-i")
    distances.add_argument("--output", "-o")

    embedding = commands.add_parser("embed", parents=[common], help="classical MDS of a distance matrix")
    embedding.add_argument("--input", "-i")
    embedding.add_argument("--mds-dim", type=_dimension, default=AUTO)
    embedding.add_argument("--output", "-o")

    chsa = commands.add_parser("chsa", parents=[common], help="stratify an embedding")
    chsa.add_argument("--input", "-i")
    _add_chsa_options(chsa)
    chsa.add_argument("--output", "-o")

    extract = commands.add_parser("extract", parents=[common], help="distances, MDS and CHSA in one go")
    extract.add_argument("--input", "-i")
    extract.add_argument("--mds-dim", type=_dimension, default=AUTO)
    _add_chsa_options(extract)
    extract.add_argument("--output", "-o")
    extract.add_argument("--stratification-output")

    plot = commands.add_parser("plot-data", parents=[common], help="x,y,z plot table from a report")
    plot.add_argument("--input", "-i")
    plot.add_argument("--output", "-o")

    return parser, commands


def _load_run_config(path: str) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise MalformedArtifact(f"missing config {path}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedArtifact(f"{path} is not JSON: {exc}") from exc
    if isinstance(data, dict) and isinstance(data.get("run"), dict):
        data = data["run"]
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise MalformedArtifact(f"{path} does not hold a RunConfig: {exc}") from exc


def parse_args(argv: Optional[Sequence[str]]) -> argparse.Namespace:
    parser, commands = build_parser()
    args = parser.parse_args(argv)
    if not args.config:
        return args

    config = _load_run_config(args.config)
    if config.command != args.command:
        raise UsageError(f"config was produced by {config.command!r}, not {args.command!r}")
    defaults = {key: value for key, value in config.model_dump(exclude_none=True).items()
                if key not in {"command", "version", "inputs", "outputs", "chsa"}}
    defaults.update(config.inputs)
    defaults.update(config.outputs)
    if config.chsa is not None:
        defaults.update(config.chsa.model_dump())
    subparser = commands.choices[args.command]
    known = set(vars(subparser.parse_args([])))
    subparser.set_defaults(**{key: value for key, value in defaults.items() if key in known})
    return parser.parse_args(argv)


def _require(args: argparse.Namespace, *dests: str) -> None:
    missing = [dest for dest in dests if getattr(args, dest, None) is None]
    if missing:
        raise UsageError(f"missing required options: {', '.join('--' + dest.replace('_', '-') for dest in missing)}")


def _threads(args: argparse.Namespace) -> int:
    return args.threads if args.threads is not None else Config.THREADS


def _rank_tolerance(args: argparse.Namespace) -> float:
    return args.rank_tolerance if args.rank_tolerance is not None else Config.RANK_TOLERANCE


def _chsa_params(args: argparse.Namespace) -> ChsaParams:
    return ChsaParams.from_config(**{dest: getattr(args, dest) for dest in CHSA_DESTS})


def _run_config(args: argparse.Namespace, **resolved) -> RunConfig:
    fields = RunConfig.model_fields
    values = {
        key: value
        for key, value in vars(args).items()
        if key in fields and key not in {"command", "inputs", "outputs", "chsa"}
    }
    values.update(resolved)
    return RunConfig(
        command=args.command,
        version=VERSION,
        inputs={dest: getattr(args, dest) for dest in INPUT_DESTS if getattr(args, dest, None) is not None},
        outputs={dest: getattr(args, dest) for dest in OUTPUT_DESTS if getattr(args, dest, None) is not None},
        **values,
    )


def cmd_simplex_gen(args: argparse.Namespace) -> None:
    _require(args, "output")
    if args.count < args.generators:
        raise InputError(f"--count {args.count} is smaller than --generators {args.generators}")
    threads = _threads(args)
    points = simplex_dataset(
        args.generators,
        args.ambient,
        args.dim,
        args.count - args.generators,
        args.seed,
        method=args.weight_method,
        threads=threads,
    )
    run = _run_config(args, threads=threads)
    meta = SubspaceSetMeta(p=len(points), n=args.ambient, k=args.dim, origins=list(range(len(points))), run=run.echo())
    write_subspace_set(args.output, points, meta)
    logger.info("Wrote simplex dataset", extra={"path": args.output, "points": len(points)})


def cmd_synth_cube(args: argparse.Namespace) -> None:
    _require(args, "output")
    values = synthetic_cube(args.rows, args.cols, args.bands, args.endmembers, args.noise, args.seed)
    if args.dtype == "int16":
        values = values * 1000.0
    write_cube(args.output, values, interleave=args.interleave, dtype=args.dtype)
    write_model(sidecar_path(args.output), ArtifactMeta(run=_run_config(args).echo()))


def cmd_patches(args: argparse.Namespace) -> None:
    _require(args, "header", "output")
    tolerance = _rank_tolerance(args)
    patch_set = extract_patches(load_cube(args.header), args.patch_size, args.stride, tolerance)
    run = _run_config(args, stride=patch_set.stride, rank_tolerance=tolerance)
    points = patch_set.points
    meta = SubspaceSetMeta(
        p=len(points),
        n=points[0].n if points else 0,
        k=points[0].k if points else 0,
        origins=patch_set.origins,
        excluded=patch_set.excluded,
        run=run.echo(),
    )
    write_subspace_set(args.output, points, meta)
    logger.info(
        "Wrote patch set",
        extra={"path": args.output, "points": len(points), "excluded": len(patch_set.excluded)},
    )


def cmd_class_sample(args: argparse.Namespace) -> None:
    _require(args, "header", "class_map", "output")
    tolerance = _rank_tolerance(args)
    samples = sample_classes(
        load_cube(args.header),
        read_class_map(args.class_map),
        args.draw_size,
        args.draws_per_class,
        args.seed,
        tolerance,
    )
    run = _run_config(args, rank_tolerance=tolerance)
    points = samples.points
    meta = SubspaceSetMeta(
        p=len(points),
        n=points[0].n if points else 0,
        k=points[0].k if points else 0,
        labels=samples.labels,
        run=run.echo(),
    )
    write_subspace_set(args.output, points, meta)


def cmd_distances(args: argparse.Namespace) -> None:
    _require(args, "input", "output")
    threads = _threads(args)
    matrix = distance_matrix(read_subspace_set(args.input), threads=threads)
    write_distance_matrix(args.output, matrix)
    run = _run_config(args, threads=threads)
    write_model(sidecar_path(args.output), ArtifactMeta(run=run.echo(), p=matrix.p, k=matrix.k))


def _distance_k(path: str) -> Optional[int]:
    meta_path = sidecar_path(path)
    if not meta_path.exists():
        return None
    return read_model(meta_path, ArtifactMeta).k


def cmd_embed(args: argparse.Namespace) -> None:
    _require(args, "input", "output")
    embedding = embed(read_distance_matrix(args.input, k=_distance_k(args.input)), args.mds_dim)
    write_embedding(args.output, embedding, run=_run_config(args).echo())


def cmd_chsa(args: argparse.Namespace) -> None:
    _require(args, "input", "output")
    params = _chsa_params(args)
    threads = _threads(args)
    result = stratify(read_embedding(args.input).coordinates, params, threads=threads)
    write_stratification(args.output, result)
    run = _run_config(args, chsa=params, threads=threads)
    write_model(sidecar_path(args.output), ArtifactMeta(run=run.echo(), p=len(result.records)))


def cmd_extract(args: argparse.Namespace) -> None:
    _require(args, "input", "output")
    points = read_subspace_set(args.input)
    meta = read_subspace_meta(args.input)
    origins = meta.origins if meta is not None and meta.origins is not None else None
    params = _chsa_params(args)
    threads = _threads(args)
    report = extract_endmembers(points, params, args.mds_dim, origins=origins, threads=threads)
    run = _run_config(args, chsa=params, threads=threads)
    write_report(args.output, report_document(report, run.echo()))
    if args.stratification_output:
        write_stratification(args.stratification_output, report.stratification)
    logger.info(
        "Wrote extraction report",
        extra={"path": args.output, "vertices": len(report.stratification.vertex_indices)},
    )


def cmd_plot_data(args: argparse.Namespace) -> None:
    _require(args, "input", "output")
    frame = write_plot_data(args.output, read_report(args.input))
    write_model(sidecar_path(args.output), ArtifactMeta(run=_run_config(args).echo(), p=len(frame)))


COMMANDS: Dict[str, Callable[[argparse.Namespace], None]] = {
    "simplex-gen": cmd_simplex_gen,
    "synth-cube": cmd_synth_cube,
    "patches": cmd_patches,
    "class-sample": cmd_class_sample,
    "distances": cmd_distances,
    "embed": cmd_embed,
    "chsa": cmd_chsa,
    "extract": cmd_extract,
    "plot-data": cmd_plot_data,
}


def _one_line(message: str) -> str:
    return " ".join(str(message).split())


def run(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; 0 on success, 1 on input errors, 2 on numerical failures."""
    try:
        args = parse_args(argv)
        logging.basicConfig(
            level=(args.log_level or Config.LOG_LEVEL).upper(),
            stream=sys.stderr,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
        Config.validate()
        COMMANDS[args.command](args)
        return 0
    except GrassmannError as exc:
        print(f"error: {exc.kind}: {_one_line(exc)}", file=sys.stderr)
        return exc.exit_code
    except ValidationError as exc:
        print(f"error: InvalidParameter: {_one_line(exc)}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    except Exception as exc:  # pragma: no cover - unexpected failures
        logger.exception("Command failed")
        print(f"error: {type(exc).__name__}: {_one_line(exc)}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
