"""Command line interface.

Every command reads a points CSV (header x0,...,x{d-1},colour), writes
UTF-8 text to stdout or -o, and reports failures as one-line JSON on
stderr.  Exit codes: 1 invalid input, 2 general position violation,
3 internal invariant falsified.
"""
from __future__ import annotations

import functools
import json
import os
import sys

import click

from .bench import REPEATS, run_benchmark, records_to_csv
from .core import check_general_position, validate_chromatic_set
from .delaunay import chromatic_delaunay
from .errors import ChromadelError, GeneralPositionViolation, ParseError
from .filtrations import (cech_filtration, chromatic_alpha_filtration,
                          del_cech_filtration, del_rips_filtration,
                          rips_filtration)
from .formats import (filtration_to_json, parse_points_csv,
                      triangulation_to_json)
from .morse import verify_collapse_theorems
from .persistence import compute_persistence
from .stability import perturbation_experiment

FILTRATION_KINDS = ("alpha", "del-cech", "del-rips", "cech", "rips")


def thread_count(requested) -> int:
    """Resolve --threads with the environment variable as fallback.

    All maps run single threaded at desk scale; the count is validated
    and recorded so outputs stay independent of it.
    """
    if requested is None:
        requested = os.environ.get("CHROMATIC_TDA_THREADS", "1")
    try:
        n = int(requested)
    except (TypeError, ValueError):
        raise ParseError(f"thread count must be an integer, got {requested!r}")
    if n < 1:
        raise ParseError(f"thread count must be positive, got {n}")
    return n


def _emit(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_cloud(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    points, colours = parse_points_csv(text)
    return validate_chromatic_set(points, colours)


def _build_filtration(cloud, kind: str, dim_cap):
    if kind == "alpha":
        return chromatic_alpha_filtration(cloud)
    if kind == "del-cech":
        return del_cech_filtration(cloud)
    if kind == "del-rips":
        return del_rips_filtration(cloud)
    if kind == "cech":
        return cech_filtration(cloud, dim_cap=dim_cap)
    return rips_filtration(cloud, dim_cap=dim_cap)


def handled(fn):
    """Turn package errors into JSON on stderr plus the right exit code."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ChromadelError as exc:
            click.echo(json.dumps(exc.to_json_dict(), sort_keys=True),
                       err=True)
            sys.exit(exc.exit_code)
    return wrapper


@click.group()
@click.option("--threads", default=None,
              help="Worker count (fallback: CHROMATIC_TDA_THREADS).")
@click.pass_context
def main(ctx, threads):
    """Chromatic Delaunay filtrations, persistence and collapse checks."""
    ctx.ensure_object(dict)
    ctx.obj["threads"] = threads


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("-o", "--output", default=None, type=click.Path())
@click.pass_context
@handled
def triangulate(ctx, input_path, output):
    """Chromatic Delaunay triangulation as JSON."""
    thread_count(ctx.obj["threads"])
    cloud = _load_cloud(input_path)
    tri = chromatic_delaunay(cloud)
    _emit(triangulation_to_json(tri, cloud.d, cloud.s), output)


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("--kind", type=click.Choice(FILTRATION_KINDS), required=True)
@click.option("--dim-cap", default=None, type=int,
              help="Dimension cap for the full-complex kinds.")
@click.option("-o", "--output", default=None, type=click.Path())
@click.pass_context
@handled
def filtrate(ctx, input_path, kind, dim_cap, output):
    """Filtration values as JSON, simplices in canonical order."""
    thread_count(ctx.obj["threads"])
    cloud = _load_cloud(input_path)
    fc = _build_filtration(cloud, kind, dim_cap)
    _emit(filtration_to_json(fc), output)


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("--kind", type=click.Choice(FILTRATION_KINDS), required=True)
@click.option("--max-degree", default=None, type=int)
@click.option("--dim-cap", default=None, type=int)
@click.option("-o", "--output", default=None, type=click.Path())
@click.pass_context
@handled
def persist(ctx, input_path, kind, max_degree, dim_cap, output):
    """Persistence diagram as CSV (degree,birth,death)."""
    thread_count(ctx.obj["threads"])
    cloud = _load_cloud(input_path)
    if dim_cap is None and kind in ("cech", "rips") and max_degree is not None:
        dim_cap = max_degree + 1
    fc = _build_filtration(cloud, kind, dim_cap)
    diagram = compute_persistence(fc, max_degree=max_degree)
    _emit(diagram.to_csv(), output)


@main.command("collapse-check")
@click.argument("input_path", type=click.Path())
@click.option("-o", "--output", default=None, type=click.Path())
@click.pass_context
@handled
def collapse_check(ctx, input_path, output):
    """Certify the collapses down the refinement chain and onto alpha."""
    thread_count(ctx.obj["threads"])
    cloud = _load_cloud(input_path)
    records = verify_collapse_theorems(cloud)
    report = {
        "ok": True,
        "checks": len(records),
        "total_removed": sum(r["removed"] for r in records),
        "records": records,
    }
    _emit(json.dumps(report, sort_keys=True) + "\n", output)


@main.command("gp-check")
@click.argument("input_path", type=click.Path())
@click.option("--exact/--no-exact", default=False,
              help="Use rational arithmetic for the sphere condition.")
@click.option("-o", "--output", default=None, type=click.Path())
@click.pass_context
@handled
def gp_check(ctx, input_path, exact, output):
    """Verify both general position conditions; exit 2 with a witness."""
    thread_count(ctx.obj["threads"])
    cloud = _load_cloud(input_path)
    report = check_general_position(cloud, exact=exact)
    if not report.ok:
        raise GeneralPositionViolation("general position violated",
                                       witness=report.witness)
    _emit(json.dumps({
        "ok": True,
        "checked_sphere_subsets": report.checked_sphere_subsets,
        "checked_partitions": report.checked_partitions,
    }, sort_keys=True) + "\n", output)


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("--eta", type=float, required=True)
@click.option("--seed", type=int, required=True)
@click.option("-o", "--output", default=None, type=click.Path())
@click.pass_context
@handled
def stability(ctx, input_path, eta, seed, output):
    """Perturbation experiment report as JSON."""
    thread_count(ctx.obj["threads"])
    cloud = _load_cloud(input_path)
    report = perturbation_experiment(cloud, eta=eta, seed=seed)
    _emit(json.dumps(report.to_json_dict(), sort_keys=True) + "\n", output)


@main.command()
@click.option("--scheme", type=click.Choice(("points", "dimension", "colours")),
              required=True)
@click.option("--seed", type=int, required=True)
@click.option("--sizes", default=None,
              help="Comma separated values of the varying parameter.")
@click.option("--repeats", default=REPEATS, type=int)
@click.option("-o", "--output", default=None, type=click.Path())
@click.pass_context
@handled
def bench(ctx, scheme, seed, sizes, repeats, output):
    """Timing records for one sampling scheme as CSV."""
    thread_count(ctx.obj["threads"])
    wanted = None
    if sizes is not None:
        try:
            wanted = [int(x) for x in sizes.split(",") if x.strip()]
        except ValueError:
            raise ParseError(f"bad --sizes value {sizes!r}")
    records = run_benchmark(scheme, seed, sizes=wanted, repeats=repeats)
    _emit(records_to_csv(records), output)


if __name__ == "__main__":
    main()
