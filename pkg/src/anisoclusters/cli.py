"""Command line runner: one scenario file in, one JSON report (and
optionally one SVG) out.

Each subcommand matches a scenario task; running a scenario under the wrong
subcommand is a validation error. Exit codes: 0 on success, 2 for any
scenario or hypothesis violation, 3 when a solve finishes without meeting
its convergence criteria (the report and SVG are still written so the run
can be inspected).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__, svg
from .cluster import perimeter_breakdown, validate, weighted_perimeter, weighted_volume
from .gauge import roundedness_constant, strict_convexity_margin, unit_ball_boundary
from .geometry import unit_dir
from .optimizer import (
    OptimizationProblem,
    SolveOptions,
    interface_perimeter,
    minimize,
    steiner_diagnose,
)
from .report import make_report, write_report
from .scenario import TASKS, ScenarioError, load_scenario
from .slices import SliceConfig, improve
from .steiner import admissible_pairs, fermat_modes_for_colors, fermat_point

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3

OUT_ENV = "ANISOCLUSTERS_OUT"


def _point(p):
    return [float(p[0]), float(p[1])]


def _run_fermat(scn, seed):
    a, b, c = scn.payload["terminals"]
    if "colors" in scn.payload:
        modes, _ = fermat_modes_for_colors(scn.payload["colors"])
    else:
        modes = scn.payload.get("modes", ("sym", "sym", "sym"))
    res = fermat_point(scn.gauge, a, b, c, modes=modes, tol=scn.payload.get("tol", 1e-10))
    result = {
        "point": _point(res.point),
        "value": float(res.value),
        "iterations": int(res.iterations),
        "gradient_norm": float(res.gradient_norm),
        "modes": list(modes),
        "terminals": [_point(t) for t in (a, b, c)],
        "degenerate_vertex": res.degenerate_vertex,
        "collinear": bool(res.collinear),
    }

    def render():
        return svg.render_fermat_svg((a, b, c), res.point, modes)

    return result, render, EXIT_OK


def _run_triples(scn, seed):
    a = scn.payload["point"]
    pairs = admissible_pairs(
        scn.gauge,
        a,
        resolution=scn.payload.get("resolution", 720),
        tol=scn.payload.get("tol", 1e-9),
    )
    result = {
        "point": _point(a),
        "count": len(pairs),
        "pairs": [
            {
                "a": _point(t.a),
                "b": _point(t.b),
                "c": _point(t.c),
                "angle_b_deg": float(np.degrees(t.angle_b)),
                "angle_c_deg": float(np.degrees(t.angle_c)),
                "residual": float(t.residual),
                "iterations": int(t.iterations),
            }
            for t in pairs
        ],
    }
    a_pt = pairs[0].a if pairs else scn.gauge.boundary_point(np.arctan2(a[1], a[0]))

    def render():
        return svg.render_triples_svg(scn.gauge, a_pt, pairs)

    return result, render, EXIT_OK


def _run_slices(scn, seed):
    config = SliceConfig(scn.payload["angles"], scn.payload["colors"], scn.gauge)
    res = improve(config)
    result = {
        "config": config.spec(),
        "perimeter_before": float(res.perimeter_before),
        "perimeter_after": float(res.perimeter_after),
        "delta": float(res.delta),
        "move": list(res.move),
        "guaranteed": bool(res.guaranteed),
    }

    def render():
        return svg.render_network_svg(
            res.network.segments,
            ghost_segments=config.base_network().segments,
            circle_radius=1.0,
        )

    return result, render, EXIT_OK


def _run_perimeter(scn, seed):
    cluster = scn.payload["cluster"]
    density = scn.density
    vols = weighted_volume(cluster, density)
    result = {
        "perimeter": float(weighted_perimeter(cluster, density)),
        "interface_perimeter": float(interface_perimeter(cluster, density)),
        "volumes": [float(v) for v in vols],
        "edge_perimeters": [float(w) for w in perimeter_breakdown(cluster, density)],
        "chambers": int(cluster.m),
        "validation": validate(cluster),
    }

    def render():
        return svg.render_cluster_svg(cluster)

    return result, render, EXIT_OK


def _run_solve(scn, seed):
    options = dict(scn.payload["options"])
    options["seed"] = seed
    problem = OptimizationProblem(
        cluster=scn.payload["cluster"],
        density=scn.density,
        targets=scn.payload["targets"],
        options=SolveOptions(**options),
    )
    report = minimize(problem)
    result = report.spec()

    def render():
        points = [j["point"] for j in report.junctions]
        return svg.render_cluster_svg(report.cluster, junction_points=points)

    return result, render, EXIT_OK if report.success else EXIT_NO_CONVERGENCE


def _run_diagnose(scn, seed):
    cluster = scn.payload["cluster"]
    rep = steiner_diagnose(
        cluster,
        scn.density,
        fit_points=scn.payload.get("fit_points", 5),
        merge_radius=scn.payload.get("merge_radius", 0.0),
    )
    result = rep.spec()

    def render():
        points = [j.point for j in rep.junctions]
        return svg.render_cluster_svg(cluster, junction_points=points)

    return result, render, EXIT_OK


def _run_gaugeprobe(scn, seed):
    gauge = scn.gauge
    n = scn.payload.get("directions", 256)
    u = unit_dir(np.arange(n) * (2.0 * np.pi / n))
    values = gauge.value(u)
    grads = gauge.grad(u)
    euler = float(np.abs(np.sum(grads * u, axis=1) - values).max())
    result = {
        "gauge": gauge.spec(),
        "directions": int(n),
        "h_min": float(values.min()),
        "h_max": float(values.max()),
        "euler_residual": euler,
        "smooth": bool(gauge.smooth),
        "symmetric": bool(gauge.symmetric),
        "strict_convexity_margin": float(strict_convexity_margin(gauge, n_dirs=n)),
        "roundedness_constant": float(roundedness_constant(gauge)),
        "boundary": [_point(p) for p in unit_ball_boundary(gauge, n=min(n, 64))],
    }

    def render():
        return svg.render_gauge_svg(gauge)

    return result, render, EXIT_OK


_RUNNERS = {
    "fermat": _run_fermat,
    "triples": _run_triples,
    "slices": _run_slices,
    "perimeter": _run_perimeter,
    "solve": _run_solve,
    "diagnose": _run_diagnose,
    "gaugeprobe": _run_gaugeprobe,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="anisoclusters",
        description="Planar clusters with anisotropic perimeter and weighted volume.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in TASKS:
        sp = sub.add_parser(name, help=f"run a '{name}' scenario")
        sp.add_argument("--scenario", required=True, help="path to the scenario JSON file")
        sp.add_argument(
            "--out",
            default=None,
            help=f"output directory (default: ${OUT_ENV} or the working directory)",
        )
        sp.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        sp.add_argument("--svg", action="store_true", help="also write an SVG rendering")
        sp.add_argument("--verbose", action="store_true", help="print run details")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        scn = load_scenario(args.scenario)
        if scn.task != args.command:
            raise ScenarioError(
                "scenario.task",
                f"scenario task {scn.task!r} does not match subcommand {args.command!r}",
            )
        seed = args.seed
        if seed is None:
            seed = scn.seed if scn.seed is not None else 0
        if seed < 0:
            raise ScenarioError("scenario.seed", "seed must be nonnegative")
        result, render, code = _RUNNERS[scn.task](scn, seed)
    except ScenarioError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID

    out_dir = args.out or os.environ.get(OUT_ENV) or "."
    os.makedirs(out_dir, exist_ok=True)
    report = make_report(
        scn.task, result, seed=seed, scenario_name=os.path.basename(args.scenario)
    )
    report_path = os.path.join(out_dir, scn.out_report or f"{scn.task}.json")
    write_report(report_path, report)
    wrote = [report_path]
    if args.svg or scn.out_svg:
        svg_path = os.path.join(out_dir, scn.out_svg or f"{scn.task}.svg")
        with open(svg_path, "w", encoding="utf-8") as fh:
            fh.write(render())
        wrote.append(svg_path)
    if args.verbose:
        for key in ("perimeter", "value", "delta", "count", "success"):
            if isinstance(result, dict) and key in result:
                print(f"{key}: {result[key]}")
    for path in wrote:
        print(f"wrote {path}")
    return code


if __name__ == "__main__":
    sys.exit(main())
