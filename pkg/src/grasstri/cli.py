"""Command line front end.

Exit codes: 0 ok, 1 input error, 2 geometric refusal, 3 identity-suite failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time

import numpy as np

from . import __version__
from .area import check_regular, sphere_area, surface_integral, triangle_area
from .chart import SpaceParams
from .errors import GeometryError, NotRegular
from .geodesics import classify_pair, distance
from .scene import Scene, SceneError
from .verify import RNG_NAME, THRESHOLDS, draw_configuration, run_campaign, trial_rng

EXIT_OK, EXIT_INPUT, EXIT_REFUSED, EXIT_FAILED = 0, 1, 2, 3

COLUMNS = [
    "task", "inputs", "classification", "formula", "oracle", "residual",
    "psi_re", "psi_im", "distance", "max_angle", "min_margin", "version", "seed", "rng",
]


class InputError(Exception):
    pass


def fmt(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def emit(records, fmt_name, seed, timing, out):
    for rec in records:
        rec.setdefault("version", __version__)
        rec.setdefault("seed", seed)
        rec.setdefault("rng", RNG_NAME)
    columns = COLUMNS + (["timing"] if timing else [])
    if not timing:
        for rec in records:
            rec.pop("timing", None)
    if fmt_name == "full":
        out.write(json.dumps({"version": __version__, "seed": seed, "rng": RNG_NAME,
                              "records": records}, indent=2, default=_json_default))
        out.write("\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([fmt(rec.get(c)) for c in columns])
    out.write(buf.getvalue())


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not serializable: {type(obj)}")


def parse_space(text):
    try:
        k, m = (int(x) for x in text.split(","))
        return SpaceParams(k, m)
    except ValueError as exc:
        raise InputError(f"--space expects k,m with positive integers, got {text!r}") from exc


def load_scene(args):
    if not args.scene:
        raise InputError("this command needs --scene FILE")
    try:
        return Scene.load(args.scene)
    except SceneError as exc:
        raise InputError(f"malformed scene: {exc}") from exc


def area_record(scene, names, grid):
    start = time.perf_counter()
    pts = [scene.point(n) for n in names]
    rec = {"task": "area", "inputs": " ".join(names)}
    try:
        check_regular(pts)
    except NotRegular as exc:
        i, j = exc.index
        raise GeometryError(f"pair ({names[i]},{names[j]}): {exc.pair_class.tag}") from exc
    value = triangle_area(*pts)
    rec.update(classification="Regular", formula=value,
               psi_re=float(np.cos(value / 2)), psi_im=float(np.sin(value / 2)))
    if grid is not None:
        oracle = surface_integral(*pts, grid=grid, check=True)
        rec.update(oracle=oracle, residual=abs(value - oracle))
    rec["timing"] = time.perf_counter() - start
    return rec


def classify_record(scene, names):
    start = time.perf_counter()
    a, b = (scene.point(n) for n in names)
    cls = classify_pair(a, b)
    rec = {"task": "classify", "inputs": " ".join(names), "classification": cls.tag,
           "max_angle": cls.max_angle, "min_margin": cls.min_det}
    if cls.regular:
        rec["distance"] = distance(a, b)
    rec["timing"] = time.perf_counter() - start
    return rec


def sphere_record(space, grid):
    start = time.perf_counter()
    value = sphere_area(grid, space)
    return {"task": "sphere", "inputs": f"space={space.k},{space.m} grid={grid}",
            "formula": value, "residual": abs(value - 4 * np.pi),
            "timing": time.perf_counter() - start}


def verify_records(summary):
    recs = []
    for name, (value, trial) in summary["worst"].items():
        status = "ok" if value <= THRESHOLDS[name] else "FAILED"
        where = "" if trial is None else f" worst_trial={trial}"
        recs.append({"task": "verify", "inputs": f"identity={name}{where}",
                     "classification": status, "residual": value,
                     "oracle": THRESHOLDS[name]})
    k, m = summary["space"]
    recs.append({"task": "verify", "inputs": f"space={k},{m} trials={summary['trials']} "
                 f"rejected={summary['rejected']}",
                 "classification": "FAILED" if summary["failed"] else "ok"})
    return recs


def cmd_area(args, out):
    scene = load_scene(args)
    triangles = [args.triangle] if args.triangle else [
        t["triangle"] for t in scene.tasks if t["kind"] == "area"]
    if not triangles:
        raise InputError("no triangle given (--triangle a b c or area tasks in the scene)")
    records = [area_record(scene, names, args.grid) for names in triangles]
    return records, EXIT_OK


def cmd_classify(args, out):
    scene = load_scene(args)
    pairs = [args.pair] if args.pair else [
        t["pair"] for t in scene.tasks if t["kind"] == "classify"]
    if not pairs:
        raise InputError("no pair given (--pair a b or classify tasks in the scene)")
    return [classify_record(scene, names) for names in pairs], EXIT_OK


def cmd_sphere(args, out):
    space = parse_space(args.space) if args.space else SpaceParams(1, 1)
    return [sphere_record(space, args.grid or 256)], EXIT_OK


def cmd_verify(args, out):
    grid = args.grid or 128
    if args.scene and not args.random:
        scene = load_scene(args)
        names = list(scene.points)
        if len(names) < 3:
            raise InputError("verify needs at least three scene points")
        size = 4 if len(names) >= 4 else 3
        configs = [[scene.points[n] for n in c] for c in itertools.combinations(names, size)]
        summary = run_campaign(scene.space, seed=args.seed, grid=grid, configurations=configs)
    else:
        space = parse_space(args.space) if args.space else SpaceParams(1, 1)
        summary = run_campaign(space, trials=args.trials, seed=args.seed, grid=grid)
    records = verify_records(summary)
    if summary["failed"]:
        print(f"failed identities: {', '.join(summary['failed'])} "
              f"(reproduce with --seed {args.seed}; trial indices in the report)", file=sys.stderr)
        return records, EXIT_FAILED
    return records, EXIT_OK


def sample_scene(space, trials, seed):
    """Scene with ``trials`` random regular triangles and an area task for each."""
    scene = Scene(space)
    for trial in range(trials):
        points, _ = draw_configuration(space, trial_rng(seed, trial), count=3)
        names = [f"t{trial}_p{i}" for i in range(3)]
        scene.points.update(zip(names, points))
        scene.tasks.append({"kind": "area", "triangle": names})
    return scene


def cmd_sample(args, out):
    space = parse_space(args.space) if args.space else SpaceParams(1, 1)
    scene = sample_scene(space, args.trials, args.seed)
    out.write(scene.dumps() + "\n")
    return None, EXIT_OK


COMMANDS = {
    "area": cmd_area,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "sphere": cmd_sphere,
    "sample": cmd_sample,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="grasstri",
        description="Symplectic areas of geodesic triangles in complex Grassmannians.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scene", metavar="FILE")
        p.add_argument("--grid", type=int, default=None,
                       help="quadrature grid (area: enables the oracle; default 128, sphere 256)")
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--space", metavar="k,m")
        p.add_argument("--format", choices=["csv", "full"], default="csv")
        p.add_argument("--dump-scene", action="store_true",
                       help="print the parsed scene and exit")
        p.add_argument("--timing", action="store_true", help="add a wall-clock column")
        if name == "area":
            p.add_argument("--triangle", nargs=3, metavar="NAME")
        if name == "classify":
            p.add_argument("--pair", nargs=2, metavar="NAME")
        if name == "verify":
            p.add_argument("--random", action="store_true")
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.dump_scene:
            out.write(load_scene(args).dumps() + "\n")
            return EXIT_OK
        records, code = COMMANDS[args.command](args, out)
    except (InputError, SceneError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GeometryError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    if records is not None:
        emit(records, args.format, args.seed, args.timing, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
