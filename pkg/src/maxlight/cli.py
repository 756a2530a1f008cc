"""Command line interface.

Subcommands: classify, check-js, solve, build, verify, export.  Every
subcommand reads a JSON config (see README for the schema); flags override
config fields.  Exit code 0 on success, otherwise the failing stage's code:

    1 config/usage, 2 classify, 3 js, 4 solve, 5 sample,
    6 extend, 7 periodize, 8 verify, 9 io
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import conformal, tessellate
from .pipeline import PipelineConfig, StageError, run_pipeline, write_outputs

STAGE_CODES = {"classify": 2, "js": 3, "solve": 4, "sample": 5,
               "extend": 6, "periodize": 7, "verify": 8, "io": 9}


def _load_config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_json(args.config)
    if getattr(args, "mode", None):
        cfg.mode = args.mode
    if getattr(args, "radius", None) is not None:
        cfg.radius = args.radius
    if getattr(args, "copies", None) is not None:
        cfg.copies = args.copies
    if getattr(args, "out_dir", None):
        cfg.out_dir = args.out_dir
    if getattr(args, "tol_newton", None) is not None:
        cfg.tol_newton = args.tol_newton
    return cfg


def _emit(payload: dict):
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_classify(args) -> int:
    cfg = _load_config(args)
    cls = tessellate.classify(cfg.polygon)
    _emit({"in_family": cls.in_family, "valency": cls.valency, "n": cls.n,
           "convex": cls.convex, "reason": cls.reason})
    return 0 if cls.in_family else STAGE_CODES["classify"]


def cmd_check_js(args) -> int:
    cfg = _load_config(args)
    report = tessellate.js_check(cfg.polygon, cfg.labels)
    _emit({"passes": report.passes, "alpha": report.alpha, "beta": report.beta,
           "reason": report.reason,
           "violations": [str(v) for v in report.violations],
           "hexagon_criterion": report.hexagon_criterion})
    return 0 if report.passes else STAGE_CODES["js"]


def cmd_solve(args) -> int:
    cfg = _load_config(args)
    polygon = tessellate.assign_heights(cfg.polygon, cfg.labels)
    report = conformal.solve_jumps(polygon.lifted_edges(), tol_newton=cfg.tol_newton)
    _emit({"converged": report.converged, "iterations": report.iterations,
           "residual_norm": report.residual_norm,
           "jump_points": [float(s) for s in report.jump_points],
           "hopf_sup_norm": report.hopf_sup_norm,
           "tol_newton": report.tol_newton})
    return 0 if report.converged else STAGE_CODES["solve"]


def _run(args, write: bool) -> int:
    cfg = _load_config(args)
    try:
        result = run_pipeline(cfg)
    except StageError as e:
        payload = {"error": str(e), "stage": e.stage}
        if e.partial is not None:
            payload["reports"] = e.partial.reports()
        _emit(payload)
        return STAGE_CODES.get(e.stage, 1)
    payload = result.reports()
    if write or cfg.out_dir:
        out_dir = cfg.out_dir or "out"
        try:
            payload["outputs"] = write_outputs(result, out_dir)
        except OSError as e:
            _emit({"error": f"stage 'io' failed: {e}", "stage": "io"})
            return STAGE_CODES["io"]
    _emit(payload)
    return 0


def cmd_build(args) -> int:
    return _run(args, write=True)


def cmd_verify(args) -> int:
    return _run(args, write=False)


def cmd_export(args) -> int:
    args.mode = getattr(args, "mode", None)
    return _run(args, write=True)


def main(argv=None) -> int:
    np.set_printoptions(precision=17)
    parser = argparse.ArgumentParser(
        prog="maxlight",
        description="Maximal surfaces with lightlike boundary segments: "
                    "construction, extension, periodisation, verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **extra_flags):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--mode", choices=("graph-only", "doubly", "triply"))
        p.add_argument("--radius", type=float)
        p.add_argument("--copies", type=int)
        p.add_argument("--out-dir", dest="out_dir")
        p.add_argument("--tol-newton", dest="tol_newton", type=float)
        p.set_defaults(fn=fn)
        return p

    add("classify", cmd_classify)
    add("check-js", cmd_check_js)
    add("solve", cmd_solve)
    add("build", cmd_build)
    add("verify", cmd_verify)
    add("export", cmd_export)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FileNotFoundError as e:
        _emit({"error": str(e)})
        return 1
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        _emit({"error": str(e)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
