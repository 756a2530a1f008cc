"""Pipeline orchestration: classify -> solvability -> jump solve -> sheet
sampling -> extension charts -> periodisation -> verification, with JSON
reports and OBJ export.

Configs are plain JSON.  Every stage failure is wrapped in ``StageError``
carrying the stage name, which the CLI maps to its exit code.  Given the
same config the pipeline is deterministic: no clocks, no random state,
fixed float formatting on export.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import conformal, extend, tessellate, verify
from .graphmap import GraphMap
from .harmonic import GraphPatch
from .meshing import SurfaceMesh, build_sheet_mesh
from .objio import export_mesh

__all__ = ["PipelineConfig", "StageError", "PipelineResult", "run_pipeline",
           "write_outputs", "STAGES"]

STAGES = ("classify", "js", "solve", "sample", "extend", "periodize", "verify", "io")

MODES = ("graph-only", "doubly", "triply")


class StageError(RuntimeError):
    """Failure of one pipeline stage, carrying whatever ran before it."""

    def __init__(self, stage: str, cause: Exception, partial=None):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.partial = partial


@dataclass
class PipelineConfig:
    polygon: np.ndarray
    labels: tuple
    mode: str = "graph-only"
    grid_resolution: int = 24
    chart_resolution: int = 32
    radius: float | None = None
    copies: int = 1
    tol_newton: float = conformal.TOL_NEWTON
    oracle: str | None = None       # catalog name to check sheet vertices against
    out_dir: str | None = None

    def __post_init__(self):
        self.polygon = np.asarray(self.polygon, dtype=float)
        self.labels = tuple(self.labels)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.grid_resolution < 8 or self.chart_resolution < 8:
            raise ValueError("resolutions must be at least 8")
        if self.mode == "triply" and self.copies < 1:
            raise ValueError("triply periodic mode needs copies >= 1")
        if self.radius is None:
            # wide enough that a two-domain window translated by any lattice
            # generator stays inside the assembled region
            c = self.polygon.mean(axis=0)
            self.radius = 6.0 * float(np.linalg.norm(self.polygon - c, axis=1).max())

    @classmethod
    def from_json(cls, path) -> "PipelineConfig":
        raw = json.loads(Path(path).read_text())
        sampling = raw.pop("sampling", {})
        tolerances = raw.pop("tolerances", {})
        return cls(
            polygon=raw["polygon"],
            labels=raw["labels"],
            mode=raw.get("mode", "graph-only"),
            grid_resolution=int(sampling.get("grid_resolution", 24)),
            chart_resolution=int(sampling.get("chart_resolution", 32)),
            radius=raw.get("radius"),
            copies=int(raw.get("copies", 1)),
            tol_newton=float(tolerances.get("newton", conformal.TOL_NEWTON)),
            oracle=raw.get("oracle"),
            out_dir=raw.get("out_dir"),
        )

    def tolerances(self) -> dict:
        return {"newton": self.tol_newton,
                "causal_lightlike_rel": 1e-9,
                "length_rel": 1e-9,
                "jump_clearance": 1e-12,
                "inversion_rel": 1e-11}


@dataclass
class PipelineResult:
    config: PipelineConfig
    classification: tessellate.PolygonClassification
    js_report: tessellate.JSReport
    solver_report: conformal.SolverReport | None = None
    polygon: tessellate.LabeledPolygon | None = None
    patch: GraphPatch | None = None
    graph: GraphMap | None = None
    mesh: SurfaceMesh | None = None
    charts: list = field(default_factory=list)
    assembly: extend.PeriodicAssembly | None = None
    verification: dict | None = None

    def reports(self) -> dict:
        """JSON-ready summary of every stage that ran."""
        out = {
            "classification": {
                "in_family": self.classification.in_family,
                "valency": self.classification.valency,
                "n": self.classification.n,
                "convex": self.classification.convex,
                "reason": self.classification.reason,
            },
            "js": {
                "passes": self.js_report.passes,
                "alpha": self.js_report.alpha,
                "beta": self.js_report.beta,
                "violations": _jsonable(self.js_report.violations),
                "hexagon_criterion": _jsonable(self.js_report.hexagon_criterion),
                "reason": self.js_report.reason,
            },
            "tolerances": self.config.tolerances(),
        }
        if self.solver_report is not None:
            r = self.solver_report
            out["solver"] = {
                "converged": r.converged,
                "iterations": r.iterations,
                "residual_norm": r.residual_norm,
                "jump_points": [float(s) for s in r.jump_points],
                "hopf_sup_norm": r.hopf_sup_norm,
                "residual_history": [float(h) for h in r.residual_history],
                "tol_newton": r.tol_newton,
            }
        if self.assembly is not None:
            out["lattice"] = {
                "generators": [[float(c) for c in g]
                               for g in self.assembly.lattice.generators],
                "characters": [c.value for c in self.assembly.lattice.characters],
                "n_copies": self.assembly.n_copies,
                "mode": self.assembly.mode,
            }
        if self.verification is not None:
            out["verification"] = _jsonable(self.verification)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run the staged construction; halts at the first failing stage."""
    try:
        classification = tessellate.classify(config.polygon)
        if not classification.in_family:
            raise ValueError(f"polygon not in the tiling family: {classification.reason}")
    except Exception as e:
        raise StageError("classify", e) from e

    try:
        js = tessellate.js_check(config.polygon, config.labels)
    except Exception as e:
        raise StageError("js", e) from e
    result = PipelineResult(config=config, classification=classification, js_report=js)
    if not js.passes:
        raise StageError("js", ValueError(js.reason or "solvability check failed"),
                         partial=result)

    try:
        if not classification.convex:
            raise ValueError("classified, construction unsupported: nonconvex polygon")
        polygon = tessellate.assign_heights(config.polygon, config.labels)
        report = conformal.solve_jumps(polygon.lifted_edges(),
                                       tol_newton=config.tol_newton)
        result.solver_report = report
        result.polygon = polygon
        if not report.converged:
            raise ValueError(f"jump solve did not converge "
                             f"(residual {report.residual_norm:.3e})")
        data = conformal.boundary_data_from_vertices(polygon.lifted_vertices(),
                                                     report.jump_points)
        result.patch = GraphPatch(data)
    except StageError:
        raise
    except Exception as e:
        raise StageError("solve", e, partial=result) from e

    try:
        result.graph = GraphMap(result.patch, polygon.vertices)
        result.mesh = build_sheet_mesh(polygon, result.graph,
                                       rings=config.grid_resolution)
    except Exception as e:
        raise StageError("sample", e, partial=result) from e

    try:
        result.charts = [extend.build_blowup(result.patch, k)
                         for k in range(polygon.n)]
        shrinking = extend.detect_shrinking_endpoints(polygon)
        if len(shrinking) != polygon.n:
            raise ValueError("some polygon vertices are not shrinking singularities")
    except Exception as e:
        raise StageError("extend", e, partial=result) from e

    if config.mode in ("doubly", "triply"):
        try:
            tiling = tessellate.generate_tiling(polygon.vertices, config.radius)
            result.assembly = extend.periodize(result.mesh, tiling, polygon,
                                               mode=config.mode,
                                               copies=config.copies)
        except Exception as e:
            raise StageError("periodize", e, partial=result) from e

    try:
        result.verification = _verification(result)
    except Exception as e:
        raise StageError("verify", e, partial=result) from e
    return result


def _verification(result: PipelineResult) -> dict:
    cfg = result.config
    polygon = result.polygon
    patch = result.patch
    graph = result.graph
    report: dict = {"tolerances": cfg.tolerances()}

    # conformality on two concentric test circles
    for radius in (0.5, 0.25):
        zc = 1j + radius * np.exp(2j * np.pi * np.arange(64) / 64)
        q = conformal.hopf_quadratic(patch, zc)
        report[f"hopf_sup_circle_{radius}"] = float(np.abs(q).max())

    # reflection identity per chart on the configured grid
    r = np.linspace(-1.0, 1.0, cfg.chart_resolution)
    th = np.linspace(0.05 * np.pi, 0.95 * np.pi, cfg.chart_resolution)
    report["reflection_identity"] = [
        extend.reflection_identity_check(chart, r, th) for chart in result.charts
    ]

    # cluster segments at every jump
    report["cluster_max_distance"] = [
        verify.cluster_segment_check(patch, k)[1e-4] for k in range(polygon.n)
    ]

    # tame degeneration along each edge
    signs = [1.0 if lbl == "A" else -1.0 for lbl in polygon.labels]
    fits = [verify.degeneration_fit(graph, polygon, k, signs[k])
            for k in range(polygon.n)]
    report["degeneration_exponents"] = [f.exponent for f in fits]

    # graph equation residual convergence on an inner box around the centroid
    c = polygon.vertices.mean(axis=0)
    r_in = _inradius(polygon.vertices, c)
    half = 0.55 * r_in
    h = 2.0 * half / 40.0
    conv = verify.residual_convergence(
        graph.height_on_grid, c[0] - half, c[0] + half, c[1] - half, c[1] + half, h)
    report["maximal_equation"] = conv

    if cfg.oracle is not None and result.mesh is not None:
        res = verify.implicit_residual(cfg.oracle, result.mesh.vertices)
        report["implicit_oracle"] = {"name": cfg.oracle,
                                     "sheet_max_residual": float(np.abs(res).max())}
        if result.assembly is not None:
            res = verify.implicit_residual(cfg.oracle, result.assembly.mesh.vertices)
            report["implicit_oracle"]["assembly_max_residual"] = float(np.abs(res).max())

    if result.assembly is not None:
        mesh = result.assembly.mesh
        edge = result.mesh.max_edge_length()
        circum = float(np.linalg.norm(polygon.vertices - c, axis=1).max())
        window = 2.0 * circum  # two fundamental domains wide
        middle = result.assembly.vertex_sheets == 0
        devs = [extend.assembly_invariance_deviation(mesh, g, c, window,
                                                     vertex_mask=middle)
                for g in result.assembly.lattice.generators]
        report["lattice_invariance"] = {
            "deviations": devs,
            "bound": 2.0 * edge,
            "passes": bool(all(d < 2.0 * edge for d in devs)),
        }
    return report


def _inradius(vertices: np.ndarray, center: np.ndarray) -> float:
    n = len(vertices)
    best = np.inf
    for k in range(n):
        a, b = vertices[k], vertices[(k + 1) % n]
        ab = b - a
        t = np.clip((center - a) @ ab / (ab @ ab), 0.0, 1.0)
        best = min(best, float(np.linalg.norm(center - (a + t * ab))))
    return best


def write_outputs(result: PipelineResult, out_dir) -> dict:
    """Write reports and meshes; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    reports = result.reports()
    report_path = out / "report.json"
    report_path.write_text(json.dumps(reports, indent=2, sort_keys=True) + "\n")
    paths["report"] = str(report_path)
    if result.mesh is not None:
        paths["sheet"] = str(export_mesh(result.mesh, out / "sheet.obj"))
    if result.assembly is not None:
        paths["assembly"] = str(export_mesh(result.assembly.mesh,
                                            out / f"{result.assembly.mode}.obj",
                                            lattice=result.assembly.lattice))
    return paths
