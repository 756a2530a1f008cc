"""maxlight: maximal surfaces in Lorentz-Minkowski 3-space with lightlike
boundary segments.

Modules
-------
lorentz     Minkowski products, causal characters, point symmetries, lattices
harmonic    branch-managed arguments, harmonic measures, step-data Poisson maps
conformal   jump-point solver making the parametrisation isothermal
tessellate  polygon classification, solvability checks, midpoint tilings
graphmap    height function of a solved patch over its polygon
meshing     annotated triangle meshes of one fundamental sheet
extend      blow-up extension charts, shrinking endpoints, periodisation
verify      implicit-surface catalog and numerical verification oracles
pipeline    staged orchestration with JSON reports
objio       OBJ export/import with annotation sidecar
"""

from .conformal import (SolverReport, boundary_data_from_vertices,
                        hopf_quadratic, solve_jumps)
from .extend import (BlowupChart, PeriodicAssembly, build_blowup,
                     detect_shrinking_endpoints, periodize,
                     reflection_identity_check)
from .graphmap import GraphMap
from .harmonic import (GraphPatch, StepBoundaryData, arg_branch, eval_patch,
                       harmonic_measure, holo_derivative, mobius_to_disk,
                       disk_to_halfplane)
from .lorentz import (CausalCharacter, PeriodLattice, PointSymmetry,
                      causal_character, compose_symmetries, minkowski, reflect)
from .meshing import SurfaceMesh, build_sheet_mesh
from .objio import export_mesh, import_mesh
from .pipeline import PipelineConfig, PipelineResult, run_pipeline, write_outputs
from .tessellate import (JSReport, LabeledPolygon, TilingGroup, assign_heights,
                         classify, generate_tiling, js_check, tiling_coverage)
from .verify import (CATALOG, degeneration_fit, implicit_residual,
                     maximal_equation_residual, residual_convergence,
                     cluster_segment_check, scherk_height)

__version__ = "0.1.0"
