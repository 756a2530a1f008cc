"""Triangle meshes of one fundamental sheet, with the boundary annotations
that drive the periodisation: lightlike boundary polylines with their
midpoints, and shrinking-singularity vertices at the polygon corners.

The sheet is meshed over the polygon by concentric rings shrunk toward the
centroid.  Boundary ring vertices lie exactly on the lifted polygon edges
(heights linear along each edge); interior heights come from the graph map.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphmap import GraphMap
from .tessellate import LabeledPolygon

__all__ = ["FLAG_INTERIOR", "FLAG_LIGHTLIKE", "FLAG_SHRINKING",
           "SegmentMarker", "SurfaceMesh", "build_sheet_mesh"]

FLAG_INTERIOR = 0
FLAG_LIGHTLIKE = 1
FLAG_SHRINKING = 2

FLAG_NAMES = {FLAG_INTERIOR: "interior",
              FLAG_LIGHTLIKE: "lightlike-boundary",
              FLAG_SHRINKING: "shrinking-singularity"}


@dataclass(frozen=True)
class SegmentMarker:
    """One lightlike boundary segment: exact endpoints, midpoint, and the
    mesh vertex indices tracing it."""

    edge_index: int
    start: np.ndarray      # lifted vertex (3,)
    end: np.ndarray        # lifted vertex (3,)
    midpoint: np.ndarray   # (start + end) / 2, the reflection center
    vertex_indices: np.ndarray


@dataclass
class SurfaceMesh:
    vertices: np.ndarray              # (N, 3) points of L^3, t last
    faces: np.ndarray                 # (M, 3) vertex indices
    vertex_flags: np.ndarray          # (N,) FLAG_* codes
    segment_markers: list = field(default_factory=list)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.faces = np.asarray(self.faces, dtype=int).reshape(-1, 3)
        self.vertex_flags = np.asarray(self.vertex_flags, dtype=np.uint8)
        if len(self.vertex_flags) != len(self.vertices):
            raise ValueError("one flag per vertex required")
        if self.faces.size and (self.faces.min() < 0 or
                                self.faces.max() >= len(self.vertices)):
            raise ValueError("face index out of range")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def max_edge_length(self) -> float:
        if not self.faces.size:
            return 0.0
        p = self.vertices
        e = 0.0
        for a, b in ((0, 1), (1, 2), (2, 0)):
            e = max(e, float(np.linalg.norm(p[self.faces[:, a]] - p[self.faces[:, b]],
                                            axis=1).max()))
        return e

    def transformed(self, parity: float, shift) -> "SurfaceMesh":
        """Rigid image p -> parity * p + shift (parity +-1)."""
        shift = np.asarray(shift, dtype=float)
        verts = parity * self.vertices + shift
        faces = self.faces if parity > 0 else self.faces[:, ::-1]
        markers = [SegmentMarker(m.edge_index,
                                 parity * m.start + shift,
                                 parity * m.end + shift,
                                 parity * m.midpoint + shift,
                                 m.vertex_indices)
                   for m in self.segment_markers]
        return SurfaceMesh(verts, faces.copy(), self.vertex_flags.copy(), markers)


def build_sheet_mesh(polygon: LabeledPolygon, graph: GraphMap,
                     rings: int = 24, edge_subdiv: int | None = None) -> SurfaceMesh:
    """Mesh the fundamental sheet with annotated boundary.

    ``rings`` concentric polygon rings toward the centroid; each polygon
    edge is split into ``edge_subdiv`` mesh edges (defaults to ``rings``).
    """
    if rings < 2:
        raise ValueError("need at least 2 rings")
    m = rings if edge_subdiv is None else edge_subdiv
    v2 = polygon.vertices
    lifted = polygon.lifted_vertices()
    n = polygon.n
    centroid2 = v2.mean(axis=0)

    # boundary loop: m points per edge, corner first
    boundary = np.empty((n * m, 3))
    for k in range(n):
        t = np.arange(m)[:, None] / m
        boundary[k * m:(k + 1) * m] = (1.0 - t) * lifted[k] + t * lifted[(k + 1) % n]
    n_loop = n * m

    verts = [np.append(centroid2, np.nan)]  # centroid height filled below
    flags = [FLAG_INTERIOR]
    ring_start = []
    for i in range(1, rings + 1):
        f = i / rings
        ring_start.append(len(verts))
        for p in boundary:
            q = np.empty(3)
            q[:2] = centroid2 + f * (p[:2] - centroid2)
            q[2] = p[2] if i == rings else np.nan
            verts.append(q)
            if i == rings:
                flags.append(FLAG_SHRINKING if _is_corner(p[:2], v2)
                             else FLAG_LIGHTLIKE)
            else:
                flags.append(FLAG_INTERIOR)
    verts = np.asarray(verts)
    flags = np.asarray(flags, dtype=np.uint8)

    interior = np.isnan(verts[:, 2])
    verts[interior, 2] = graph.height(verts[interior, :2])

    faces = []
    first = ring_start[0]
    for j in range(n_loop):
        faces.append((0, first + j, first + (j + 1) % n_loop))
    for i in range(len(ring_start) - 1):
        a, b = ring_start[i], ring_start[i + 1]
        for j in range(n_loop):
            j2 = (j + 1) % n_loop
            faces.append((a + j, b + j, b + j2))
            faces.append((a + j, b + j2, a + j2))

    last = ring_start[-1]
    markers = []
    for k in range(n):
        idx = last + (np.arange(k * m, k * m + m + 1) % n_loop)
        markers.append(SegmentMarker(
            edge_index=k,
            start=lifted[k].copy(),
            end=lifted[(k + 1) % n].copy(),
            midpoint=(lifted[k] + lifted[(k + 1) % n]) / 2.0,
            vertex_indices=idx,
        ))
    return SurfaceMesh(verts, np.asarray(faces), flags, markers)


def _is_corner(p2: np.ndarray, corners: np.ndarray) -> bool:
    return bool((np.linalg.norm(corners - p2, axis=1) < 1e-12).any())
