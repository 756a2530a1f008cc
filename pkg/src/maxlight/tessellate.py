"""Fundamental polygons: classification, solvability conditions, height
assignment and the midpoint-reflection tiling group.

A polygon tiles the plane by repeated point symmetries at its edge midpoints
exactly when ``(n - 2) j = 2n`` admits an integer valency ``j``: triangles
(j=6), arbitrary quadrilaterals (j=4), and hexagons with opposite sides
parallel and of equal length (j=3).

For the lightlike-boundary construction the polygon additionally needs the
solvability inequalities: for every polygonal subdomain P whose vertices are
vertices of the polygon, twice the total length of the future-labelled (A)
edges on its boundary must stay below its perimeter, likewise for the
past-labelled (B) edges, and the two families must have equal total length
overall.  For admissible hexagons the whole system collapses to one
closed-form test per main diagonal, which is cross-checked against the
exhaustive enumeration.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from shapely.geometry import Point, Polygon as ShapelyPolygon
from shapely.ops import unary_union

from .lorentz import CausalCharacter, PointSymmetry, causal_character

__all__ = [
    "PolygonClassification",
    "LabeledPolygon",
    "JSReport",
    "TilingGroup",
    "classify",
    "js_check",
    "assign_heights",
    "generate_tiling",
    "tiling_coverage",
]

LABELS = ("A", "B")


def _edge_vectors(vertices: np.ndarray) -> np.ndarray:
    return np.roll(vertices, -1, axis=0) - vertices


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _is_simple(vertices: np.ndarray) -> bool:
    n = len(vertices)

    def seg_intersect(p1, p2, p3, p4):
        d1 = _cross2(p4 - p3, p1 - p3)
        d2 = _cross2(p4 - p3, p2 - p3)
        d3 = _cross2(p2 - p1, p3 - p1)
        d4 = _cross2(p2 - p1, p4 - p1)
        return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))

    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shared endpoint
            if seg_intersect(vertices[i], vertices[(i + 1) % n],
                             vertices[j], vertices[(j + 1) % n]):
                return False
    return True


def _is_convex(vertices: np.ndarray) -> bool:
    e = _edge_vectors(vertices)
    cross = _cross2(e, np.roll(e, -1, axis=0))
    return bool(np.all(cross > 0.0) or np.all(cross < 0.0))


@dataclass(frozen=True)
class PolygonClassification:
    in_family: bool      # tiles the plane by edge-midpoint symmetries
    valency: int | None  # copies meeting at each vertex, (n-2) j = 2n
    n: int
    convex: bool
    reason: str = ""


def classify(vertices) -> PolygonClassification:
    """Membership and valency for the midpoint-symmetry tiling family."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
        raise ValueError("polygon needs at least 3 planar vertices")
    if not _is_simple(v):
        raise ValueError("self-intersecting polygon")
    n = len(v)
    convex = _is_convex(v)
    if n == 3:
        return PolygonClassification(True, 6, n, convex)
    if n == 4:
        return PolygonClassification(True, 4, n, convex)
    if n == 6:
        e = _edge_vectors(v)
        lengths = np.linalg.norm(e, axis=1)
        eps = 1e-9 * lengths.sum()
        opposite_ok = True
        for i in range(3):
            if np.linalg.norm(e[i] + e[i + 3]) > eps:
                opposite_ok = False
        if opposite_ok:
            return PolygonClassification(True, 3, n, convex)
        return PolygonClassification(False, None, n, convex,
                                     "hexagon without parallel equal opposite sides")
    return PolygonClassification(False, None, n, convex,
                                 f"(n-2)j = 2n has no integer solution for n={n}")


@dataclass(frozen=True)
class JSReport:
    passes: bool
    alpha: float
    beta: float
    violations: tuple
    hexagon_criterion: dict | None = None
    reason: str = ""

    def __post_init__(self):
        if self.passes != (len(self.violations) == 0):
            raise ValueError("inconsistent report: passes must match empty violations")


def _subdomains(n: int):
    """Vertex subsets of size 3..n-1 in cyclic order."""
    for size in range(3, n):
        yield from combinations(range(n), size)


def js_check(vertices, labels) -> JSReport:
    """Solvability report for alternating lightlike boundary labels.

    Failures are reported, never raised: a triangle comes back with the
    total-length mismatch forced by the triangle inequality, and a hexagon
    report carries the closed-form diagonal criterion next to the
    enumeration verdict.
    """
    v = np.asarray(vertices, dtype=float)
    labels = tuple(labels)
    n = len(v)
    if len(labels) != n or any(l not in LABELS for l in labels):
        raise ValueError("labels must be 'A'/'B', one per edge")
    e = _edge_vectors(v)
    lengths = np.linalg.norm(e, axis=1)
    eps = 1e-9 * lengths.sum()
    is_a = np.array([l == "A" for l in labels])
    alpha = float(lengths[is_a].sum())
    beta = float(lengths[~is_a].sum())

    violations = []
    reason = ""
    alternating = all(labels[k] != labels[(k + 1) % n] for k in range(n))
    if not alternating:
        violations.append(("labels", "edge labels do not alternate"))
    if abs(alpha - beta) > eps:
        reason = f"fails alpha_Omega=beta_Omega ({alpha:.6g} != {beta:.6g})"
        violations.append(("closure", reason))

    convex = _is_convex(v)
    fat_poly = None if convex else ShapelyPolygon(v).buffer(eps)
    for subset in _subdomains(n):
        size = len(subset)
        per = a_p = b_p = 0.0
        chords_inside = True
        for t in range(size):
            i, j = subset[t], subset[(t + 1) % size]
            seg = float(np.linalg.norm(v[j] - v[i]))
            per += seg
            if (i + 1) % n == j:
                if is_a[i]:
                    a_p += lengths[i]
                else:
                    b_p += lengths[i]
            elif not convex:
                # chord of a nonconvex polygon may leave it
                if not fat_poly.contains(Point((v[i] + v[j]) / 2.0)):
                    chords_inside = False
        if not chords_inside:
            continue  # not a subdomain
        if not (2.0 * a_p < per + eps and 2.0 * b_p < per + eps):
            violations.append((subset, float(a_p), float(b_p), float(per)))

    hexagon_criterion = None
    if n == 6 and classify(v).in_family:
        per_diag = []
        for i in range(3):
            d = float(np.linalg.norm(v[(i + 3) % 6] - v[i]))
            a, b, c = lengths[i], lengths[(i + 1) % 6], lengths[(i + 2) % 6]
            per_diag.append({"diagonal": d, "bound": float(abs(b - (a + c)))})
        cf_pass = all(t["diagonal"] > t["bound"] for t in per_diag)
        hexagon_criterion = {
            "passes": cf_pass,
            "min_diagonal": min(t["diagonal"] for t in per_diag),
            "tests": per_diag,
        }

    passes = not violations
    if hexagon_criterion is not None and hexagon_criterion["passes"] != passes:
        raise AssertionError(
            "hexagon closed-form criterion disagrees with subdomain enumeration"
        )
    if not passes and not reason:
        reason = "subdomain inequality violated"
    return JSReport(passes=passes, alpha=alpha, beta=beta,
                    violations=tuple(violations),
                    hexagon_criterion=hexagon_criterion,
                    reason=reason if not passes else "")


@dataclass(frozen=True)
class LabeledPolygon:
    """Counterclockwise planar polygon with alternating edge labels and the
    vertex heights that lift every edge to a lightlike segment."""

    vertices: np.ndarray  # (n, 2)
    labels: tuple         # alternating 'A' (future) / 'B' (past)
    heights: np.ndarray   # (n,)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).copy()
        h = np.asarray(self.heights, dtype=float).copy()
        labels = tuple(self.labels)
        n = len(v)
        if n % 2 != 0:
            raise ValueError("need an even number of edges to alternate labels")
        if len(labels) != n or len(h) != n:
            raise ValueError("need one label and one height per vertex")
        if any(labels[k] == labels[(k + 1) % n] for k in range(n)):
            raise ValueError("labels must alternate")
        if _signed_area(v) < 0.0:
            raise ValueError("vertices must be counterclockwise")
        lifted = np.column_stack([v, h])
        for edge in _edge_vectors(lifted):
            if causal_character(edge) is not CausalCharacter.LIGHTLIKE:
                raise ValueError("lifted edge is not lightlike")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "heights", h)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def lifted_vertices(self) -> np.ndarray:
        return np.column_stack([self.vertices, self.heights])

    def lifted_edges(self) -> np.ndarray:
        return _edge_vectors(self.lifted_vertices())

    def edge_midpoints(self) -> np.ndarray:
        lv = self.lifted_vertices()
        return (lv + np.roll(lv, -1, axis=0)) / 2.0

    def convex(self) -> bool:
        return _is_convex(self.vertices)


def assign_heights(vertices, labels) -> LabeledPolygon:
    """Cumulative heights: +edge length across A edges, -length across B.

    Starts at height zero; closure requires the A and B families to have
    equal total length, otherwise raises.
    """
    v = np.asarray(vertices, dtype=float)
    if _signed_area(v) < 0.0:
        v = v[::-1].copy()
        labels = tuple(reversed(labels))
    labels = tuple(labels)
    e = _edge_vectors(v)
    lengths = np.linalg.norm(e, axis=1)
    signs = np.array([1.0 if l == "A" else -1.0 for l in labels])
    increments = signs * lengths
    closure = float(increments.sum())
    if abs(closure) > 1e-9 * lengths.sum():
        raise ValueError(f"non-closing heights (alpha != beta, defect {closure:.3e})")
    heights = np.concatenate([[0.0], np.cumsum(increments[:-1])])
    return LabeledPolygon(vertices=v, labels=labels, heights=heights)


@dataclass(frozen=True)
class TilingGroup:
    """Copies of the fundamental polygon under the midpoint-symmetry group.

    Each copy is the affine map p -> parity * p + shift of the base polygon;
    parities alternate with the number of reflections applied.  The lattice
    collects the translations obtained from opposite-edge midpoint pairs.
    """

    polygon: np.ndarray          # (n, 2) base vertices
    parities: np.ndarray         # (m,) +-1
    shifts: np.ndarray           # (m, 2)
    lattice_planar: np.ndarray   # (2, 2) planar translation generators
    radius: float

    def copy_vertices(self, k: int) -> np.ndarray:
        return self.parities[k] * self.polygon + self.shifts[k]

    @property
    def n_copies(self) -> int:
        return len(self.parities)


def generate_tiling(polygon, radius: float) -> TilingGroup:
    """Breadth-first closure of edge-midpoint symmetries out to a radius.

    Keeps every copy whose centroid lies within ``radius`` of the base
    centroid (plus one ring beyond, so coverage checks have margin).
    """
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    if isinstance(polygon, LabeledPolygon):
        v = polygon.vertices
    else:
        v = np.asarray(polygon, dtype=float)
    cls = classify(v)
    if not cls.in_family:
        raise ValueError(f"polygon does not tile by midpoint symmetries: {cls.reason}")
    n = len(v)
    mids = (v + np.roll(v, -1, axis=0)) / 2.0
    centroid = v.mean(axis=0)
    circum = float(np.linalg.norm(v - centroid, axis=1).max())
    keep = radius + circum  # copies whose centroid can reach the disk
    scale = max(1.0, float(np.abs(v).max()))

    def key(parity, shift):
        return (int(parity), round(shift[0] / scale, 9), round(shift[1] / scale, 9))

    parities = [1.0]
    shifts = [np.zeros(2)]
    seen = {key(1.0, np.zeros(2))}
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            par, sh = parities[idx], shifts[idx]
            for m in mids:
                m_img = par * m + sh
                # reflect copy at its own edge midpoint image
                par2 = -par
                sh2 = 2.0 * m_img - sh
                k = key(par2, sh2)
                if k in seen:
                    continue
                c2 = par2 * centroid + sh2
                if np.linalg.norm(c2 - centroid) > keep:
                    continue
                seen.add(k)
                parities.append(par2)
                shifts.append(sh2)
                nxt.append(len(parities) - 1)
        frontier = nxt

    gens = 2.0 * (mids[n // 2:] - mids[: n // 2])  # opposite-edge midpoint pairs
    order = np.argsort(np.linalg.norm(gens, axis=1))
    g1 = gens[order[0]]
    g2 = None
    for j in order[1:]:
        if abs(_cross2(g1, gens[j])) > 1e-12 * (np.linalg.norm(g1) ** 2 + 1.0):
            g2 = gens[j]
            break
    if g2 is None:
        raise ValueError("degenerate tiling: translations are collinear")
    return TilingGroup(polygon=v.copy(), parities=np.asarray(parities),
                       shifts=np.asarray(shifts),
                       lattice_planar=np.vstack([g1, g2]), radius=float(radius))


def tiling_coverage(tiling: TilingGroup, radius: float | None = None) -> dict:
    """Area bookkeeping: the copies must cover the disk with no overlap.

    Returns the relative overlap (sum of copy areas minus union area) and
    the relative gap (disk area not covered by the union).
    """
    radius = tiling.radius if radius is None else radius
    copies = [ShapelyPolygon(tiling.copy_vertices(k)) for k in range(tiling.n_copies)]
    union = unary_union(copies)
    total = sum(c.area for c in copies)
    overlap = (total - union.area) / total
    centroid = tiling.polygon.mean(axis=0)
    disk = Point(centroid).buffer(radius, quad_segs=256)
    gap = disk.difference(union).area / disk.area
    return {"overlap_rel": float(overlap), "gap_rel": float(gap),
            "n_copies": tiling.n_copies, "union_area": float(union.area)}


def lifted_tiling_transforms(polygon: LabeledPolygon, radius: float):
    """3D rigid motions (parity, shift) matching the planar tiling BFS.

    Reflections act on lifted edge midpoints, so each planar copy acquires a
    well-defined height offset; a planar copy reached along two paths must
    agree on it (height closure), which is asserted.
    """
    if not polygon.convex():
        warnings.warn("nonconvex polygon: tiling is generated but construction "
                      "of the graph is unsupported", stacklevel=2)
    mids = polygon.edge_midpoints()
    v = polygon.vertices
    centroid = v.mean(axis=0)
    circum = float(np.linalg.norm(v - centroid, axis=1).max())
    keep = radius + circum
    scale = max(1.0, float(np.abs(v).max()))

    def key(parity, shift):
        return (int(parity), round(shift[0] / scale, 9), round(shift[1] / scale, 9))

    parities = [1.0]
    shifts = [np.zeros(3)]
    seen = {key(1.0, np.zeros(3)): 0}
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            par, sh = parities[idx], shifts[idx]
            for m in mids:
                m_img = par * m + sh
                par2 = -par
                sh2 = 2.0 * m_img - sh
                k = key(par2, sh2)
                if k in seen:
                    prev = shifts[seen[k]]
                    if abs(prev[2] - sh2[2]) > 1e-9 * max(1.0, abs(sh2[2])):
                        raise AssertionError("height closure violated in tiling")
                    continue
                c2 = par2 * centroid + sh2[:2]
                if np.linalg.norm(c2 - centroid) > keep:
                    continue
                seen[k] = len(parities)
                parities.append(par2)
                shifts.append(sh2)
                nxt.append(len(parities) - 1)
        frontier = nxt
    return np.asarray(parities), np.asarray(shifts)
