"""Reflection across boundary lightlike segments: blow-up charts, shrinking
endpoint detection, and periodisation of the fundamental sheet.

A jump point whose two adjacent boundary arcs are constant (values ``a`` and
``b``) represents a lightlike segment from ``a`` to ``b`` whose endpoints
are shrinking singularities.  After translating the jump to the origin, the
map factors through polar coordinates ``zeta = r e^{i theta}`` as

    X(zeta) = a + b + (a - b) theta / pi
              + (b/pi) Arg(tau - zeta) - (a/pi) Arg+(sigma - zeta)
              + P_W(zeta),

where ``(sigma, tau)`` is a window inside the two constant arcs and ``P_W``
is the Poisson integral of the remaining boundary data, which vanishes on
the window and extends oddly: P_W(conj zeta) = -P_W(zeta).  Every term on
the right is real analytic on the strip r in R, theta in (0, pi), so the
chart evaluates across r = 0 and satisfies the point-symmetry identity

    X(-r, pi - theta) + X(r, theta) = a + b.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .harmonic import GraphPatch, harmonic_measure, plus_arg, principal_arg
from .lorentz import CausalCharacter, PeriodLattice, causal_character
from .meshing import FLAG_SHRINKING, SurfaceMesh
from .tessellate import LabeledPolygon, TilingGroup, lifted_tiling_transforms

__all__ = [
    "BlowupChart",
    "ShrinkingEndpointEvidence",
    "PeriodicAssembly",
    "build_blowup",
    "reflection_identity_check",
    "detect_shrinking_endpoints",
    "periodize",
    "assembly_invariance_deviation",
]


@dataclass
class BlowupChart:
    """Evaluable extension chart at one jump point of a patch."""

    patch: GraphPatch
    jump_index: int
    a: np.ndarray          # value on the left arc
    b: np.ndarray          # value on the right arc
    sigma: float           # window start, < 0 (relative to the jump)
    tau: float             # window end, > 0
    s0: float              # the jump point in the original coordinates
    _remainder_parity: float = -1.0  # odd extension; +1 only as a negative control

    def remainder(self, zeta) -> np.ndarray:
        """P_W: the Poisson integral of the data outside the window.

        Closed form via harmonic measures; extended across the window by
        P_W(conj zeta) = -P_W(zeta) and by zero on the window itself.
        """
        z = np.atleast_1d(np.asarray(zeta, dtype=complex))
        # P_W is continuous through the window with P_W(0) = 0: snap the
        # rounding fuzz of r ~ 0 grid values onto the axis value
        z = np.where(np.abs(z) < 1e-12, 0.0, z)
        out = np.zeros(z.shape + (3,))
        upper = z.imag > 0.0
        lower = z.imag < 0.0
        for sel, pt, sign in ((upper, z[upper], 1.0),
                              (lower, np.conj(z[lower]), self._remainder_parity)):
            if not pt.size:
                continue
            full = self.patch.evaluate(pt + self.s0)
            win = (self.a * harmonic_measure(pt, self.sigma, 0.0)[:, None]
                   + self.b * harmonic_measure(pt, 0.0, self.tau)[:, None])
            out[sel] = sign * (full - win)
        # on the real axis the window is reached only at r = 0, where P_W = 0
        on_axis = ~(upper | lower)
        if np.any(np.abs(z[on_axis]) != 0.0):
            raise ValueError("chart evaluation on the real axis away from r=0")
        return out

    def evaluate(self, r, theta) -> np.ndarray:
        """X on the strip: r real (both signs), theta in (0, pi)."""
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        if np.any((theta <= 0.0) | (theta >= np.pi)):
            raise ValueError("theta must lie in (0, pi)")
        r, theta = np.broadcast_arrays(r, theta)
        z = r * np.exp(1j * theta)
        lead = (self.a + self.b
                + np.multiply.outer(theta / np.pi, self.a - self.b))
        t4 = np.multiply.outer(principal_arg(self.tau - z) / np.pi, self.b)
        t5 = np.multiply.outer(plus_arg(self.sigma - z) / np.pi, self.a)
        pw = self.remainder(z.ravel()).reshape(z.shape + (3,))
        return lead + t4 - t5 + pw

    def segment_point(self, theta) -> np.ndarray:
        """Dividing point of the segment at r = 0: a theta/pi + b (1 - theta/pi)."""
        theta = np.asarray(theta, dtype=float)
        return (np.multiply.outer(theta / np.pi, self.a)
                + np.multiply.outer(1.0 - theta / np.pi, self.b))


def build_blowup(patch: GraphPatch, jump_index: int,
                 window: tuple[float, float] | None = None) -> BlowupChart:
    """Chart at jump k of the patch.

    The adjacent arcs must be constant (they are, for step data) with
    distinct values; the default window is the full pair of adjacent arcs,
    with the side touching the unbounded arc capped at the jump span.
    """
    s = patch.jumps
    u = patch.values
    n = len(s)
    k = jump_index % n
    a = u[(k - 1) % n]
    b = u[k]
    if np.array_equal(a, b):
        raise ValueError("not a shrinking-singularity configuration: equal arc values")
    span = float(s[-1] - s[0])
    sigma = (s[k - 1] - s[k]) if k >= 1 else -span
    tau = (s[k + 1] - s[k]) if k + 1 < n else span
    if window is not None:
        wl, wr = window
        if not (wl < 0.0 < wr):
            raise ValueError("window must straddle 0")
        if wl < sigma or wr > tau:
            raise ValueError("not a shrinking-singularity configuration: "
                             "window exceeds the constant arcs")
        sigma, tau = wl, wr
    return BlowupChart(patch=patch, jump_index=k, a=a.copy(), b=b.copy(),
                       sigma=float(sigma), tau=float(tau), s0=float(s[k]))


def reflection_identity_check(chart: BlowupChart, r: np.ndarray,
                              theta: np.ndarray) -> float:
    """sup | X(-r, pi - theta) + X(r, theta) - (a + b) | over the grid."""
    rr, tt = np.meshgrid(np.asarray(r, float), np.asarray(theta, float))
    left = chart.evaluate(-rr, np.pi - tt)
    right = chart.evaluate(rr, tt)
    dev = left + right - (chart.a + chart.b)
    return float(np.abs(dev).max())


@dataclass(frozen=True)
class ShrinkingEndpointEvidence:
    kind: str                    # "two-lightlike-corner" or "slit"
    vertex_index: int
    endpoint: np.ndarray         # the lifted common endpoint
    segments: tuple              # the two adjacent lifted segment vectors


def detect_shrinking_endpoints(polygon,
                               slits: tuple[int, ...] = ()) -> list[ShrinkingEndpointEvidence]:
    """Mark polygon vertices where two lifted lightlike edges meet non-collinearly.

    A vertex whose adjacent lifted edges are collinear is excluded (their
    union is a straight segment).  Vertices listed in ``slits`` are tagged
    with the slit variant of the evidence instead.  Accepts a labelled
    polygon or a raw (n, 3) cycle of lifted vertices.
    """
    if isinstance(polygon, LabeledPolygon):
        lifted = polygon.lifted_vertices()
    else:
        lifted = np.asarray(polygon, dtype=float)
    edges = np.roll(lifted, -1, axis=0) - lifted
    n = len(lifted)
    scale = float(np.linalg.norm(edges, axis=1).max())
    out = []
    for k in range(n):
        prev_edge = edges[(k - 1) % n]
        next_edge = edges[k]
        cross = np.cross(prev_edge, next_edge)
        if np.linalg.norm(cross) <= 1e-9 * scale ** 2:
            continue  # straight line: hypothesis fails
        out.append(ShrinkingEndpointEvidence(
            kind="slit" if k in slits else "two-lightlike-corner",
            vertex_index=k,
            endpoint=lifted[k].copy(),
            segments=(prev_edge.copy(), next_edge.copy()),
        ))
    return out


@dataclass
class PeriodicAssembly:
    """Copies of the base sheet under the lifted symmetry group.

    ``transforms`` lists (parity, shift, sheet) triples: the rigid motion
    p -> parity p + shift, with ``sheet`` the index along the lightlike
    translation (always 0 in the doubly periodic mode).
    """

    base: SurfaceMesh
    mode: str
    transforms: list
    lattice: PeriodLattice
    mesh: SurfaceMesh = field(init=False)
    vertex_sheets: np.ndarray = field(init=False)

    def __post_init__(self):
        verts, faces, flags, sheets = [], [], [], []
        offset = 0
        for parity, shift, sheet in self.transforms:
            copy = self.base.transformed(parity, shift)
            verts.append(copy.vertices)
            faces.append(copy.faces + offset)
            flags.append(copy.vertex_flags)
            sheets.append(np.full(copy.n_vertices, sheet, dtype=int))
            offset += copy.n_vertices
        self.mesh = SurfaceMesh(np.vstack(verts), np.vstack(faces),
                                np.concatenate(flags), [])
        self.vertex_sheets = np.concatenate(sheets)

    @property
    def n_copies(self) -> int:
        return len(self.transforms)


def _lifted_lattice(base: SurfaceMesh) -> np.ndarray:
    """Two spacelike generators from opposite-edge midpoint compositions."""
    markers = base.segment_markers
    n = len(markers)
    gens = [2.0 * (markers[(k + n // 2) % n].midpoint - markers[k].midpoint)
            for k in range(n // 2)]
    gens.sort(key=lambda g: float(np.linalg.norm(g)))
    g1 = gens[0]
    scale = max(1.0, float(np.linalg.norm(g1)) ** 2)
    for g in gens[1:]:
        if abs(g1[0] * g[1] - g1[1] * g[0]) > 1e-12 * scale:
            return np.vstack([g1, g])
    raise ValueError("missing markers: opposite midpoints give no planar lattice")


def periodize(base: SurfaceMesh, tiling: TilingGroup, polygon: LabeledPolygon,
              mode: str = "doubly", copies: int = 1) -> PeriodicAssembly:
    """Assemble the doubly periodic graph, optionally stacked into the
    triply periodic surface.

    Doubly: the base sheet is reflected through the lifted midpoints of the
    lightlike boundary segments, following the planar tiling group.  Triply:
    point symmetries at the shrinking singularities compose with the
    midpoint symmetries into the lightlike translation 2(v - c), so the
    sheets are the lightlike translates of the doubly periodic assembly;
    ``copies`` bounds the sheet index.
    """
    if mode not in ("doubly", "triply"):
        raise ValueError(f"unknown periodisation mode {mode!r}")
    if not base.segment_markers:
        raise ValueError("missing markers: base mesh has no lightlike segment markers")
    parities, shifts = lifted_tiling_transforms(polygon, tiling.radius)
    transforms = [(float(p), s, 0) for p, s in zip(parities, shifts)]
    gens = _lifted_lattice(base)

    if mode == "doubly":
        lattice = PeriodLattice(gens)
        return PeriodicAssembly(base=base, mode=mode, transforms=transforms,
                                lattice=lattice)

    if not (base.vertex_flags == FLAG_SHRINKING).any():
        raise ValueError("missing markers: no shrinking-singularity vertices")
    marker = base.segment_markers[0]
    vertex = marker.start  # adjacent shrinking singularity of the first segment
    light = 2.0 * (vertex - marker.midpoint)
    if causal_character(light) is not CausalCharacter.LIGHTLIKE:
        raise AssertionError("sheet translation is not lightlike")
    stacked = []
    for j in range(-copies, copies + 1):
        for p, s, _ in transforms:
            stacked.append((p, s + j * light, j))
    lattice = PeriodLattice(np.vstack([gens, light]))
    return PeriodicAssembly(base=base, mode=mode, transforms=stacked,
                            lattice=lattice)


def assembly_invariance_deviation(mesh: SurfaceMesh, translation,
                                  window_center, window_radius: float,
                                  vertex_mask=None) -> float:
    """Windowed Hausdorff-style deviation of the mesh from its translate.

    Vertices within the planar window are translated by +-translation and
    matched against the full vertex set; the worst nearest-neighbour
    distance is returned.  The window (optionally pre-restricted by
    ``vertex_mask``, e.g. to the middle sheet of a truncated stack) must sit
    well inside the assembled region for the number to mean anything.
    """
    t = np.asarray(translation, dtype=float)
    c = np.asarray(window_center, dtype=float)
    v = mesh.vertices
    tree = cKDTree(v)
    inside = np.hypot(v[:, 0] - c[0], v[:, 1] - c[1]) <= window_radius
    if vertex_mask is not None:
        inside &= np.asarray(vertex_mask, dtype=bool)
    if not inside.any():
        raise ValueError("window contains no mesh vertices")
    worst = 0.0
    for sign in (+1.0, -1.0):
        d, _ = tree.query(v[inside] + sign * t)
        worst = max(worst, float(d.max()))
    return worst
