"""Numerical verification: implicit-surface catalog, residual of the maximal
graph equation, tame-degeneration rate fits, and cluster-set diagnostics.

Everything here is an oracle or a check, independent of the construction
path it scrutinises: the catalog surfaces are closed-form zero sets, the
graph equation residual uses plain central differences, and the degeneration
exponent is a least-squares fit in log-log coordinates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .graphmap import GraphMap
from .harmonic import GraphPatch

__all__ = [
    "ImplicitSurface",
    "CATALOG",
    "implicit_residual",
    "catalog_line_points",
    "NotSpacelikeError",
    "maximal_equation_residual",
    "residual_convergence",
    "DegenerationFit",
    "degeneration_fit",
    "cluster_segment_check",
    "scherk_height",
]


@dataclass(frozen=True)
class ImplicitSurface:
    name: str
    func: callable                  # F(x, y, t), vanishing on the surface
    sample_points: tuple            # published points with F = 0
    lightlike_lines: tuple          # (point, direction, param_range) triples


def _s1(x, y, t):
    return 2.0 * (-x + t) * np.sin(t) - (x * x + y * y - 2.0 * x * t + t * t) * np.cos(t)


def _s2(x, y, t):
    return np.cos(t) * np.cosh(y) + np.cos(x)


def _s3(x, y, t):
    return np.cos(t) - np.cos(x) * np.cos(y)


def _hcat(x, y, t):
    return np.sin(x) ** 2 + y * y - t * t


def _pcat(x, y, t):
    return 12.0 * (x * x - t * t) - (x + t) ** 4 + 12.0 * y * y


CATALOG = {
    "S1": ImplicitSurface(
        "S1", _s1,
        sample_points=((0.0, 0.0, 0.0),
                       (np.pi / 2, 2.0, np.pi / 2),
                       (1.0, 0.0, 1.0)),
        lightlike_lines=(((0.0, 0.0, 0.0), (1.0, 0.0, 1.0), (-3.0, 3.0)),),
    ),
    "S2": ImplicitSurface(
        "S2", _s2,
        sample_points=((0.0, 0.0, np.pi),
                       (np.pi, 0.0, 0.0),
                       (np.pi / 2, 1.0, np.pi / 2)),
        lightlike_lines=(((0.0, 0.0, np.pi), (1.0, 0.0, 1.0), (-3.0, 3.0)),),
    ),
    "S3": ImplicitSurface(
        "S3", _s3,
        sample_points=((np.pi / 2, np.pi / 2, np.pi / 2),
                       (0.0, 0.0, 0.0),
                       (np.pi, np.pi, 0.0)),
        lightlike_lines=(((0.0, 0.0, 0.0), (1.0, 0.0, 1.0), (-3.0, 3.0)),
                         ((0.0, np.pi, np.pi), (1.0, 0.0, -1.0), (-3.0, 3.0))),
    ),
    "H": ImplicitSurface(
        "H", _hcat,
        sample_points=((np.pi / 2, 0.0, 1.0),
                       (0.0, 1.0, 1.0),
                       (np.pi / 2, 0.6, np.sqrt(34.0) / 5.0)),
        lightlike_lines=(((0.0, 0.0, 0.0), (0.0, 1.0, 1.0), (-3.0, 3.0)),),
    ),
    "P": ImplicitSurface(
        "P", _pcat,
        sample_points=((0.0, 0.0, 0.0),
                       (0.0, np.sqrt(13.0 / 12.0), 1.0),
                       (4.0, 4.0 / np.sqrt(3.0), 0.0)),
        lightlike_lines=(((0.0, 0.0, 0.0), (1.0, 0.0, -1.0), (-3.0, 3.0)),),
    ),
}


def implicit_residual(name: str, p) -> float | np.ndarray:
    """F(p) for the named catalog surface."""
    if name not in CATALOG:
        raise KeyError(f"unknown name {name!r}; catalog has {sorted(CATALOG)}")
    p = np.asarray(p, dtype=float)
    return CATALOG[name].func(p[..., 0], p[..., 1], p[..., 2])


def catalog_line_points(name: str, n: int = 100) -> list[np.ndarray]:
    """n sample points on each published lightlike line of the surface."""
    surf = CATALOG[name]
    out = []
    for base, direction, (lo, hi) in surf.lightlike_lines:
        t = np.linspace(lo, hi, n)
        out.append(np.asarray(base) + t[:, None] * np.asarray(direction))
    return out


class NotSpacelikeError(ValueError):
    pass


def maximal_equation_residual(psi: np.ndarray, h: float) -> tuple[float, float]:
    """Central-difference residual of the maximal graph equation.

    Applies (1 - psi_y^2) psi_xx + 2 psi_x psi_y psi_xy + (1 - psi_x^2)
    psi_yy on the interior nodes of a square grid with spacing ``h``;
    returns (sup residual, sup |grad psi|^2).  Raises if the sampled
    gradient reaches the lightlike bound.
    """
    psi = np.asarray(psi, dtype=float)
    if psi.ndim != 2 or min(psi.shape) < 3:
        raise ValueError("need a 2-d grid with at least 3 nodes per side")
    px = (psi[1:-1, 2:] - psi[1:-1, :-2]) / (2.0 * h)
    py = (psi[2:, 1:-1] - psi[:-2, 1:-1]) / (2.0 * h)
    grad2 = px ** 2 + py ** 2
    if grad2.max() >= 1.0:
        raise NotSpacelikeError("not spacelike: |grad psi| >= 1 at an interior sample")
    pxx = (psi[1:-1, 2:] - 2.0 * psi[1:-1, 1:-1] + psi[1:-1, :-2]) / h ** 2
    pyy = (psi[2:, 1:-1] - 2.0 * psi[1:-1, 1:-1] + psi[:-2, 1:-1]) / h ** 2
    pxy = (psi[2:, 2:] - psi[2:, :-2] - psi[:-2, 2:] + psi[:-2, :-2]) / (4.0 * h ** 2)
    res = (1.0 - py ** 2) * pxx + 2.0 * px * py * pxy + (1.0 - px ** 2) * pyy
    return float(np.abs(res).max()), float(grad2.max())


def residual_convergence(height_fn, x0: float, x1: float, y0: float, y1: float,
                         h: float, n: int | None = None) -> dict:
    """Two-grid Richardson comparison of the graph equation residual.

    Evaluates the height function on a grid of spacing ``h`` and on its
    half-spacing refinement, and compares residual magnitudes at the shared
    interior nodes; second-order convergence gives a ratio near 4.
    """
    if n is None:
        n = int(np.floor((x1 - x0) / h)) + 1
    xc = x0 + h * np.arange(n)
    yc = y0 + h * np.arange(n)
    xf = x0 + (h / 2.0) * np.arange(2 * n - 1)
    yf = y0 + (h / 2.0) * np.arange(2 * n - 1)

    def residual_grid(psi, step):
        px = (psi[1:-1, 2:] - psi[1:-1, :-2]) / (2 * step)
        py = (psi[2:, 1:-1] - psi[:-2, 1:-1]) / (2 * step)
        pxx = (psi[1:-1, 2:] - 2 * psi[1:-1, 1:-1] + psi[1:-1, :-2]) / step ** 2
        pyy = (psi[2:, 1:-1] - 2 * psi[1:-1, 1:-1] + psi[:-2, 1:-1]) / step ** 2
        pxy = (psi[2:, 2:] - psi[2:, :-2] - psi[:-2, 2:] + psi[:-2, :-2]) / (4 * step ** 2)
        return (1 - py ** 2) * pxx + 2 * px * py * pxy + (1 - px ** 2) * pyy

    psi_c = height_fn(xc, yc)
    psi_f = height_fn(xf, yf)
    sup_c, grad_c = maximal_equation_residual(psi_c, h)
    sup_f, grad_f = maximal_equation_residual(psi_f, h / 2.0)
    rc = residual_grid(psi_c, h)
    rf = residual_grid(psi_f, h / 2.0)[1::2, 1::2]  # fine residual at coarse nodes
    ratio = float(np.abs(rc).max() / np.abs(rf).max())
    return {"h": h, "sup_coarse": sup_c, "sup_fine": sup_f,
            "sup_fine_at_coarse_nodes": float(np.abs(rf).max()),
            "ratio": ratio, "sup_grad_sq": max(grad_c, grad_f)}


@dataclass(frozen=True)
class DegenerationFit:
    edge_index: int
    direction_sign: float     # +1 future (A), -1 past (B)
    exponent: float
    constant: float
    n_samples: int
    distances: np.ndarray
    deviations: np.ndarray    # |dpsi/dtau - sign| at the sample distances


def degeneration_fit(graph: GraphMap, polygon, edge_index: int,
                     direction_sign: float, distances=None,
                     tangent_step: float = 1e-3) -> DegenerationFit:
    """Fit the boundary degeneration rate of the tangential derivative.

    Samples approach the edge midpoint along the inward normal; at each
    distance the tangential derivative of the height is formed by a central
    difference and log |dpsi/dtau - sign| is regressed on log distance.
    Samples below the numerical noise floor are dropped with a warning.
    """
    if isinstance(polygon, np.ndarray):
        verts = polygon
    else:
        verts = polygon.vertices
    n = len(verts)
    a2, b2 = verts[edge_index], verts[(edge_index + 1) % n]
    length = float(np.linalg.norm(b2 - a2))
    tangent = (b2 - a2) / length
    normal = np.array([-tangent[1], tangent[0]])  # inward for a ccw polygon
    mid = (a2 + b2) / 2.0
    if distances is None:
        distances = np.logspace(np.log10(0.004 * length), np.log10(0.4 * length), 10)
    distances = np.asarray(distances, dtype=float)
    if len(distances) < 8 or distances.max() / distances.min() < 99.0:
        raise ValueError("need >= 8 sample distances spanning two decades")

    pts = mid + distances[:, None] * normal
    h = tangent_step * length
    fwd = graph.height(pts + h * tangent)
    bwd = graph.height(pts - h * tangent)
    dpsi = (fwd - bwd) / (2.0 * h)
    dev = np.abs(dpsi - direction_sign)

    floor = 1e-9
    keep = dev > floor
    if not keep.all():
        warnings.warn(f"dropped {int((~keep).sum())} degeneration samples at the "
                      "noise floor", stacklevel=2)
    if keep.sum() < 3:
        raise ValueError("too few usable samples above the noise floor")
    slope, intercept = np.polyfit(np.log(distances[keep]), np.log(dev[keep]), 1)
    return DegenerationFit(edge_index=edge_index, direction_sign=direction_sign,
                           exponent=float(slope), constant=float(np.exp(intercept)),
                           n_samples=int(keep.sum()), distances=distances,
                           deviations=dev)


def cluster_segment_check(patch: GraphPatch, jump_index: int,
                          radii=(1e-2, 1e-3, 1e-4), samples: int = 64) -> dict:
    """Max distance from the image of shrinking half-circles to the segment.

    The boundary values adjacent to the jump span a segment [a, b]; the
    image of the half-circle |zeta - s_k| = rho must approach it as rho
    shrinks.  Distances are Euclidean in the ambient coordinates.
    """
    s = patch.jumps
    u = patch.values
    n = len(s)
    k = jump_index % n
    a, b = u[(k - 1) % n], u[k]
    theta = np.linspace(0.05 * np.pi, 0.95 * np.pi, samples)
    out = {}
    ab = b - a
    ab2 = float(ab @ ab)
    for rho in radii:
        z = s[k] + rho * np.exp(1j * theta)
        x = patch.evaluate(z)
        t = np.clip(((x - a) @ ab) / ab2, 0.0, 1.0)
        proj = a + t[:, None] * ab
        out[float(rho)] = float(np.linalg.norm(x - proj, axis=1).max())
    return out


def scherk_height(x, y):
    """Closed form of the square-tile graph: arccos(cos x cos y) on (0, pi)^2.

    Derived from the catalog surface S3 by solving cos t = cos x cos y on
    the height branch t in (0, pi); used as the load-bearing oracle for the
    side-pi square construction.
    """
    return np.arccos(np.clip(np.cos(x) * np.cos(y), -1.0, 1.0))
