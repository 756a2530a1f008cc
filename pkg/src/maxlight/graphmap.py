"""Graph view of a solved patch: invert the planar part of the harmonic map
to evaluate the height function over the polygon.

The planar components of the Poisson integral map the upper half-plane
diffeomorphically onto the (convex) polygon interior, so the graph function
is obtained by a damped Newton inversion.  The Jacobian comes from the
holomorphic derivative phi: with zeta = xi + i eta,

    dX/dxi = Im phi,    dX/deta = Re phi.

The Jacobian degenerates toward the boundary arcs (they collapse onto the
polygon vertices), so targets are solved in continuation order, innermost
first, each batch seeded from the nearest already-solved point.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .harmonic import GraphPatch, disk_to_halfplane

__all__ = ["GraphMap"]


def _boundary_distance(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    d = np.full(len(points), np.inf)
    n = len(polygon)
    for k in range(n):
        a, b = polygon[k], polygon[(k + 1) % n]
        ab = b - a
        t = np.clip(((points - a) @ ab) / (ab @ ab), 0.0, 1.0)
        proj = a + t[:, None] * ab
        d = np.minimum(d, np.hypot(*(points - proj).T))
    return d


class GraphMap:
    """Height evaluation for a solved patch over its convex polygon."""

    def __init__(self, patch: GraphPatch, polygon, tol: float | None = None,
                 batch: int = 4096):
        self.patch = patch
        self.polygon = np.asarray(polygon, dtype=float)
        scale = float(np.abs(self.polygon).max())
        self.tol = 1e-11 * max(1.0, scale) if tol is None else tol
        self.batch = batch
        # coarse interior seeds through the disk, away from the circle
        rho = np.linspace(0.0, 0.9, 20)
        ang = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
        w = (rho[:, None] * np.exp(1j * ang)[None, :]).ravel()
        w = w[np.abs(w - 1.0) > 1e-9]
        z = disk_to_halfplane(np.unique(w))
        self._seed_z = z
        self._seed_xy = patch.evaluate(z)[:, :2]

    def _newton(self, targets: np.ndarray, z0: np.ndarray,
                itmax: int = 60) -> tuple[np.ndarray, np.ndarray]:
        z = np.array(z0, dtype=complex)
        F = self.patch.evaluate(z)[:, :2] - targets
        res = np.hypot(F[:, 0], F[:, 1])
        for _ in range(itmax):
            if res.max() < self.tol:
                break
            act = np.flatnonzero(res >= self.tol)
            phi = self.patch.holomorphic_derivative(z[act])
            j11, j12 = phi[:, 0].imag, phi[:, 0].real
            j21, j22 = phi[:, 1].imag, phi[:, 1].real
            det = j11 * j22 - j12 * j21
            fa = F[act]
            step = (-(j22 * fa[:, 0] - j12 * fa[:, 1])
                    - 1j * (-j21 * fa[:, 0] + j11 * fa[:, 1])) / det
            za, ra = z[act], res[act]
            lam = np.ones(len(act))
            znew = za.copy()
            todo = np.ones(len(act), dtype=bool)
            for _ in range(30):
                cand = za + lam * step
                ok = todo & (cand.imag > 1e-13)
                if ok.any():
                    fc = self.patch.evaluate(cand[ok])[:, :2] - targets[act][ok]
                    rc = np.hypot(fc[:, 0], fc[:, 1])
                    sel = np.flatnonzero(ok)[rc < ra[ok]]
                    znew[sel] = cand[sel]
                    todo[sel] = False
                if not todo.any():
                    break
                lam[todo] /= 2.0
            z[act] = znew
            F = self.patch.evaluate(z)[:, :2] - targets
            res = np.hypot(F[:, 0], F[:, 1])
        return z, res

    def preimages(self, targets) -> np.ndarray:
        """Points of H mapping to the given interior planar targets."""
        t = np.asarray(targets, dtype=float)
        squeeze = t.ndim == 1
        t = np.atleast_2d(t)
        order = np.argsort(-_boundary_distance(t, self.polygon))
        zout = np.empty(len(t), dtype=complex)
        seeds_xy, seeds_z = self._seed_xy, self._seed_z
        for start in range(0, len(order), self.batch):
            idx = order[start:start + self.batch]
            _, j = cKDTree(seeds_xy).query(t[idx])
            z, res = self._newton(t[idx], seeds_z[j])
            bad = res >= self.tol
            if bad.any():  # reseed strays from freshly solved neighbours
                good = ~bad
                if good.any():
                    _, j2 = cKDTree(t[idx][good]).query(t[idx][bad])
                    z2, res2 = self._newton(t[idx][bad], z[good][j2])
                    z[bad], res[bad] = z2, res2
            if (res >= self.tol).any():
                worst = float(res.max())
                raise RuntimeError(
                    f"planar inversion failed to converge (residual {worst:.3e}); "
                    "is the target inside the polygon?")
            zout[idx] = z
            seeds_xy = np.vstack([seeds_xy, t[idx]])
            seeds_z = np.concatenate([seeds_z, z])
        return zout[0] if squeeze else zout

    def height(self, targets) -> np.ndarray:
        """Graph function psi at interior planar points."""
        z = self.preimages(targets)
        return self.patch.evaluate(z)[..., 2]

    def height_on_grid(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """psi on the tensor grid (len(y), len(x)), rows indexed by y."""
        gx, gy = np.meshgrid(x, y)
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        return self.height(pts).reshape(gx.shape)
