"""Conformality solver: place the jump points so that the Poisson integral of
step boundary data is an isothermal parametrisation of a maximal graph.

With lightlike jumps ``delta_k`` at points ``s_k``, the Hopf-type quadratic

    Q(zeta) = phi_1^2 + phi_2^2 - phi_3^2,
    phi(zeta) = (1/pi) sum_k delta_k / (s_k - zeta),

is a rational function with at worst double poles at the ``s_k``.  The
double-pole coefficients are the self-products <delta_k, delta_k>, which
vanish because the jumps are lightlike, so Q has only simple poles and
vanishes at infinity.  Hence Q is identically zero exactly when every
residue vanishes, i.e.

    R_k = sum_{l != k} <delta_k, delta_l> / (s_k - s_l) = 0   for all k.

Three of these equations are automatic for any configuration (antisymmetry
of the summand, cyclic closure of the jumps, lightlike diagonals), matching
the three-parameter Moebius freedom of the half-plane.

The Newton iteration itself runs in disk coordinates: writing
``s_k = -cot(theta_k / 2)`` for angles on the unit circle, the residue
system becomes

    Rt_k = sum_{l != k} <delta_k, delta_l> * cot((theta_k - theta_l)/2) = 0,

with the first three angles pinned (gauge) and the rest unknown.  The
compact circle keeps every admissible configuration at finite coordinates;
fixing three points of the *real line* instead can push the remaining jump
of a symmetric polygon to infinity (the square does exactly this), so the
half-plane gauge is applied only after solving, by rotating the circle so
that infinity falls at the midpoint of the unbounded arc.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .harmonic import GraphPatch, StepBoundaryData
from .lorentz import CausalCharacter, causal_character, minkowski

__all__ = [
    "ConformalitySystem",
    "SolverReport",
    "hopf_quadratic",
    "solve_jumps",
    "halfplane_residuals",
    "circle_residuals",
    "angles_to_jumps",
    "jumps_to_angles",
    "boundary_data_from_vertices",
    "apply_real_mobius",
    "enumerate_solutions",
]

TOL_NEWTON = 1e-11
MAX_ITER = 100
MAX_HALVINGS = 20


def _gram(deltas: np.ndarray) -> np.ndarray:
    return minkowski(deltas[:, None, :], deltas[None, :, :])


def halfplane_residuals(jumps: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """R_k = sum_{l != k} <delta_k, delta_l> / (s_k - s_l)."""
    s = np.asarray(jumps, dtype=float)
    g = _gram(np.asarray(deltas, dtype=float))
    ds = s[:, None] - s[None, :]
    off = ~np.eye(len(s), dtype=bool)
    w = np.zeros_like(ds)
    w[off] = 1.0 / ds[off]
    return (g * w).sum(axis=1)


def circle_residuals(angles: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """Rt_k = sum_{l != k} gram_kl cot((theta_k - theta_l)/2)."""
    th = np.asarray(angles, dtype=float)
    dth = th[:, None] - th[None, :]
    off = ~np.eye(len(th), dtype=bool)
    c = np.zeros_like(dth)
    c[off] = 1.0 / np.tan(dth[off] / 2.0)
    return (gram * c).sum(axis=1)


def _circle_jacobian(angles: np.ndarray, gram: np.ndarray) -> np.ndarray:
    th = np.asarray(angles, dtype=float)
    dth = th[:, None] - th[None, :]
    off = ~np.eye(len(th), dtype=bool)
    s2 = np.zeros_like(dth)
    s2[off] = 1.0 / np.sin(dth[off] / 2.0) ** 2
    jac = 0.5 * gram * s2
    np.fill_diagonal(jac, -0.5 * (gram * s2).sum(axis=1))
    return jac


def angles_to_jumps(angles: np.ndarray) -> np.ndarray:
    """Transport circle angles in (0, 2 pi) to half-plane jump points.

    The circle is first rotated so that the midpoint of the last arc maps to
    infinity, keeping the unbounded arc free of jump points.
    """
    th = np.asarray(angles, dtype=float)
    mid = (th[-1] + th[0] + 2.0 * np.pi) / 2.0
    th = th + (2.0 * np.pi - mid)
    return -1.0 / np.tan(th / 2.0)


def jumps_to_angles(jumps: np.ndarray) -> np.ndarray:
    """Inverse transport: s = -cot(theta/2) with theta in (0, 2 pi)."""
    s = np.asarray(jumps, dtype=float)
    return 2.0 * np.arctan2(np.ones_like(s), -s) % (2.0 * np.pi)


@dataclass(frozen=True)
class ConformalitySystem:
    """Residual system for one cyclic list of lightlike edge vectors."""

    edges: np.ndarray  # (n, 3) cyclic lightlike jumps, summing to zero
    gram: np.ndarray = field(init=False)

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=float).copy()
        n = len(e)
        if n not in (4, 6):
            raise ValueError("jump solving supports quadrilaterals and hexagons only")
        closure = np.abs(e.sum(axis=0)).max()
        if closure > 1e-9 * np.abs(e).max():
            raise ValueError(f"edge vectors do not close up (residual {closure:.2e})")
        for v in e:
            if causal_character(v) is not CausalCharacter.LIGHTLIKE:
                raise ValueError("edge vector is not lightlike")
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "gram", _gram(e))

    @property
    def n(self) -> int:
        return len(self.edges)

    def residuals(self, jumps: np.ndarray) -> np.ndarray:
        return halfplane_residuals(jumps, self.edges)


@dataclass
class SolverReport:
    converged: bool
    iterations: int
    residual_norm: float        # max |R_k| at the transported jump points
    jump_points: np.ndarray
    hopf_sup_norm: float        # sup |Q| on the test circle |zeta - i| = 1/2
    angles: np.ndarray
    residual_history: list[float]
    tol_newton: float = TOL_NEWTON

    def __post_init__(self):
        if self.converged and not self.residual_norm < self.tol_newton:
            raise ValueError("inconsistent report: converged above tolerance")


def hopf_quadratic(patch: GraphPatch, zeta) -> np.ndarray:
    """Q(zeta) = <phi, phi> with the complex-bilinear Minkowski product."""
    phi = patch.holomorphic_derivative(zeta)
    return phi[..., 0] ** 2 + phi[..., 1] ** 2 - phi[..., 2] ** 2


def _hopf_sup_on_circle(jumps, edges, center=1j, radius=0.5, samples=64) -> float:
    zeta = center + radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    r = 1.0 / (np.asarray(jumps) - zeta[:, None])
    phi = (r[..., None] * edges).sum(axis=-2) / np.pi
    q = phi[..., 0] ** 2 + phi[..., 1] ** 2 - phi[..., 2] ** 2
    return float(np.abs(q).max())


def solve_jumps(edges, initial_guess=None, tol_newton: float = TOL_NEWTON,
                max_iter: int = MAX_ITER) -> SolverReport:
    """Damped Newton solve of the reduced residue system.

    ``edges`` is the cyclic list of lightlike edge vectors (jump k carries
    edge k).  ``initial_guess`` may give starting jump points on the real
    line; by default the points of the symmetrised polygon (equal arcs on
    the circle) are used.  The first three angles are pinned as the Moebius
    gauge and the remaining ``n - 3`` solved with backtracking that
    preserves the cyclic ordering; a step that cannot be damped into the
    ordered region raises ``ordering collapse``.
    """
    system = ConformalitySystem(edges)
    n, gram = system.n, system.gram

    if initial_guess is None:
        theta = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    else:
        theta = np.sort(jumps_to_angles(np.asarray(initial_guess, dtype=float)))
        if len(theta) != n:
            raise ValueError("initial guess length does not match edge count")
    theta0 = theta[0]

    history: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(max_iter):
        r = circle_residuals(theta, gram)
        history.append(float(np.abs(r).max()))
        if history[-1] < tol_newton:
            converged = True
            break
        reduced = r[3:]
        merit = 0.5 * float(reduced @ reduced)
        jac = _circle_jacobian(theta, gram)[3:, 3:]
        step = np.linalg.solve(jac, -reduced)

        lam, accepted = 1.0, False
        ordering_ok_somewhere = False
        for _ in range(MAX_HALVINGS):
            cand = theta.copy()
            cand[3:] += lam * step
            if np.all(np.diff(cand) > 0.0) and cand[-1] < theta0 + 2.0 * np.pi:
                ordering_ok_somewhere = True
                rc = circle_residuals(cand, gram)[3:]
                if 0.5 * float(rc @ rc) <= merit * (1.0 - 1e-4 * lam):
                    theta = cand
                    accepted = True
                    break
            lam /= 2.0
        if not accepted:
            if not ordering_ok_somewhere:
                raise RuntimeError("ordering collapse")
            break  # stagnated: report non-convergence below

    jumps = angles_to_jumps(theta)
    res = system.residuals(jumps)
    residual_norm = float(np.abs(res).max())
    converged = converged and residual_norm < tol_newton
    return SolverReport(
        converged=converged,
        iterations=iterations,
        residual_norm=residual_norm,
        jump_points=jumps,
        hopf_sup_norm=_hopf_sup_on_circle(jumps, system.edges),
        angles=theta,
        residual_history=history,
        tol_newton=tol_newton,
    )


def boundary_data_from_vertices(lifted_vertices, jumps) -> StepBoundaryData:
    """Step data whose jump at s_k joins lifted vertex k to vertex k+1.

    The arc (s_k, s_{k+1}) carries vertex k+1 and the unbounded arc carries
    vertex 0, so traversing the real line sweeps the polygon boundary once,
    counterclockwise.
    """
    v = np.asarray(lifted_vertices, dtype=float)
    return StepBoundaryData(jumps=np.asarray(jumps, dtype=float),
                            values=np.roll(v, -1, axis=0))


def apply_real_mobius(points, mat) -> np.ndarray:
    """Apply a real Moebius map (a s + b)/(c s + d), det > 0, to real points."""
    a, b, c, d = np.asarray(mat, dtype=float).ravel()
    if a * d - b * c <= 0.0:
        raise ValueError("Moebius map must have positive determinant")
    s = np.asarray(points, dtype=float)
    return (a * s + b) / (c * s + d)


def enumerate_solutions(edges, n_starts: int = 8, seed: int = 0,
                        tol_newton: float = TOL_NEWTON) -> list[SolverReport]:
    """Solve from several randomised starts and keep distinct solutions.

    Distinctness is judged by the gauge-invariant cross-ratios of the
    solved jump points.  No completeness claim: this reports what the
    starts found.
    """
    rng = np.random.default_rng(seed)
    n = len(edges)
    base = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    found: list[SolverReport] = []
    signatures: list[np.ndarray] = []
    for k in range(n_starts):
        theta = base.copy()
        if k > 0:
            gaps = np.diff(np.concatenate([theta, [theta[0] + 2 * np.pi]]))
            gaps *= rng.uniform(0.4, 1.6, n)
            theta = theta[0] + np.concatenate([[0.0], np.cumsum(gaps[:-1])]) \
                * (2 * np.pi - 1e-9) / gaps.sum()
        try:
            report = solve_jumps(edges, initial_guess=angles_to_jumps(theta),
                                 tol_newton=tol_newton)
        except RuntimeError:
            continue
        if not report.converged:
            continue
        s = report.jump_points
        idx = np.arange(n)
        cr = []
        for i in range(n - 3):
            a, b, c, d = s[idx[i:i + 4]]
            cr.append(((a - c) * (b - d)) / ((a - d) * (b - c)))
        sig = np.asarray(cr)
        if not any(np.allclose(sig, prev, rtol=1e-6, atol=1e-9) for prev in signatures):
            signatures.append(sig)
            found.append(report)
    return found
