"""Harmonic kernel: branch-managed arguments, harmonic measures and Poisson
integrals of step boundary data on the upper half-plane.

The boundary data lives on the real line, which we read as the boundary of
the upper half-plane H.  A step function with jumps ``s_0 < ... < s_{n-1}``
and vertex values ``u_k`` on the arcs between them has the Poisson integral

    X(zeta) = sum_k u_k * omega_k(zeta),

where ``omega_k`` is the harmonic measure of the k-th arc.  The measure of a
finite interval (sigma, tau) seen from ``zeta`` in H is

    omega(zeta) = (1/pi) * (Arg(tau - zeta) - Arg(sigma - zeta)),

with the principal branch; the unbounded arc gets one minus the sum of the
finite measures, which avoids branch bookkeeping at infinity.  ``X`` is the
imaginary part of the holomorphic completion ``F`` whose derivative is the
rational function

    phi(zeta) = (1/pi) * sum_k  delta_k / (s_k - zeta),

with ``delta_k`` the jump of the boundary data at ``s_k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lorentz import as_vec3

__all__ = [
    "BranchCutError",
    "principal_arg",
    "plus_arg",
    "arg_branch",
    "harmonic_measure",
    "StepBoundaryData",
    "GraphPatch",
    "eval_patch",
    "holo_derivative",
    "mobius_to_disk",
    "disk_to_halfplane",
]

JUMP_CLEARANCE = 1e-12  # evaluation refused closer to a jump point than this


class BranchCutError(ValueError):
    pass


def principal_arg(z):
    """Arg on C minus (-inf, 0], valued in (-pi, pi)."""
    z = np.asarray(z, dtype=complex)
    if np.any((z.imag == 0.0) & (z.real <= 0.0)):
        raise BranchCutError("branch cut violation: principal Arg on (-inf, 0]")
    return np.angle(z)


def plus_arg(z):
    """Arg on C minus [0, inf), valued in (0, 2 pi)."""
    z = np.asarray(z, dtype=complex)
    if np.any((z.imag == 0.0) & (z.real >= 0.0)):
        raise BranchCutError("branch cut violation: plus-branch Arg on [0, inf)")
    a = np.angle(z)
    return np.where(a > 0.0, a, a + 2.0 * np.pi)


def arg_branch(z, branch: str):
    """Branch-managed argument; ``branch`` is 'principal' or 'plus'."""
    if branch == "principal":
        return principal_arg(z)
    if branch == "plus":
        return plus_arg(z)
    raise ValueError(f"unknown branch {branch!r}")


def _require_upper(z):
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0.0):
        raise ValueError("outside domain: evaluation point not in the upper half-plane")
    return z


def harmonic_measure(zeta, sigma: float, tau: float):
    """Harmonic measure of the interval (sigma, tau) seen from zeta in H.

    Equals (1/pi)(Arg(tau - zeta) - Arg(sigma - zeta)); valued in (0, 1) and
    tends to 1 as zeta approaches an interior point of the interval.
    """
    if not sigma < tau:
        raise ValueError("empty interval")
    z = _require_upper(zeta)
    # both tau - z and sigma - z lie in the lower half-plane: cut-free
    return (np.angle(tau - z) - np.angle(sigma - z)) / np.pi


@dataclass(frozen=True)
class StepBoundaryData:
    """Step boundary data on the real line.

    ``values[k]`` is the constant value on the arc ``(jumps[k], jumps[k+1])``
    for ``k < n-1``; ``values[n-1]`` is the value on the unbounded arc
    ``(jumps[n-1], inf) union (-inf, jumps[0])``.  The jump of the data at
    ``jumps[k]`` is ``values[k] - values[k-1]`` (cyclically), and all jumps
    must be nonzero.
    """

    jumps: np.ndarray   # (n,) strictly increasing reals
    values: np.ndarray  # (n, 3)

    def __post_init__(self):
        s = np.asarray(self.jumps, dtype=float).copy()
        u = as_vec3(np.asarray(self.values, dtype=float)).copy()
        if s.ndim != 1 or u.ndim != 2 or len(s) != len(u):
            raise ValueError("need one value per jump")
        if len(s) < 2:
            raise ValueError("need at least two jump points")
        if not np.all(np.diff(s) > 0.0):
            raise ValueError("jump points must be strictly increasing")
        deltas = u - np.roll(u, 1, axis=0)
        if np.any(np.linalg.norm(deltas, axis=1) == 0.0):
            raise ValueError("zero jump: consecutive arc values must differ")
        object.__setattr__(self, "jumps", s)
        object.__setattr__(self, "values", u)

    @property
    def n(self) -> int:
        return len(self.jumps)

    def deltas(self) -> np.ndarray:
        """Cyclic jumps values[k] - values[k-1]; they sum to zero."""
        return self.values - np.roll(self.values, 1, axis=0)


class GraphPatch:
    """Evaluable harmonic map over H given by step boundary data.

    Immutable after construction; evaluation is pure and vectorised, so grid
    sweeps may run data-parallel.
    """

    def __init__(self, data: StepBoundaryData):
        self.data = data

    @property
    def jumps(self) -> np.ndarray:
        return self.data.jumps

    @property
    def values(self) -> np.ndarray:
        return self.data.values

    def _check_clearance(self, z):
        d = np.abs(z[..., None] - self.jumps)
        if np.any(d.min(axis=-1) < JUMP_CLEARANCE):
            raise ValueError(
                f"evaluation within {JUMP_CLEARANCE} of a jump point is refused"
            )

    def arc_measures(self, zeta) -> np.ndarray:
        """Harmonic measures of the n arcs (finite ones first, unbounded last)."""
        z = _require_upper(zeta)
        self._check_clearance(z)
        a = np.angle(self.jumps - z[..., None])
        m = (a[..., 1:] - a[..., :-1]) / np.pi
        unbounded = 1.0 - m.sum(axis=-1)
        return np.concatenate([m, unbounded[..., None]], axis=-1)

    def evaluate(self, zeta) -> np.ndarray:
        """X(zeta): shape zeta.shape + (3,)."""
        return self.arc_measures(zeta) @ self.values

    def holomorphic_derivative(self, zeta) -> np.ndarray:
        """phi(zeta) = (1/pi) sum_k delta_k / (s_k - zeta), componentwise."""
        z = np.asarray(zeta, dtype=complex)
        if np.any(np.abs(z[..., None] - self.jumps) == 0.0):
            raise ValueError("pole: holomorphic derivative evaluated at a jump point")
        r = 1.0 / (self.jumps - z[..., None])
        return (r[..., None] * self.data.deltas()).sum(axis=-2) / np.pi

    def holomorphic_completion(self, zeta) -> np.ndarray:
        """F with X = Im F on H; F' equals the holomorphic derivative.

        The unbounded arc contributes through the complement measure, giving
        the constant ``i pi`` term below.
        """
        z = _require_upper(zeta)
        self._check_clearance(z)
        s, u = self.jumps, self.values
        logs = np.log(s - z[..., None])  # principal; arguments in lower half-plane
        f = ((logs[..., 1:] - logs[..., :-1])[..., None] * u[:-1]).sum(axis=-2)
        f = f + (1j * np.pi + logs[..., 0] - logs[..., -1])[..., None] * u[-1]
        return f / np.pi


def eval_patch(patch: GraphPatch, zeta) -> np.ndarray:
    """Poisson integral of the patch data at zeta in H."""
    return patch.evaluate(zeta)


def holo_derivative(patch: GraphPatch, zeta) -> np.ndarray:
    """Holomorphic derivative of the patch completion at zeta."""
    return patch.holomorphic_derivative(zeta)


def mobius_to_disk(zeta):
    """Standard Moebius map H -> D, zeta -> (zeta - i)/(zeta + i)."""
    z = np.asarray(zeta, dtype=complex)
    if np.any(z == -1j):
        raise ValueError("pole of Moebius map")
    return (z - 1j) / (z + 1j)


def disk_to_halfplane(w):
    """Inverse Moebius map D -> H, w -> i(1 + w)/(1 - w)."""
    w = np.asarray(w, dtype=complex)
    if np.any(w == 1.0):
        raise ValueError("pole of Moebius map")
    return 1j * (1.0 + w) / (1.0 - w)
