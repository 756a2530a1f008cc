"""Linear algebra of Lorentz-Minkowski 3-space with signature (+, +, -).

Vectors are plain length-3 float arrays ``(x, y, t)`` where ``t`` is the
timelike coordinate.  Everything here is a pure function of immutable
values; arrays are copied on construction and never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "CausalCharacter",
    "PointSymmetry",
    "PeriodLattice",
    "as_vec3",
    "minkowski",
    "causal_character",
    "causal_tolerance",
    "reflect",
    "compose_symmetries",
]


def as_vec3(v) -> np.ndarray:
    """Coerce to a finite (…, 3) float array."""
    a = np.asarray(v, dtype=float)
    if a.shape[-1] != 3:
        raise ValueError(f"expected 3 components, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite component in Lorentz vector")
    return a


def minkowski(u, v) -> float | np.ndarray:
    """Minkowski product <u, v> = u_x v_x + u_y v_y - u_t v_t.

    Broadcasts over leading axes, so ``minkowski(U[:, None], V[None, :])``
    yields the full Gram matrix of two stacks of vectors.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


class CausalCharacter(Enum):
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"
    TIMELIKE = "timelike"


def causal_tolerance(v) -> float:
    """Lightlike classification tolerance, relative above unit scale.

    Constructed lightlike edges are exact in input data; the tolerance only
    absorbs rounding in derived vectors.
    """
    v = as_vec3(v)
    return 1e-9 * max(1.0, float(np.dot(v, v)))


def causal_character(v) -> CausalCharacter:
    """Classify a nonzero vector by the sign of its Minkowski self-product."""
    v = as_vec3(v)
    if np.all(v == 0.0):
        raise ValueError("degenerate vector")
    q = float(minkowski(v, v))
    eps = causal_tolerance(v)
    if abs(q) <= eps:
        return CausalCharacter.LIGHTLIKE
    return CausalCharacter.SPACELIKE if q > 0 else CausalCharacter.TIMELIKE


@dataclass(frozen=True)
class PointSymmetry:
    """Point symmetry p -> 2c - p of L^3 about a center c (an involution)."""

    center: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec3(self.center).copy())

    def apply(self, p) -> np.ndarray:
        return 2.0 * self.center - as_vec3(p)


def reflect(p, s: PointSymmetry) -> np.ndarray:
    """Image of p under the point symmetry s."""
    return s.apply(p)


def compose_symmetries(s1: PointSymmetry, s2: PointSymmetry) -> np.ndarray:
    """Translation vector of s2 ∘ s1, namely 2(c2 - c1).

    Composing two point symmetries is a translation; this is how period
    lattices arise from midpoint symmetries of a tiling.
    """
    return 2.0 * (s2.center - s1.center)


@dataclass(frozen=True)
class PeriodLattice:
    """Translation lattice of a periodic surface.

    Two generators for a doubly periodic surface, three for a triply
    periodic one; in the triply periodic case exactly one generator is
    lightlike (the translation along a lightlike boundary segment).
    """

    generators: np.ndarray  # (k, 3), k in {2, 3}
    characters: tuple = field(init=False)

    def __post_init__(self):
        g = as_vec3(np.atleast_2d(np.asarray(self.generators, dtype=float)))
        if g.shape[0] not in (2, 3):
            raise ValueError("period lattice needs 2 or 3 generators")
        if np.linalg.matrix_rank(g, tol=1e-12 * max(1.0, np.abs(g).max())) != g.shape[0]:
            raise ValueError("lattice generators are linearly dependent")
        chars = tuple(causal_character(v) for v in g)
        if g.shape[0] == 3:
            n_light = sum(c is CausalCharacter.LIGHTLIKE for c in chars)
            if n_light != 1:
                raise ValueError(
                    f"triply periodic lattice needs exactly one lightlike generator, got {n_light}"
                )
        object.__setattr__(self, "generators", g.copy())
        object.__setattr__(self, "characters", chars)

    @property
    def rank(self) -> int:
        return self.generators.shape[0]

    def lightlike_generator(self) -> np.ndarray:
        for v, c in zip(self.generators, self.characters):
            if c is CausalCharacter.LIGHTLIKE:
                return v
        raise ValueError("lattice has no lightlike generator")
