"""Deterministic constructions of almost-equidistant sets.

All constructions involve square roots, so they emit floating mode only.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import PointSet, Tolerance, _resolve_tol

INV_SQRT2 = 1.0 / math.sqrt(2.0)

KINDS = ("simplex", "two_simplices", "rosenfeld", "lift")


@dataclass(frozen=True)
class ConstructionSpec:
    """Dispatch record: which generator to run and with what parameters.

    params carries kind-specific keys: simplex takes k (default dim + 1);
    lift takes base (a PointSet) and r (its sphere radius).
    """

    kind: str
    dim: int
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dim must be at least 1")


def construct(spec: ConstructionSpec) -> PointSet:
    if spec.kind == "simplex":
        k = spec.params.get("k", spec.dim + 1)
        return construct_simplex(k, spec.dim)
    if spec.kind == "two_simplices":
        return construct_two_simplices(spec.dim)
    if spec.kind == "rosenfeld":
        return construct_rosenfeld(spec.dim)
    base = spec.params["base"]
    return lift_to_halfsphere(base, spec.params["r"], spec.params.get("tol"))


def simplex_circumradius(k: int) -> float:
    """Circumradius of k unit-spaced points: sqrt((k-1)/(2k))."""
    return math.sqrt((k - 1) / (2.0 * k))


def construct_simplex(k: int, d: int) -> PointSet:
    """k points in R^d, pairwise at distance 1, centered at the origin.

    Built by the standard recursion: vertex i extends the centroid of the
    previous vertices into a fresh coordinate direction, so vertex i has at
    most i nonzero leading coordinates before recentring.
    """
    if not 1 <= k <= d + 1:
        raise ValueError(f"need 1 <= k <= d + 1, got k={k}, d={d}")
    pts = np.zeros((k, d))
    for i in range(1, k):
        c = pts[:i].mean(axis=0)
        rho2 = float(((pts[0] - c) ** 2).sum())
        # new vertex sits over the centroid; height keeps all distances 1
        pts[i] = c
        pts[i, i - 1] += math.sqrt(1.0 - rho2)
    pts -= pts.mean(axis=0)
    return PointSet.from_array(pts)


def construct_two_simplices(d: int) -> PointSet:
    """Two unit d-simplices sharing the circumsphere of radius sqrt(d/(2(d+1))).

    The second copy is the antipodal image of the first; on a vertex
    collision it is rotated by pi/(d+1) in the first coordinate plane. In
    R^1 the segment is centrally symmetric and there is no second plane to
    rotate in, so only the 2 distinct points are emitted, with a warning.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    first = construct_simplex(d + 1, d).array
    if d == 1:
        warnings.warn(
            "two-simplices construction degenerates in R^1: the antipodal "
            "image coincides with the segment, emitting 2 points instead of 4"
        )
        return PointSet.from_array(first)
    second = -first
    min_gap = _min_cross_distance_sq(first, second)
    if min_gap <= 1e-9:
        theta = math.pi / (d + 1)
        rot = np.eye(d)
        rot[0, 0] = rot[1, 1] = math.cos(theta)
        rot[0, 1] = -math.sin(theta)
        rot[1, 0] = math.sin(theta)
        second = second @ rot.T
    return PointSet.from_array(np.vstack([first, second]))


def _min_cross_distance_sq(a: np.ndarray, b: np.ndarray) -> float:
    diff = a[:, None, :] - b[None, :, :]
    return float(np.einsum("ijk,ijk->ij", diff, diff).min())


def construct_rosenfeld(d: int) -> PointSet:
    """2d points of norm 1/sqrt(2): two aligned unit (d-1)-simplices of d
    vertices each, in parallel hyperplanes at heights +-sqrt(1/(2d))."""
    if d < 2:
        raise ValueError("d must be at least 2")
    base = construct_simplex(d, d - 1).array if d > 1 else np.zeros((1, 1))
    h = math.sqrt(1.0 / (2.0 * d))
    top = np.hstack([base, np.full((d, 1), h)])
    bottom = np.hstack([base, np.full((d, 1), -h)])
    return PointSet.from_array(np.vstack([top, bottom]))


def lift_to_halfsphere(
    s: PointSet, r: float, tol: Optional[Tolerance] = None
) -> PointSet:
    """Append a constant coordinate h = sqrt(1/2 - r^2) to every point.

    Input points must lie on the origin-centered sphere of radius
    r <= 1/sqrt(2); pairwise distances are preserved exactly and the output
    lands on the radius-1/sqrt(2) sphere in R^(d+1).
    """
    tol = _resolve_tol(s, tol)
    slack = max(tol.dist_tol, 1e-15)
    if r < 0 or r * r > 0.5 + slack:
        raise ValueError("radius must satisfy 0 <= r <= 1/sqrt(2)")
    x = s.array
    norms_sq = np.einsum("ij,ij->i", x, x)
    worst = float(np.abs(norms_sq - r * r).max())
    if worst > slack:
        raise ValueError(
            f"points do not lie on the stated sphere: |norm^2 - r^2| up to {worst:.3e}"
        )
    h = math.sqrt(max(0.5 - r * r, 0.0))
    lifted = np.hstack([x, np.full((s.n, 1), h)])
    return PointSet.from_array(lifted)
