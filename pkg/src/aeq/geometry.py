"""Point sets, distances, and the almost-equidistant triple predicate.

Coordinates are either floats or exact ``fractions.Fraction`` values. Every
operation keeps rational inputs exact; floating inputs are compared against
explicit tolerances (``dist_tol`` acts on squared distances).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np

FLOAT_MODE = "float"
EXACT_MODE = "exact"


@dataclass(frozen=True)
class Tolerance:
    """Numeric slack: dist_tol on squared distances, eig_tol on eigenvalues.

    Floating mode wants both strictly positive; exact-rational mode uses
    ``Tolerance.exact()`` where both are exactly zero and comparisons become
    exact equality.
    """

    dist_tol: float = 1e-9
    eig_tol: float = 1e-8

    def __post_init__(self) -> None:
        if self.dist_tol < 0 or self.eig_tol < 0:
            raise ValueError("tolerances must be nonnegative")

    @classmethod
    def exact(cls) -> "Tolerance":
        return cls(0.0, 0.0)

    @property
    def is_exact(self) -> bool:
        return self.dist_tol == 0.0 and self.eig_tol == 0.0


DEFAULT_TOL = Tolerance()


def _coerce_row(row: Sequence, mode: str) -> tuple:
    if mode == EXACT_MODE:
        out = []
        for c in row:
            if isinstance(c, Fraction):
                out.append(c)
            elif isinstance(c, int):
                out.append(Fraction(c))
            else:
                raise ValueError(
                    "exact mode requires int or Fraction coordinates, got %r"
                    % type(c).__name__
                )
        return tuple(out)
    return tuple(float(c) for c in row)


@dataclass(frozen=True)
class PointSet:
    """A finite list of points in R^dim, all rows of equal length."""

    dim: int
    points: Tuple[tuple, ...]
    mode: str = FLOAT_MODE

    def __post_init__(self) -> None:
        if self.mode not in (FLOAT_MODE, EXACT_MODE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        rows = tuple(_coerce_row(r, self.mode) for r in self.points)
        if not rows:
            raise ValueError("point set must contain at least one point")
        for r in rows:
            if len(r) != self.dim:
                raise ValueError(
                    f"ragged point set: expected {self.dim} coordinates, got {len(r)}"
                )
        object.__setattr__(self, "points", rows)

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([[float(c) for c in row] for row in self.points], dtype=float)

    @classmethod
    def from_array(cls, arr, mode: str = FLOAT_MODE) -> "PointSet":
        a = np.atleast_2d(np.asarray(arr, dtype=float))
        return cls(dim=a.shape[1], points=tuple(map(tuple, a.tolist())), mode=mode)

    @classmethod
    def exact_rows(cls, rows: Sequence[Sequence]) -> "PointSet":
        rows = [tuple(Fraction(c) for c in r) for r in rows]
        return cls(dim=len(rows[0]), points=tuple(rows), mode=EXACT_MODE)

    def with_points(self, rows) -> "PointSet":
        return PointSet(dim=self.dim, points=tuple(tuple(r) for r in rows), mode=self.mode)

    def default_tol(self) -> Tolerance:
        return Tolerance.exact() if self.mode == EXACT_MODE else DEFAULT_TOL


def _resolve_tol(s: PointSet, tol: Optional[Tolerance]) -> Tolerance:
    return s.default_tol() if tol is None else tol


def squared_distance(p: Sequence, q: Sequence):
    """Exact squared Euclidean distance; stays rational on rational input."""
    if len(p) != len(q):
        raise ValueError("dimension mismatch")
    return sum((a - b) * (a - b) for a, b in zip(p, q))


def squared_distance_matrix(s: PointSet):
    """n x n squared distances: ndarray in float mode, Fraction rows in exact."""
    if s.mode == EXACT_MODE:
        pts = s.points
        n = s.n
        m = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d2 = squared_distance(pts[i], pts[j])
                m[i][j] = d2
                m[j][i] = d2
        return m
    x = s.array
    sq = np.einsum("ij,ij->i", x, x)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.fill_diagonal(d2, 0.0)
    return np.maximum(d2, 0.0)


@dataclass(frozen=True)
class TripleCheck:
    ok: bool
    witness: Optional[Tuple[int, int, int]]  # indices of a triple with no unit pair


def is_almost_equidistant(s: PointSet, tol: Optional[Tolerance] = None) -> TripleCheck:
    """Every triple must contain a pair at unit distance.

    Equivalent formulation: the graph of non-unit pairs must be triangle
    free. Detection walks non-unit pairs and intersects adjacency bitsets,
    returning the first offending triple in index order.
    """
    tol = _resolve_tol(s, tol)
    n = s.n
    if n < 3:
        return TripleCheck(True, None)
    d2 = squared_distance_matrix(s)
    masks = [0] * n  # bit k of masks[i] set iff pair (i, k) is not unit
    if s.mode == EXACT_MODE:
        one = Fraction(1)
        for i in range(n):
            row = d2[i]
            m = 0
            for k in range(n):
                if k != i and row[k] != one:
                    m |= 1 << k
            masks[i] = m
    else:
        nonunit = np.abs(d2 - 1.0) > tol.dist_tol
        np.fill_diagonal(nonunit, False)
        for i in range(n):
            m = 0
            for k in np.flatnonzero(nonunit[i]):
                m |= 1 << int(k)
            masks[i] = m
    for i in range(n):
        mi = masks[i]
        for j in range(i + 1, n):
            if not (mi >> j) & 1:
                continue
            common = mi & masks[j]
            if common:
                k = (common & -common).bit_length() - 1
                tri = tuple(sorted((i, j, k)))
                return TripleCheck(False, tri)
    return TripleCheck(True, None)


def barycenter(s: PointSet) -> tuple:
    if s.mode == EXACT_MODE:
        n = s.n
        return tuple(sum(col) / n for col in zip(*s.points))
    return tuple(s.array.mean(axis=0).tolist())


def recenter_to_barycenter(s: PointSet) -> PointSet:
    """Translate so the barycenter is the origin; exact in rational mode."""
    c = barycenter(s)
    if s.mode == EXACT_MODE:
        rows = [tuple(a - b for a, b in zip(p, c)) for p in s.points]
        return s.with_points(rows)
    x = s.array - np.asarray(c)
    return s.with_points(map(tuple, x.tolist()))


def diameter(s: PointSet) -> float:
    d2 = squared_distance_matrix(s)
    if s.mode == EXACT_MODE:
        worst = max(max(row) for row in d2)
        return math.sqrt(float(worst))
    return math.sqrt(float(d2.max()))


@dataclass(frozen=True)
class GeometrySummary:
    diameter: float
    mer_center: tuple
    mer_radius: float
    barycenter: tuple
    mer_radius_sq: object = None  # exact squared radius in rational mode


def summarize(s: PointSet, tol: Optional[Tolerance] = None) -> GeometrySummary:
    """Diameter, minimum enclosing ball, and barycenter of the set."""
    from .miniball import min_enclosing_ball

    center, radius, radius_sq = min_enclosing_ball(s)
    return GeometrySummary(
        diameter=diameter(s),
        mer_center=center,
        mer_radius=radius,
        barycenter=barycenter(s),
        mer_radius_sq=radius_sq,
    )


def barycenter_identity_check(x: PointSet, y: PointSet):
    """Residual of the cross-sum identity between two equal-size sets.

    sum_{i,j} |x_i - y_j|^2 = sum_{i<j} |x_i - x_j|^2 + sum_{i<j} |y_i - y_j|^2
                              + n^2 |xbar - ybar|^2

    Returns |lhs - rhs|, a Fraction (exactly 0) when both sets are exact.
    """
    if x.n != y.n:
        raise ValueError("the identity needs two sets of the same size")
    if x.dim != y.dim:
        raise ValueError("dimension mismatch")
    exact = x.mode == EXACT_MODE and y.mode == EXACT_MODE
    if exact:
        lhs = sum(
            squared_distance(p, q) for p in x.points for q in y.points
        )
        ax = sum(
            squared_distance(x.points[i], x.points[j])
            for i in range(x.n)
            for j in range(i + 1, x.n)
        )
        ay = sum(
            squared_distance(y.points[i], y.points[j])
            for i in range(y.n)
            for j in range(i + 1, y.n)
        )
        cross = squared_distance(barycenter(x), barycenter(y))
        rhs = ax + ay + x.n * x.n * cross
        return abs(lhs - rhs)
    xa, ya = x.array, y.array
    diff = xa[:, None, :] - ya[None, :, :]
    lhs = float(np.einsum("ijk,ijk->", diff, diff))
    dx = xa[:, None, :] - xa[None, :, :]
    ax = 0.5 * float(np.einsum("ijk,ijk->", dx, dx))
    dy = ya[:, None, :] - ya[None, :, :]
    ay = 0.5 * float(np.einsum("ijk,ijk->", dy, dy))
    cb = xa.mean(axis=0) - ya.mean(axis=0)
    rhs = ax + ay + x.n * x.n * float(cb @ cb)
    return abs(lhs - rhs)
