"""Smallest enclosing ball via Welzl's randomized recursion.

Rational mode runs the recursion over Fractions with exact comparisons.
Floating mode runs the same recursion in float arithmetic with a relative
containment slack, then tightens the radius to the true farthest point so
the containment invariant holds by construction.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .geometry import EXACT_MODE, PointSet

_SHUFFLE_SEED = 0x9E3779B9  # fixed so repeated runs give identical results
_REL_SLACK = 1e-12


def _circumball_exact(support: Sequence[tuple]):
    """Smallest sphere through affinely independent support points (exact)."""
    if not support:
        return None, None
    p0 = support[0]
    if len(support) == 1:
        return p0, Fraction(0)
    us = [tuple(a - b for a, b in zip(p, p0)) for p in support[1:]]
    k = len(us)
    # Gram system: 2 G a = (|u_i|^2)_i, center = p0 + sum a_i u_i
    g = [[2 * sum(x * y for x, y in zip(us[i], us[j])) for j in range(k)] for i in range(k)]
    b = [sum(x * x for x in us[i]) for i in range(k)]
    a = _solve_fraction(g, b)
    if a is None:
        return None, None
    center = list(p0)
    for coef, u in zip(a, us):
        for t in range(len(center)):
            center[t] += coef * u[t]
    center = tuple(center)
    r2 = sum((x - y) * (x - y) for x, y in zip(center, p0))
    return center, r2


def _solve_fraction(g, b):
    k = len(g)
    m = [row[:] + [b[i]] for i, row in enumerate(g)]
    for col in range(k):
        piv = next((r for r in range(col, k) if m[r][col] != 0), None)
        if piv is None:
            return None  # affinely dependent support
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col]
        m[col] = [x / inv for x in m[col]]
        for r in range(k):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][k] for r in range(k)]


def _circumball_float(support: np.ndarray):
    if len(support) == 0:
        return None, None
    p0 = support[0]
    if len(support) == 1:
        return p0.copy(), 0.0
    u = support[1:] - p0
    g = 2.0 * (u @ u.T)
    b = np.einsum("ij,ij->i", u, u)
    try:
        a = np.linalg.solve(g, b)
    except np.linalg.LinAlgError:
        return None, None
    center = p0 + a @ u
    r2 = float(((support - center) ** 2).sum(axis=1).max())
    return center, r2


def _welzl(pts, d, circumball, contains):
    import sys

    order = list(range(len(pts)))
    random.Random(_SHUFFLE_SEED).shuffle(order)
    seq = [pts[i] for i in order]
    limit = sys.getrecursionlimit()
    if 2 * len(seq) + 100 > limit:
        sys.setrecursionlimit(2 * len(seq) + 100)

    def rec(end: int, boundary: tuple):
        if end == 0 or len(boundary) == d + 1:
            return circumball(list(boundary))
        ball = rec(end - 1, boundary)
        p = seq[end - 1]
        if ball[0] is not None and contains(ball, p):
            return ball
        return rec(end - 1, boundary + (p,))

    return rec(len(seq), ())


def min_enclosing_ball(s: PointSet) -> Tuple[tuple, float, Optional[Fraction]]:
    """Returns (center, radius, exact squared radius or None)."""
    if s.mode == EXACT_MODE:
        def contains(ball, p):
            c, r2 = ball
            return sum((a - b) * (a - b) for a, b in zip(c, p)) <= r2

        center, r2 = _welzl(list(s.points), s.dim, _circumball_exact, contains)
        if center is None:
            raise RuntimeError("degenerate support in enclosing-ball recursion")
        return tuple(center), math.sqrt(float(r2)), r2

    x = s.array

    def contains(ball, p):
        c, r2 = ball
        d2 = float(((p - c) ** 2).sum())
        return d2 <= r2 * (1.0 + _REL_SLACK) + 1e-30

    center, _ = _welzl([x[i] for i in range(len(x))], s.dim, _circumball_float, contains)
    if center is None:
        raise RuntimeError("degenerate support in enclosing-ball recursion")
    # tighten: report the true farthest distance from the computed center
    r = math.sqrt(float(((x - center) ** 2).sum(axis=1).max()))
    return tuple(float(c) for c in center), r, None
