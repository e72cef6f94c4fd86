"""Cardinality bound calculators and their audit pipeline.

Each calculator returns a BoundReport: the numeric bound for the requested
regime plus, when a configuration is supplied, the observed size and whether
it satisfies the bound. Nothing here ever silently assumes the hypotheses;
violated preconditions raise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .geometry import (
    EXACT_MODE,
    PointSet,
    Tolerance,
    _resolve_tol,
    barycenter,
    diameter,
    is_almost_equidistant,
    recenter_to_barycenter,
    squared_distance_matrix,
)
from .miniball import min_enclosing_ball
from .spectral import (
    SpectralCertificate,
    certify,
    defect_matrix,
    perron_frobenius_check,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    dim: int
    params: dict
    bound: Optional[int]  # None means no finite bound in this regime
    n_observed: Optional[int] = None
    satisfied: Optional[bool] = None
    detail: dict = field(default_factory=dict)


def conjectured_diameter_max(d: int) -> int:
    """Conjectured tight size of diameter-1 sets: floor(3(d+1)/2)."""
    return (3 * (d + 1)) // 2


def sphere_bound(
    d: int,
    r: float,
    points: Optional[PointSet] = None,
    tol: Optional[Tolerance] = None,
) -> BoundReport:
    """Size bound on an origin-centered sphere of radius r <= 1/sqrt(2).

    2d + 2 points below the critical radius; exactly at 1/sqrt(2) the
    sharper 2d applies.
    """
    tol = tol or (points.default_tol() if points is not None else Tolerance())
    slack = max(tol.dist_tol, 1e-15)
    if r <= 0:
        raise ValueError("radius must be positive")
    if r > INV_SQRT2 + slack:
        raise ValueError("radius exceeds 1/sqrt(2); no bound in this regime")
    critical = abs(r - INV_SQRT2) <= slack
    bound = 2 * d if critical else 2 * d + 2
    detail = {"critical_radius": critical, "radius": r}
    n_obs = satisfied = None
    if points is not None:
        if points.dim != d:
            raise ValueError("dimension mismatch between points and d")
        x = points.array
        norms_sq = np.einsum("ij,ij->i", x, x)
        worst = float(np.abs(norms_sq - r * r).max())
        if worst > slack:
            raise ValueError(
                f"points do not lie on the stated sphere: |norm^2 - r^2| up to {worst:.3e}"
            )
        n_obs = points.n
        satisfied = n_obs <= bound
        detail["max_sphere_defect"] = worst
    return BoundReport(
        theorem="sphere",
        dim=d,
        params={"radius": r},
        bound=bound,
        n_observed=n_obs,
        satisfied=satisfied,
        detail=detail,
    )


def diameter_bound(
    d: int,
    points: Optional[PointSet] = None,
    tol: Optional[Tolerance] = None,
) -> BoundReport:
    """Size bound 2d + 4 for diameter-1 sets.

    With a configuration: verifies the diameter cap, certifies the set, and
    checks lambda_max + lambda_min <= eig_tol through the nonnegativity of
    the negated defect matrix (its spectral radius is attained at a
    nonnegative eigenvalue, which forces the sum down).
    """
    bound = 2 * d + 4
    detail = {"conjectured_tight": conjectured_diameter_max(d)}
    n_obs = satisfied = None
    if points is not None:
        tol = _resolve_tol(points, tol)
        diam = diameter(points)
        if diam > 1.0 + tol.dist_tol:
            raise ValueError(f"diameter {diam:.12g} exceeds 1 + dist_tol")
        cert = certify(points, tol)
        eig_tol = tol.eig_tol if tol.eig_tol > 0 else 1e-8
        neg_u = -defect_matrix(points).array
        pf = perron_frobenius_check(neg_u, eig_tol)
        lam_sum = cert.lambda_max + cert.lambda_min
        detail.update(
            {
                "diameter": diam,
                "lambda_sum": lam_sum,
                "lambda_sum_ok": lam_sum <= eig_tol,
                "perron_attained": pf.attained,
                "certificate": cert.as_dict(),
            }
        )
        n_obs = points.n
        satisfied = n_obs <= bound and lam_sum <= eig_tol
    return BoundReport(
        theorem="diameter",
        dim=d,
        params={},
        bound=bound,
        n_observed=n_obs,
        satisfied=satisfied,
        detail=detail,
    )


def ball_bound_threshold(d: int, c0: float, cap_factor: int = 100) -> Optional[int]:
    """Smallest n >= 2d+2 from which the eigenvalue chain is contradictory.

    For a set in a ball of radius sqrt(1/2 + r), r = c0/(d+1)^(2/3), whose
    defect matrix has an eigenvalue lambda > 1, the chain
    (2nr + 1)^3 >= lambda^3 > (n-d-1)^3/(d+1)^2 - (n-d-2) fails as soon as
    the outer sides cross, i.e. when the cubic side reaches the Weyl side.
    Returns the smallest n in [2d+2, cap_factor*(d+1)] past which the gap
    stays nonnegative for the rest of the window, or None if it never does.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if c0 < 0:
        raise ValueError("c0 must be nonnegative")
    r = c0 / (d + 1) ** (2.0 / 3.0)
    lo, hi = 2 * d + 2, cap_factor * (d + 1)
    ns = np.arange(lo, hi + 1, dtype=float)
    cubic = (ns - d - 1) ** 3 / (d + 1) ** 2 - (ns - d - 2)
    weyl = (2.0 * ns * r + 1.0) ** 3
    gap = cubic - weyl
    bad = np.flatnonzero(gap < 0)
    if len(bad) == 0:
        return lo
    last_bad = int(bad[-1])
    if last_bad == len(ns) - 1:
        return None
    return lo + last_bad + 1


def ball_bound(
    d: int,
    c0: float,
    points: Optional[PointSet] = None,
    tol: Optional[Tolerance] = None,
    cap_factor: int = 100,
) -> BoundReport:
    """Overall size bound in a ball of radius sqrt(1/2 + c0/(d+1)^(2/3)).

    Sets whose defect matrix has an eigenvalue above 1 are capped one below
    the contradiction threshold; sets without one are capped at 2d + 4, so
    the overall bound is the max of the two branches.
    """
    threshold = ball_bound_threshold(d, c0, cap_factor)
    no_spike_bound = 2 * d + 4
    bound = max(threshold - 1, no_spike_bound) if threshold is not None else None
    r = c0 / (d + 1) ** (2.0 / 3.0)
    radius = math.sqrt(0.5 + r)
    detail = {
        "threshold": threshold,
        "spike_branch_bound": threshold - 1 if threshold is not None else None,
        "no_spike_branch_bound": no_spike_bound,
        "ball_radius": radius,
    }
    n_obs = satisfied = None
    if points is not None:
        tol = _resolve_tol(points, tol)
        center, mer_radius, _ = min_enclosing_ball(points)
        if mer_radius > radius + max(tol.dist_tol, 1e-12):
            raise ValueError(
                f"enclosing radius {mer_radius:.12g} exceeds the stated ball radius {radius:.12g}"
            )
        detail["mer_radius"] = mer_radius
        n_obs = points.n
        satisfied = (n_obs <= bound) if bound is not None else None
    return BoundReport(
        theorem="ball",
        dim=d,
        params={"c0": c0},
        bound=bound,
        n_observed=n_obs,
        satisfied=satisfied,
        detail=detail,
    )


@dataclass(frozen=True)
class FStatistic:
    """Max absolute row sum of the defect matrix, with the raw row sums."""

    value: object
    argmax_index: int
    per_point_sums: tuple


def f_statistic(s: PointSet) -> FStatistic:
    u = defect_matrix(s)
    if s.mode == EXACT_MODE:
        sums = tuple(sum(row) for row in u.entries)
        absmax = max(abs(v) for v in sums)
        arg = next(i for i, v in enumerate(sums) if abs(v) == absmax)
        return FStatistic(value=absmax, argmax_index=arg, per_point_sums=sums)
    sums = u.array.sum(axis=1)
    arg = int(np.abs(sums).argmax())
    return FStatistic(
        value=float(np.abs(sums[arg])),
        argmax_index=arg,
        per_point_sums=tuple(float(v) for v in sums),
    )


@dataclass(frozen=True)
class RecentredNormBounds:
    max_deviation: float
    f_over_n_bound: float
    holds: bool
    f_value: float  # max |row sum|
    centered_defect: float  # max |row sum - 1|, the quantity the bound needs


def recentred_norm_bounds(
    s: PointSet, tol: Optional[Tolerance] = None
) -> RecentredNormBounds:
    """After recentring, |norm^2 - 1/2| is at most 3/(2n) times the
    centered row statistic max_i |row_sum_i - 1|.

    The shift by one accounts for the missing diagonal term of the row sum;
    without it the budget would be violated already by a unit simplex. Both
    statistics are reported.
    """
    tol = _resolve_tol(s, tol)
    n = s.n
    if s.mode == EXACT_MODE:
        if any(c != 0 for c in barycenter(s)):
            raise ValueError("set must be recentred to its barycenter")
        fs = f_statistic(s)
        centered = max(abs(v - 1) for v in fs.per_point_sums)
        half = Fraction(1, 2)
        max_dev = max(
            abs(sum(c * c for c in p) - half) for p in s.points
        )
        budget = Fraction(3, 2) * centered / n
        return RecentredNormBounds(
            max_deviation=float(max_dev),
            f_over_n_bound=float(budget),
            holds=max_dev <= budget,
            f_value=float(fs.value),
            centered_defect=float(centered),
        )
    x = s.array
    center = x.mean(axis=0)
    if float(np.abs(center).max()) > max(tol.dist_tol, 1e-12):
        raise ValueError("set must be recentred to its barycenter")
    fs = f_statistic(s)
    sums = np.array(fs.per_point_sums)
    centered = float(np.abs(sums - 1.0).max())
    norms_sq = np.einsum("ij,ij->i", x, x)
    max_dev = float(np.abs(norms_sq - 0.5).max())
    budget = 1.5 * centered / n
    return RecentredNormBounds(
        max_deviation=max_dev,
        f_over_n_bound=budget,
        holds=max_dev <= budget + tol.dist_tol,
        f_value=float(fs.value),
        centered_defect=centered,
    )


@dataclass(frozen=True)
class AnchorDefectReport:
    lhs: float
    rhs_scale: float  # sqrt(d) + d sqrt(x) + d x, without the unknown constant
    ratio: float
    kept: int
    discarded: int


def anchor_defect_ratio(
    s: PointSet,
    anchor_index: int,
    x: float,
    tol: Optional[Tolerance] = None,
) -> AnchorDefectReport:
    """Defect sum of one anchor point against a unit-simplex remainder.

    Preconditions: the set is almost equidistant, every squared norm is
    within x of 1/2, and after discarding points at unit distance from the
    anchor the remaining points are pairwise at unit distance (all at the
    caller's dist_tol). The statement's constant is unquantified, so only
    the ratio lhs / (sqrt(d) + d sqrt(x) + d x) is reported.
    """
    tol = _resolve_tol(s, tol)
    if not 0 <= anchor_index < s.n:
        raise ValueError("anchor index out of range")
    check = is_almost_equidistant(s, tol)
    if not check.ok:
        raise ValueError(f"set is not almost-equidistant, witness triple {check.witness}")
    if x < 0:
        raise ValueError("norm band x must be nonnegative")
    xarr = s.array
    norms_sq = np.einsum("ij,ij->i", xarr, xarr)
    worst = float(np.abs(norms_sq - 0.5).max())
    if worst > x + max(tol.dist_tol, 1e-15):
        raise ValueError(f"norm band violated: |norm^2 - 1/2| up to {worst:.3e} > x={x:.3e}")
    d2 = squared_distance_matrix(s)
    d2 = np.asarray(
        [[float(v) for v in row] for row in d2] if s.mode == EXACT_MODE else d2
    )
    slack = max(tol.dist_tol, 1e-15)
    others = [i for i in range(s.n) if i != anchor_index]
    kept = [i for i in others if abs(d2[anchor_index, i] - 1.0) > slack]
    for a in range(len(kept)):
        for b in range(a + 1, len(kept)):
            if abs(d2[kept[a], kept[b]] - 1.0) > slack:
                raise ValueError(
                    "points away from the anchor are not pairwise at unit distance "
                    f"(pair {kept[a]}, {kept[b]})"
                )
    lhs = abs(math.fsum(d2[anchor_index, i] - 1.0 for i in kept))
    rhs = math.sqrt(s.dim) + s.dim * math.sqrt(x) + s.dim * x
    return AnchorDefectReport(
        lhs=lhs,
        rhs_scale=rhs,
        ratio=lhs / rhs,
        kept=len(kept),
        discarded=len(others) - len(kept),
    )


def general_bound_pipeline(
    s: PointSet, tol: Optional[Tolerance] = None
) -> BoundReport:
    """Audit chain: verify, recentre, row statistic, norm band, ball branch.

    Concludes 2d + 4 whenever the recentred set fits in the critical ball of
    radius 1/sqrt(2); otherwise enters the small-excess ball regime if the
    implied c0 stays below 1/2, and reports no finite bound past that.
    """
    tol = _resolve_tol(s, tol)
    stages = []
    check = is_almost_equidistant(s, tol)
    stages.append({"name": "verify", "ok": check.ok, "witness": check.witness})
    if not check.ok:
        raise ValueError(f"set is not almost-equidistant, witness triple {check.witness}")
    centered = recenter_to_barycenter(s)
    stages.append({"name": "recenter", "ok": True})
    fs = f_statistic(centered)
    stages.append({"name": "row_statistic", "ok": True, "f": float(fs.value)})
    nb = recentred_norm_bounds(centered, tol)
    stages.append(
        {
            "name": "norm_band",
            "ok": nb.holds,
            "max_deviation": nb.max_deviation,
            "budget": nb.f_over_n_bound,
        }
    )
    n, d = s.n, s.dim
    x = centered.array
    radius_actual = math.sqrt(float(np.einsum("ij,ij->i", x, x).max()))
    radius_band = math.sqrt(0.5 + nb.f_over_n_bound)
    excess = radius_actual ** 2 - 0.5
    cert = certify(s, tol)
    stages.append({"name": "certificate", "ok": cert.lemma1_holds, "certificate": cert.as_dict()})
    detail = {
        "stages": stages,
        "radius_actual": radius_actual,
        "radius_from_band": radius_band,
    }
    if excess <= max(tol.dist_tol, 1e-12):
        branch = "critical_ball"
        bound = 2 * d + 4
    else:
        c0_implied = excess * (d + 1) ** (2.0 / 3.0)
        detail["c0_implied"] = c0_implied
        if c0_implied < 0.5:
            branch = "small_ball"
            threshold = ball_bound_threshold(d, c0_implied)
            detail["threshold"] = threshold
            bound = max(threshold - 1, 2 * d + 4) if threshold is not None else None
        else:
            branch = "out_of_regime"
            bound = None
    detail["branch"] = branch
    satisfied = (n <= bound) if bound is not None else None
    return BoundReport(
        theorem="general",
        dim=d,
        params={},
        bound=bound,
        n_observed=n,
        satisfied=satisfied,
        detail=detail,
    )
