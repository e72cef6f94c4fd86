import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

import aeq
from aeq import PointSet, Tolerance


def brute_triple_check(points, dist_tol=1e-9):
    """Oracle: walk every triple and demand a unit pair."""
    n = len(points)
    for i, j, k in itertools.combinations(range(n), 3):
        ok = False
        for a, b in ((i, j), (i, k), (j, k)):
            d2 = sum((p - q) ** 2 for p, q in zip(points[a], points[b]))
            if abs(d2 - 1.0) <= dist_tol:
                ok = True
                break
        if not ok:
            return False, (i, j, k)
    return True, None


def test_squared_distance_exact():
    p = (Fraction(3, 5), Fraction(4, 5))
    q = (Fraction(0), Fraction(0))
    d2 = aeq.squared_distance(p, q)
    assert d2 == 1
    assert isinstance(d2, Fraction)


def test_squared_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        aeq.squared_distance((0.0,), (0.0, 1.0))


def test_pointset_validation():
    with pytest.raises(ValueError):
        PointSet(dim=2, points=((0.0, 0.0), (1.0,)))
    with pytest.raises(ValueError):
        PointSet(dim=2, points=())
    with pytest.raises(ValueError):
        PointSet(dim=2, points=((0.0, 0.0),), mode="decimal")
    with pytest.raises(ValueError):
        PointSet(dim=1, points=((0.5,),), mode="exact")  # float coord in exact mode
    with pytest.raises(ValueError):
        PointSet(dim=0, points=((),))


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(dist_tol=-1e-9)
    assert Tolerance.exact().is_exact
    assert not Tolerance().is_exact


def test_unit_triangle_is_almost_equidistant(unit_triangle):
    chk = aeq.is_almost_equidistant(unit_triangle)
    assert chk.ok
    assert chk.witness is None


def test_collinear_non_unit_fails():
    s = PointSet.from_array([[0.0], [2.0], [5.0]])
    chk = aeq.is_almost_equidistant(s)
    assert not chk.ok
    assert chk.witness == (0, 1, 2)


def test_witness_is_first_in_index_order():
    # points 0,1,2,3 mutually non-unit: every triple fails, report (0,1,2)
    s = PointSet.from_array([[0.0], [0.3], [0.7], [9.0]])
    chk = aeq.is_almost_equidistant(s)
    assert chk.witness == (0, 1, 2)


def test_exact_mode_triple_condition(rhombus, zigzag):
    assert aeq.is_almost_equidistant(rhombus).ok
    assert aeq.is_almost_equidistant(zigzag).ok
    # perturb one coordinate so a triple loses its unit pair
    rows = [list(r) for r in zigzag.points]
    rows[1][0] += Fraction(1, 7)
    broken = PointSet.exact_rows(rows)
    assert not aeq.is_almost_equidistant(broken).ok


def test_small_sets_trivially_pass():
    assert aeq.is_almost_equidistant(PointSet.from_array([[0.0, 0.0]])).ok
    assert aeq.is_almost_equidistant(PointSet.from_array([[0.0], [5.0]])).ok


def test_triple_condition_matches_oracle_fuzz():
    rng = np.random.default_rng(20240811)
    for trial in range(120):
        n = int(rng.integers(3, 10))
        d = int(rng.integers(1, 4))
        pts = rng.normal(size=(n, d))
        if trial % 3 == 0:
            # plant unit pairs so both outcomes appear
            for i in range(0, n - 1, 2):
                v = pts[i + 1] - pts[i]
                pts[i + 1] = pts[i] + v / max(np.linalg.norm(v), 1e-12)
        s = PointSet.from_array(pts)
        got = aeq.is_almost_equidistant(s)
        want_ok, want_witness = brute_triple_check([tuple(p) for p in pts])
        assert got.ok == want_ok
        if not want_ok:
            assert got.witness == want_witness


def test_squared_distance_matrix_modes_agree(rhombus):
    exact = aeq.squared_distance_matrix(rhombus)
    floats = aeq.squared_distance_matrix(
        PointSet.from_array([[float(c) for c in row] for row in rhombus.points])
    )
    for i in range(rhombus.n):
        for j in range(rhombus.n):
            assert abs(float(exact[i][j]) - floats[i, j]) < 1e-12


def test_recenter_exact(rhombus):
    centered = aeq.recenter_to_barycenter(rhombus)
    assert all(c == 0 for c in aeq.barycenter(centered))
    # distances unchanged
    assert aeq.squared_distance_matrix(centered) == aeq.squared_distance_matrix(rhombus)


def test_recenter_float():
    rng = np.random.default_rng(7)
    s = PointSet.from_array(rng.normal(size=(9, 3)) + 5.0)
    centered = aeq.recenter_to_barycenter(s)
    assert max(abs(c) for c in aeq.barycenter(centered)) < 1e-12


def test_diameter_simplex():
    s = aeq.construct_simplex(4, 3)
    assert abs(aeq.diameter(s) - 1.0) < 1e-12


def test_summarize_triangle(unit_triangle):
    g = aeq.summarize(unit_triangle)
    assert abs(g.diameter - 1.0) < 1e-12
    # circumradius of the unit triangle
    assert abs(g.mer_radius - 1.0 / math.sqrt(3.0)) < 1e-9
    assert abs(g.mer_center[0] - 0.5) < 1e-9
    assert abs(g.mer_center[1] - 0.28867513459481287) < 1e-9


def test_barycenter_identity_float_fuzz():
    rng = np.random.default_rng(101)
    for _ in range(60):
        n = int(rng.integers(1, 9))
        d = int(rng.integers(1, 5))
        x = PointSet.from_array(rng.uniform(-2, 2, size=(n, d)))
        y = PointSet.from_array(rng.uniform(-2, 2, size=(n, d)))
        res = aeq.barycenter_identity_check(x, y)
        assert res < 1e-9 * max(1.0, n * n * d * 16.0)


def test_barycenter_identity_exact_is_zero(rhombus, zigzag):
    assert aeq.barycenter_identity_check(rhombus, zigzag) == 0


def test_barycenter_identity_size_mismatch(rhombus, unit_triangle):
    with pytest.raises(ValueError):
        aeq.barycenter_identity_check(rhombus, unit_triangle)
