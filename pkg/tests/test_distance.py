import numpy as np
import pytest

from oracles import hull_distance_oracle, segment_grid_oracle
from thickembed.distance import segment_segment, simplex_distance
from thickembed.errors import DimensionMismatchError
from thickembed.miniball import minimal_enclosing_ball


def test_point_point():
    assert simplex_distance([(0, 0)], [(3, 4)]) == pytest.approx(5.0, abs=1e-12)


def test_segment_point_collinear():
    assert simplex_distance([(0, 0), (1, 0)], [(2, 0)]) == pytest.approx(1.0, abs=1e-12)


def test_triangle_point_offset():
    tri = [(0, 0, 0), (1, 0, 0), (0, 1, 0)]
    assert simplex_distance(tri, [(0, 0, 2)]) == pytest.approx(2.0, abs=1e-12)


def test_skew_segments_against_grid():
    A = [(0, 0), (1, 1)]
    B = [(1, 0), (2, -1)]
    ref = segment_grid_oracle(*A, *B)
    assert simplex_distance(A, B) == pytest.approx(ref, abs=1e-6)
    assert ref == pytest.approx(np.sqrt(2) / 2, abs=1e-6)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        simplex_distance([(0, 0)], [(0, 0, 0)])


def test_intersecting_hulls_give_zero():
    assert simplex_distance([(-1, 0), (1, 0)], [(0, -1), (0, 1)]) == 0.0
    tri = [(0, 0, 0), (2, 0, 0), (0, 2, 0)]
    assert simplex_distance(tri, [(0.5, 0.5, -1), (0.5, 0.5, 1)]) == pytest.approx(0.0, abs=1e-12)


def test_zero_length_segments():
    P = np.array([[0.0, 0, 0]])
    Q = np.array([[0.0, 0, 1]])
    d, s, t = segment_segment(P, P, Q, Q + [[1.0, 0, 0]])
    assert d[0] == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(40))
def test_random_pairs_match_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    a, b = rng.integers(1, min(n, 3) + 2, size=2)
    A = rng.normal(size=(a, n))
    B = rng.normal(size=(b, n)) + rng.normal(size=n) * rng.random() * 3
    d = simplex_distance(A, B)
    assert d == pytest.approx(hull_distance_oracle(A, B), abs=1e-6)
    assert d == pytest.approx(simplex_distance(B, A), abs=1e-12)


def test_isometry_invariance():
    rng = np.random.default_rng(7)
    A, B = rng.normal(size=(3, 4)), rng.normal(size=(4, 4)) + 2
    Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    shift = rng.normal(size=4)
    assert simplex_distance(A @ Q + shift, B @ Q + shift) == pytest.approx(simplex_distance(A, B), abs=1e-10)


def test_miniball_examples():
    assert minimal_enclosing_ball([[1.0, 2.0]])[1] == 0.0
    c, r = minimal_enclosing_ball([[0.0, 0.0], [2.0, 0.0]])
    assert r == pytest.approx(1.0) and np.allclose(c, [1, 0])
    c, r = minimal_enclosing_ball([[0.0, 0], [1, 0], [1, 1], [0, 1]])
    assert r == pytest.approx(np.sqrt(2) / 2, abs=1e-8)


@pytest.mark.parametrize("seed", range(15))
def test_miniball_against_optimizer(seed):
    from oracles import min_enclosing_radius_oracle

    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(1, 5))
    P = rng.normal(size=(int(rng.integers(2, 40)), n))
    c, r = minimal_enclosing_ball(P)
    assert np.all(np.linalg.norm(P - c, axis=1) <= r * (1 + 1e-9) + 1e-12)
    assert r == pytest.approx(min_enclosing_radius_oracle(P), abs=1e-6)
