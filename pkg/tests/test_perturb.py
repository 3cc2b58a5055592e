import numpy as np
import pytest

from thickembed import EmbeddedComplex, build_complex, gg_thickness, thicken_perturb
from thickembed.distance import segment_segment
from thickembed.errors import ParameterError
from thickembed.families import random_regular_graph
from thickembed.embedder import PlacementParams, random_sphere_placement
from thickembed.subdivision import subdivide_embedding


def three_segments(gap=0.01):
    X = build_complex([(0, 1), (2, 3), (4, 5)], 6)
    xs = [0.0, 1.0, 1.0 + gap, 2.0 + gap, 2.0 + 2 * gap, 3.0 + 2 * gap]
    return EmbeddedComplex(X, np.array([[x, 0.0, 0.0] for x in xs]))


def _thickness_three(P):
    """All vertex-disjoint pairs of the three-segment complex, by hand."""
    segs = [(0, 1), (2, 3), (4, 5)]
    best = np.inf
    for a in range(3):
        for b in range(a + 1, 3):
            (p, q), (r, s) = segs[a], segs[b]
            best = min(best, segment_segment(P[[p]], P[[q]], P[[r]], P[[s]])[0][0])
    for s, (p, q) in enumerate(segs):  # two ends of one segment are disjoint too
        best = min(best, float(np.linalg.norm(P[p] - P[q])))
        for t, (r, u) in enumerate(segs):
            if t != s:
                for v in (r, u):
                    best = min(best, segment_segment(P[[p]], P[[q]], P[[v]], P[[v]])[0][0])
    return best


def test_three_segment_oracle_and_optimizer():
    E = three_segments()
    tau = 0.5
    # brute force over rigid offsets of the middle segment inside the tau ball
    g = np.linspace(-tau, tau, 41)
    best = 0.0
    for oy in g:
        for oz in g:
            for ox in np.linspace(-0.1, 0.1, 5):
                o = np.array([ox, oy, oz])
                if np.linalg.norm(o) > tau:
                    continue
                P = E.coords.copy()
                P[2:4] += o
                best = max(best, _thickness_three(P))
    assert best >= 0.2
    out, stats = thicken_perturb(E, tau, rng_seed=0, return_stats=True)
    assert _thickness_three(out.coords) >= 0.2
    assert gg_thickness(out).value == pytest.approx(_thickness_three(out.coords), abs=1e-12)
    assert stats["max_displacement"] <= tau


def test_tau_zero_identity():
    E = three_segments()
    out = thicken_perturb(E, 0.0)
    assert np.array_equal(out.coords, E.coords)


def test_negative_tau():
    with pytest.raises(ParameterError):
        thicken_perturb(three_segments(), -1.0)


def test_already_thick_is_unchanged():
    X = build_complex([(0, 1), (2, 3)], 4)
    E = EmbeddedComplex(X, np.array([[0.0, 0, 0], [1, 0, 0], [0, 5, 0], [1, 5, 0]]))
    out = thicken_perturb(E, 0.1)
    assert np.array_equal(out.coords, E.coords)
    assert gg_thickness(out).value == gg_thickness(E).value


def _subdivided_placement(seed, V=32, t=3):
    X = random_regular_graph(V, 3, seed)
    E0 = random_sphere_placement(X, PlacementParams(3, rng_seed=seed))
    return subdivide_embedding(E0, t)


@pytest.mark.parametrize("seed", range(6))
def test_contract_on_random_graphs(seed):
    E = _subdivided_placement(seed)
    from thickembed.geometry import edge_length_stats

    tau = edge_length_stats(E)[0] / 4
    out, stats = thicken_perturb(E, tau, rng_seed=seed, return_stats=True)
    disp = np.sqrt(np.sum((out.coords - E.coords) ** 2, axis=1))
    assert disp.max() <= tau
    assert gg_thickness(out).value >= gg_thickness(E).value
    assert stats["final_min"] >= stats["initial_min"]


def test_deterministic():
    E = _subdivided_placement(3)
    a = thicken_perturb(E, 0.2, rng_seed=5)
    b = thicken_perturb(E, 0.2, rng_seed=5)
    assert np.array_equal(a.coords, b.coords)


def test_monotone_along_budget():
    E = _subdivided_placement(1)
    prev = gg_thickness(E).value
    for budget in (50, 200, 800, 3200):
        cur = gg_thickness(thicken_perturb(E, 0.2, budget=budget, rng_seed=1)).value
        assert cur >= prev - 1e-15
        prev = cur


def test_two_dimensional_complex():
    rng = np.random.default_rng(0)
    X = build_complex([(0, 1, 2), (3, 4, 5), (1, 3, 6)], 7)
    P = rng.normal(size=(7, 5))
    P[3:6] = P[0:3] + 0.01 * rng.normal(size=(3, 5)) + 0.02
    E = EmbeddedComplex(X, P)
    out = thicken_perturb(E, 0.1, rng_seed=0)
    assert np.sqrt(np.sum((out.coords - P) ** 2, axis=1)).max() <= 0.1
    assert gg_thickness(out).value >= gg_thickness(E).value
