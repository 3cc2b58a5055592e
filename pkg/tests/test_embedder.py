import json
import math

import numpy as np
import pytest

from thickembed import (EmbeddedComplex, PlacementParams, build_complex, check_conditions,
                        crossing_profile, gg_thickness, random_sphere_placement, run_pipeline)
from thickembed.embedder import auto_subdivision
from thickembed.errors import ParameterError, SaturationError
from thickembed.families import cycle, path, random_regular_graph
from thickembed.geometry import enclosing_radius
from thickembed.io import dumps_json


def test_one_vertex():
    X = build_complex([], 1)
    E = random_sphere_placement(X, PlacementParams(3, radius=2.0))
    assert np.linalg.norm(E.coords[0]) == pytest.approx(2.0, rel=1e-12)


def test_single_edge():
    X = build_complex([(0, 1)], 2)
    E = random_sphere_placement(X, PlacementParams(3, radius=1.0, alpha0=0.1, rng_seed=4))
    assert np.linalg.norm(E.coords[0] - E.coords[1]) >= 0.1
    assert np.allclose(np.linalg.norm(E.coords, axis=1), 1.0, atol=1e-9)


def test_k5_saturates():
    X = build_complex([(i, j) for i in range(5) for j in range(i + 1, 5)], 5)
    p = PlacementParams(3, radius=1.0, alpha0=1.999, max_resample_rounds=200, auto_alpha=False)
    with pytest.raises(SaturationError) as info:
        random_sphere_placement(X, p)
    assert info.value.constraint is not None


def test_auto_alpha_ladder():
    X = build_complex([(i, j) for i in range(5) for j in range(i + 1, 5)], 5)
    p = PlacementParams(3, radius=1.0, alpha0=1.9, max_resample_rounds=50)
    E, info = random_sphere_placement(X, p, return_info=True)
    assert info["alpha0_final"] < 1.9
    assert info["ladder"][0]["status"] == "saturated"
    assert info["ladder"][-1]["status"] == "ok"
    assert check_conditions(E, info["alpha0_final"], radius=1.0).ok


def test_params_validation():
    X = random_regular_graph(10, 3, 0)
    with pytest.raises(ParameterError):
        random_sphere_placement(X, PlacementParams(2))
    with pytest.raises(ParameterError):
        random_sphere_placement(X, PlacementParams(3, alpha0=2.5))
    with pytest.raises(ParameterError):
        random_sphere_placement(X, PlacementParams(3, radius=-1))


def test_default_radius():
    X = cycle(64)
    assert PlacementParams(3).resolved_radius(X) == pytest.approx(8.0)
    assert PlacementParams(5).resolved_radius(X) == pytest.approx(64 ** 0.25)


def test_placement_passes_certifier():
    X = random_regular_graph(40, 3, 2)
    E, info = random_sphere_placement(X, PlacementParams(3, rng_seed=2), return_info=True)
    rep = check_conditions(E, info["alpha0_final"], radius=info["radius"])
    assert rep.cond1_ok and rep.cond2_ok
    assert rep.sphere_deviation < 1e-9
    assert rep.dagger_ratio > 0


def test_placement_two_complex():
    X = build_complex([(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1), (5, 1, 2)], 6)
    E, info = random_sphere_placement(X, PlacementParams(5, rng_seed=1), return_info=True)
    assert check_conditions(E, info["alpha0_final"], radius=info["radius"]).ok


def test_hand_built_violation():
    X = build_complex([(0, 1)], 2)
    E = EmbeddedComplex(X, np.array([[1.0, 0, 0], [math.cos(0.05), math.sin(0.05), 0]]))
    rep = check_conditions(E, 0.1, radius=1.0)
    assert not rep.cond1_ok
    assert rep.cond1_witness == (0, 1)
    assert rep.cond1_min_edge < 0.1


def test_dagger_lower_bound_across_seeds():
    X = random_regular_graph(24, 3, 0)
    ratios = []
    for s in range(100):
        E, info = random_sphere_placement(X, PlacementParams(3, rng_seed=s), return_info=True)
        ratios.append(check_conditions(E, info["alpha0_final"], radius=info["radius"]).dagger_ratio)
    # adjacent pairs are forced apart; distance-2 pairs only by the link angle
    assert min(ratios) > 0


def test_crossing_profile_identities():
    X = random_regular_graph(30, 3, 1)
    E = random_sphere_placement(X, PlacementParams(3, rng_seed=1))
    prof = crossing_profile(E, radius=1.0)
    assert max(prof.per_color_max) <= prof.max_count <= sum(prof.per_color_max)


def test_crossing_profile_empty_region():
    # centers sit at 50 + 30 * m along each axis, 20 or more from both vertices
    X = build_complex([], 2)
    E = EmbeddedComplex(X, np.array([[0.0, 0, 0], [100.0, 0, 0]]))
    prof = crossing_profile(E, radius=1.0, sample_spec={"pitch": 30.0})
    assert prof.n_centers > 1
    assert prof.max_count == 0


def test_auto_subdivision():
    assert auto_subdivision(8.0, 4.0) == 2
    assert auto_subdivision(8.1, 4.0) == 3
    assert auto_subdivision(1.0, 4.0) == 1


def test_pipeline_path_normalized():
    res = run_pipeline(path(8), 3, PlacementParams(3, rng_seed=0), t_subdiv=2)
    assert res.report_final.gg_thickness == pytest.approx(1.0, abs=1e-9)
    assert res.report_final.min_link_thickness > 0
    assert res.radius_final == pytest.approx(res.scale * res.radius_pre, rel=1e-9)
    assert res.report_final.edge_min == pytest.approx(res.scale * res.report_post.edge_min, rel=1e-9)


def test_pipeline_composition_identity():
    X = cycle(4)
    p = PlacementParams(3, rng_seed=3)
    res = run_pipeline(X, 3, p, t_subdiv=1, tau=0.0)
    I0 = random_sphere_placement(X, p)
    assert np.array_equal(res.placement.coords, I0.coords)
    expected = enclosing_radius(I0) / gg_thickness(I0).value
    assert res.radius_final == pytest.approx(expected, rel=1e-9)


def test_pipeline_reproducible_bytes():
    X = random_regular_graph(16, 3, 0)
    a = run_pipeline(X, 3, PlacementParams(3, rng_seed=7), t_subdiv="auto")
    b = run_pipeline(X, 3, PlacementParams(3, rng_seed=7), t_subdiv="auto")
    assert dumps_json(a.to_dict()) == dumps_json(b.to_dict())
    json.loads(dumps_json(a.to_dict()))
