"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that the conftest prints at the end of
the session.  Criteria 6 and 7 share one scaling study (both families, six
vertex counts, 20 seeds) whose records are kept under ``results/``.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import ACCEPTANCE
from oracles import hull_distance_oracle
from test_io import complexes, embeddings
from test_perturb import _thickness_three, three_segments
from thickembed import (EmbeddedComplex, MetricSample, PlacementParams, build_complex, certify_net,
                        check_conditions, edgewise_subdivide, gg_thickness, greedy_net,
                        random_sphere_placement, run_pipeline, simplex_distance, subdivide_embedding,
                        thicken_perturb)
from thickembed.families import random_regular_graph
from thickembed.geometry import cayley_menger_volume, edge_length_stats, gg_thickness_bruteforce
from thickembed.io import (complex_from_dict, complex_to_dict, dumps_json, embedding_from_dict,
                           embedding_to_dict, format_emb, format_scx, parse_emb, parse_scx)
from thickembed.study import run_scaling_study
from thickembed.subdivision import (child_volumes, interior_link_isometry_check, isometry_class_count,
                                    standard_simplex)

RESULTS = Path(__file__).resolve().parent.parent / "results"
STUDY_GRID = [64, 128, 256, 512, 1024, 2048]
STUDY_SEEDS = list(range(20))
FAMILIES = {"cycle": "cycle({V})", "random-3-regular": "random-regular-graph({V},3)"}


def record(cid, ok, detail):
    ACCEPTANCE[cid] = (bool(ok), detail)
    print(f"criterion {cid}: {'PASS' if ok else 'FAIL'}  {detail}")


def _random_complex(rng):
    while True:
        k = int(rng.integers(1, 3))
        n = int(rng.integers(2, 6))
        V = int(rng.integers(4, 40))
        tops = [rng.choice(V, size=int(rng.integers(1, k + 2)), replace=False)
                for _ in range(int(rng.integers(1, 40)))]
        X = build_complex(tops, V, dim=k)
        if len(X.simplices) <= 300:
            break
    kind = rng.integers(0, 3)
    if kind == 0:
        P = rng.normal(size=(V, n))
    elif kind == 1:  # lattice coordinates produce exact ties
        P = rng.integers(-3, 4, size=(V, n)).astype(float)
    else:  # clustered, with scales spread over several orders of magnitude
        P = rng.normal(size=(V, n)) * 10.0 ** rng.uniform(-3, 2, size=(V, 1))
    return EmbeddedComplex(X, P)


def test_criterion_1_thickness_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20261018)
    bad = 0
    count = 250
    for _ in range(count):
        E = _random_complex(rng)
        g, b = gg_thickness(E), gg_thickness_bruteforce(E)
        same = g.value == b.value
        if same and g.value is not None:
            wd = simplex_distance(E.points(g.witness[0]), E.points(g.witness[1]))
            same = abs(wd - b.value) <= 1e-10
        bad += not same
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 300
    record(1, ok, f"{count} complexes, {bad} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_2_simplex_distance_oracle():
    rng = np.random.default_rng(7)
    worst = 0.0
    count = 1000
    for i in range(count):
        n = int(rng.integers(1, 8))
        a, b = (int(x) for x in rng.integers(1, 5, size=2))  # dimension <= 3
        A = rng.normal(size=(a, n))
        B = rng.normal(size=(b, n)) + rng.normal(size=n) * rng.uniform(0, 3)
        worst = max(worst, abs(simplex_distance(A, B) - hull_distance_oracle(A, B, seed=i)))
    ok = worst <= 1e-6
    record(2, ok, f"{count} pairs, max deviation {worst:.2e}")
    assert ok


def test_criterion_3_subdivision():
    t0 = time.perf_counter()
    fails = []
    for d in range(1, 4):
        E = standard_simplex(d)
        top = tuple(range(d + 1))
        vol = cayley_menger_volume(E.coords)
        bound = max(1, math.factorial(d) // 2)
        for t in range(1, 6):
            smap = edgewise_subdivide(E.complex, t)
            Ec = subdivide_embedding(E, smap)
            if len(smap.children_of(top)) != t**d:
                fails.append(("count", d, t))
            if isometry_class_count(smap, Ec) > bound:
                fails.append(("classes", d, t))
            if abs(sum(child_volumes(smap, Ec, top)) - vol) > 1e-9:
                fails.append(("volume", d, t))
            if d <= 2 and not interior_link_isometry_check(smap, E).ok:
                fails.append(("links", d, t))
    elapsed = time.perf_counter() - t0
    ok = not fails and elapsed < 60
    record(3, ok, f"d<=3, t<=5, failures {fails}, {elapsed:.1f}s")
    assert ok


def test_criterion_4_placement_certification():
    X = random_regular_graph(128, 3, 0)
    failed = []
    for seed in range(100):
        E, info = random_sphere_placement(X, PlacementParams(3, rng_seed=seed), return_info=True)
        rep = check_conditions(E, info["alpha0_final"], radius=info["radius"])
        if not (rep.cond1_ok and rep.cond2_ok):
            failed.append(seed)
    ok = not failed
    record(4, ok, f"100 placements of random-regular-graph(128,3), uncertified seeds {failed}")
    assert ok


def test_criterion_5_perturbation():
    bad = []
    for seed in range(100):
        X = random_regular_graph(24, 3, seed)
        E = subdivide_embedding(random_sphere_placement(X, PlacementParams(3, rng_seed=seed)), 2)
        tau = edge_length_stats(E)[0] / 4
        out = thicken_perturb(E, tau, rng_seed=seed)
        disp = float(np.sqrt(np.sum((out.coords - E.coords) ** 2, axis=1)).max())
        if disp > tau or gg_thickness(out).value < gg_thickness(E).value:
            bad.append(seed)
    fixture = thicken_perturb(three_segments(), 0.5, rng_seed=0)
    fx = _thickness_three(fixture.coords)
    ok = not bad and fx >= 0.2
    record(5, ok, f"100 runs, contract violations {bad}; three-segment thickness {fx:.4f}")
    assert ok


@pytest.fixture(scope="module")
def studies():
    out = {}
    for name, spec in FAMILIES.items():
        t0 = time.perf_counter()
        st = run_scaling_study(spec, 3, STUDY_GRID, STUDY_SEEDS, out_dir=RESULTS / name)
        out[name] = (st, time.perf_counter() - t0)
    return out


@pytest.mark.slow
def test_criterion_6_radius_scaling(studies):
    parts, ok = [], True
    total = sum(t for _, t in studies.values())
    for name, (st, _) in studies.items():
        slope = st.radius_fit.slope
        good = slope is not None and 0.30 <= slope <= 0.85 and st.monotone_medians
        ok &= good
        parts.append(f"{name}: slope {slope:.3f}, monotone medians {st.monotone_medians}")
    ok &= total < 7200
    record(6, ok, "; ".join(parts) + f"; {total / 60:.1f} min")
    assert ok


@pytest.mark.slow
def test_criterion_7_crossing_growth(studies):
    parts, ok = [], True
    for name, (st, _) in studies.items():
        fit = st.crossing_fit_medians
        med = st.median_max_crossing
        ratio = med[STUDY_GRID[-1]] / med[STUDY_GRID[0]]
        good = fit.r2 is not None and fit.r2 >= 0.6 and ratio < 4
        ok &= good
        parts.append(f"{name}: R2 {fit.r2:.3f}, slope {fit.slope:.2f}, ratio 2048/64 {ratio:.2f}")
    record(7, ok, "; ".join(parts))
    assert ok


def _random_metric(rng):
    m = int(rng.integers(1, 60))
    kind = rng.integers(0, 3)
    if kind == 0:
        return MetricSample.from_coords(rng.normal(size=(m, int(rng.integers(1, 4)))))
    if kind == 1:
        from scipy.sparse.csgraph import shortest_path

        W = rng.uniform(0.1, 2.0, size=(m, m))
        W = np.triu(W, 1) + np.triu(W, 1).T
        D = shortest_path(W, directed=False)
        return MetricSample.from_table(np.minimum(D, D.T))
    P = rng.random((m, 2))
    return MetricSample.from_callable(lambda i, j: float(np.abs(P[i] - P[j]).sum()), m)


def test_criterion_8_nets():
    rng = np.random.default_rng(8)
    failures, antitone_bad = 0, 0
    count = 600
    for _ in range(count):
        S = _random_metric(rng)
        eps = float(rng.uniform(0.05, 2.0))
        res = greedy_net(S, eps)
        cert = certify_net(S, res.center_indices, eps)
        failures += not (cert.packing_ok and cert.covering_ok)
        if S.point_count <= 50:
            sizes = [len(greedy_net(S, e).center_indices) for e in np.linspace(0.05, 3.0, 25)]
            antitone_bad += any(b > a for a, b in zip(sizes, sizes[1:]))
    ok = failures == 0 and antitone_bad == 0
    record(8, ok, f"{count} samples, certificate failures {failures}, antitone violations {antitone_bad}")
    assert ok


_roundtrip = {"scx": 0, "emb": 0, "json": 0}


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(complexes(max_v=15))
def _scx_roundtrip(X):
    assert parse_scx(format_scx(X)) == X
    assert complex_from_dict(json.loads(dumps_json(complex_to_dict(X)))) == X
    _roundtrip["scx"] += 1


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(embeddings())
def _emb_roundtrip(E):
    F = parse_emb(format_emb(E))
    G = embedding_from_dict(json.loads(dumps_json(embedding_to_dict(E))))
    assert F.complex == E.complex and np.array_equal(F.coords, E.coords)
    assert G.complex == E.complex and np.array_equal(G.coords, E.coords)
    _roundtrip["emb"] += 1


def test_criterion_9_determinism_and_roundtrip(tmp_path):
    X = random_regular_graph(64, 3, 4)
    runs = [dumps_json(run_pipeline(X, 3, PlacementParams(3, rng_seed=4), t_subdiv="auto").to_dict())
            for _ in range(2)]
    pipeline_same = runs[0] == runs[1]
    for tag in "ab":
        run_scaling_study("random-regular-graph({V},3)", 3, [32, 64], [0, 1, 2], out_dir=tmp_path / tag)
    csv_same = (tmp_path / "a" / "trials.csv").read_bytes() == (tmp_path / "b" / "trials.csv").read_bytes()
    _scx_roundtrip()
    _emb_roundtrip()
    enough = min(_roundtrip["scx"], _roundtrip["emb"]) >= 1000
    ok = pipeline_same and csv_same and enough
    record(9, ok, f"pipeline bytes equal {pipeline_same}, study CSV equal {csv_same}, "
                  f"round-trips scx {_roundtrip['scx']} emb/json {_roundtrip['emb']}")
    assert ok
