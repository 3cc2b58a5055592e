"""Generators for test complexes: cycles, paths, random regular graphs, torus grids, icospheres."""

from __future__ import annotations

import re

import numpy as np

from .complex import SimplicialComplex, build_complex, load_profile
from .errors import SpecError


def cycle(V: int) -> SimplicialComplex:
    if V < 3:
        raise SpecError("cycle needs V >= 3")
    return build_complex([(i, (i + 1) % V) for i in range(V)], V)


def path(V: int) -> SimplicialComplex:
    if V < 1:
        raise SpecError("path needs V >= 1")
    return build_complex([(i, i + 1) for i in range(V - 1)], V, dim=1)


def random_regular_graph(V: int, degree: int, seed=0, max_tries: int = 10_000) -> SimplicialComplex:
    """Uniform simple ``degree``-regular graph by the pairing model with rejection."""
    if V * degree % 2:
        raise SpecError(f"V*degree must be even (V={V}, degree={degree})")
    if degree >= V or degree < 0:
        raise SpecError(f"degree {degree} infeasible for V={V}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(V), degree)
    for _ in range(max_tries):
        perm = rng.permutation(stubs).reshape(-1, 2)
        if np.any(perm[:, 0] == perm[:, 1]):
            continue
        e = np.sort(perm, axis=1)
        if len(np.unique(e[:, 0] * V + e[:, 1])) != len(e):
            continue
        return build_complex([tuple(x) for x in e.tolist()], V, dim=1)
    raise SpecError("pairing model did not produce a simple graph")


def torus_grid(a: int, b: int) -> SimplicialComplex:
    """Triangulated ``a x b`` torus: each grid square split along one diagonal."""
    if a < 3 or b < 3:
        raise SpecError("torus-grid needs a, b >= 3")
    vid = lambda i, j: (i % a) * b + (j % b)  # noqa: E731
    tris = []
    for i in range(a):
        for j in range(b):
            tris.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            tris.append((vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)))
    return build_complex(tris, a * b)


def icosphere(level: int = 0):
    """Icosahedron refined ``level`` times by midpoint splitting.

    Returns ``(complex, coords)`` with vertices on the unit sphere.
    """
    phi = (1 + 5**0.5) / 2
    V = [(-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
         (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
         (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1)]
    F = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
         (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
         (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
         (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    pts = [np.array(p, dtype=float) / np.linalg.norm(p) for p in V]
    for _ in range(level):
        mid = {}
        newF = []

        def m(i, j):
            key = (min(i, j), max(i, j))
            if key not in mid:
                p = pts[i] + pts[j]
                pts.append(p / np.linalg.norm(p))
                mid[key] = len(pts) - 1
            return mid[key]

        for i, j, k in F:
            a, b, c = m(i, j), m(j, k), m(k, i)
            newF += [(i, a, c), (j, b, a), (k, c, b), (a, b, c)]
        F = newF
    return build_complex(F, len(pts)), np.array(pts)


_SPEC = re.compile(r"^\s*([a-z\-]+)\s*\(\s*([0-9,\s]*)\)\s*$")


def parse_family_spec(spec: str):
    m = _SPEC.match(spec)
    if not m:
        raise SpecError(f"cannot parse family spec {spec!r}")
    name = m.group(1)
    args = [int(x) for x in m.group(2).replace(" ", "").split(",") if x]
    return name, args


def generate_family(spec: str, seed: int = 0):
    """Build a complex from a spec string and report its load bound.

    Accepted specs: ``random-regular-graph(V,degree)``, ``cycle(V)``,
    ``path(V)``, ``torus-grid(a,b)``, ``icosphere(level)``.
    Returns ``(complex, L)`` with ``L`` the self-counting max load.
    """
    name, args = parse_family_spec(spec)
    try:
        if name == "random-regular-graph":
            X = random_regular_graph(args[0], args[1], seed)
        elif name == "cycle":
            (V,) = args
            X = cycle(V)
        elif name == "path":
            (V,) = args
            X = path(V)
        elif name == "torus-grid":
            a, b = args
            X = torus_grid(a, b)
        elif name == "icosphere":
            (level,) = args
            X, _ = icosphere(level)
        else:
            raise SpecError(f"unknown family {name!r}")
    except (ValueError, IndexError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"bad arguments for {name}: {args}") from exc
    return X, load_profile(X).max_load
