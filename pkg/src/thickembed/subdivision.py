"""Edgewise subdivision of simplicial complexes.

Each maximal simplex ``(m_0 < ... < m_d)`` is cut into the ``t**d`` staircase
cells of the level-``t`` lattice.  Child vertices are identified by their
exact barycentric numerators over the carrier face, so cells coming from
different parents glue along shared faces without any floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .complex import SimplicialComplex, build_complex
from .errors import DegenerateSimplexError, ParameterError
from .geometry import EmbeddedComplex, is_degenerate, link_embedding
from .lattice import staircase_cells


@dataclass(frozen=True, eq=False)
class SubdivisionMap:
    """Correspondence between a complex and its edgewise subdivision.

    ``vertex_keys[c]`` is the child vertex ``c`` written as
    ``((parent_vertex, numerator), ...)`` over its carrier, numerators
    positive and summing to ``t``.  ``simplex_parent`` maps every child simplex
    to its carrier, the smallest parent simplex containing it.
    """

    parent: SimplicialComplex
    child: SimplicialComplex
    t: int
    vertex_keys: tuple
    simplex_parent: dict = field(repr=False)

    def vertex_coords(self, c: int):
        """``(carrier, numerators)`` of child vertex ``c`` (denominator ``t``)."""
        key = self.vertex_keys[c]
        return tuple(v for v, _ in key), tuple(a for _, a in key)

    @cached_property
    def key_index(self) -> dict:
        return {k: i for i, k in enumerate(self.vertex_keys)}

    def children_of(self, sigma, dim=None) -> list:
        """Child simplices whose carrier is exactly ``sigma`` (default: of the same dimension)."""
        sigma = tuple(sorted(sigma))
        if dim is None:
            dim = len(sigma) - 1
        return [c for c in self.child.faces[dim] if self.simplex_parent[c] == sigma] \
            if dim < len(self.child.faces) else []

    def restrict(self, sigma) -> set:
        """Child simplices inside ``sigma``, written with vertex keys."""
        sset = set(sigma)
        return {tuple(self.vertex_keys[v] for v in c)
                for c, p in self.simplex_parent.items() if set(p) <= sset}

    def is_interior(self, c: int) -> bool:
        """True if child vertex ``c`` lies in the relative interior of a top parent simplex."""
        carrier, _ = self.vertex_coords(c)
        return carrier in set(self.parent.maximal_simplices) and len(carrier) == self.parent.dim + 1


def edgewise_subdivide(X: SimplicialComplex, t: int) -> SubdivisionMap:
    """Level-``t`` edgewise subdivision of every maximal simplex of ``X``."""
    if not isinstance(t, (int, np.integer)) or t < 1:
        raise ParameterError(f"subdivision parameter must be an integer >= 1, got {t!r}")
    t = int(t)
    cells = []
    keys = set()
    for M in X.maximal_simplices:
        d = len(M) - 1
        for cell in staircase_cells(d, t):
            ck = tuple(tuple((M[i], int(a[i])) for i in range(d + 1) if a[i] > 0) for a in cell)
            cells.append(ck)
            keys.update(ck)
    ordered = sorted(keys, key=lambda k: (len(k), k))
    ids = {k: i for i, k in enumerate(ordered)}
    child = build_complex([[ids[k] for k in c] for c in cells], len(ordered), dim=X.dim)
    carrier = [tuple(v for v, _ in k) for k in ordered]
    parent_of = {}
    for s in child.simplices:
        parent_of[s] = tuple(sorted(set().union(*(carrier[v] for v in s))))
    return SubdivisionMap(X, child, t, tuple(ordered), parent_of)


def subdivide_embedding(E: EmbeddedComplex, smap: SubdivisionMap | int) -> EmbeddedComplex:
    """Place child vertices at the affine images of their barycentric coordinates.

    ``smap`` may be an integer ``t``, in which case the complex of ``E`` is
    subdivided first.
    """
    if not isinstance(smap, SubdivisionMap):
        smap = edgewise_subdivide(E.complex, smap)
    t = smap.t
    coords = np.empty((smap.child.n_vertices, E.n))
    for c, key in enumerate(smap.vertex_keys):
        verts = [v for v, _ in key]
        w = np.array([a for _, a in key], dtype=float) / t
        coords[c] = w @ E.coords[verts]
    return EmbeddedComplex(smap.child, coords)


def standard_simplex(d: int, side: float | None = None) -> EmbeddedComplex:
    """The regular ``d``-simplex on vertices ``e_0, ..., e_d`` of ``R^(d+1)``.

    Side length is sqrt(2) unless ``side`` is given.
    """
    X = build_complex([tuple(range(d + 1))], d + 1)
    C = np.eye(d + 1)
    if side is not None:
        C *= side / math.sqrt(2.0)
    return EmbeddedComplex(X, C)


def _edge_multiset(P):
    i, j = np.triu_indices(P.shape[0], k=1)
    return np.sort(np.linalg.norm(P[i] - P[j], axis=1))


def congruence_classes(point_sets, rtol=1e-9) -> list:
    """Group simplices by equal sorted edge-length multisets (relative tolerance)."""
    reps = []
    classes = []
    for k, P in enumerate(point_sets):
        ms = _edge_multiset(np.asarray(P, dtype=float))
        for r, rep in enumerate(reps):
            if rep.shape == ms.shape and np.all(np.abs(rep - ms) <= rtol * np.maximum(np.abs(rep), 1e-300)):
                classes[r].append(k)
                break
        else:
            reps.append(ms)
            classes.append([k])
    return classes


def isometry_class_count(smap: SubdivisionMap, E_child: EmbeddedComplex, sigma=None) -> int:
    """Number of congruence classes among child top simplices of parent ``sigma``.

    ``sigma`` defaults to the single maximal simplex of the parent.
    """
    if sigma is None:
        tops = smap.parent.maximal_simplices
        if len(tops) != 1:
            raise ParameterError("parent has several maximal simplices; pass sigma")
        sigma = tops[0]
    sigma = tuple(sorted(sigma))
    # parent coordinates are the child coordinates of its own vertices
    pverts = [smap.key_index[((v, smap.t),)] for v in sigma]
    if is_degenerate(E_child.coords[pverts]):
        raise DegenerateSimplexError(f"parent simplex {sigma} is degenerate")
    kids = smap.children_of(sigma)
    return len(congruence_classes([E_child.points(c) for c in kids]))


def child_volumes(smap: SubdivisionMap, E_child: EmbeddedComplex, sigma) -> list:
    from .geometry import cayley_menger_volume
    return [cayley_menger_volume(E_child.points(c)) for c in smap.children_of(sigma)]


# --- link isometry -----------------------------------------------------

def _vertex_link_config(E, v):
    emb = link_embedding(E, (v,))
    G = emb.vectors @ emb.vectors.T
    simps = {frozenset(s) for s in emb.link.simplices}
    return G, simps


def match_configurations(src, dst, tol=1e-6, injective_only=False):
    """Find a map of link vertices preserving inner products and link simplices.

    ``src`` and ``dst`` are ``(gram, simplices)`` pairs.  With
    ``injective_only`` the source may map onto part of the target; otherwise
    the map must be a bijection with simplices mapped onto simplices.
    Returns the assignment list or ``None``.
    """
    Gs, Ss = src
    Gd, Sd = dst
    m, M = Gs.shape[0], Gd.shape[0]
    if (not injective_only and m != M) or m > M:
        return None
    if not injective_only and len(Ss) != len(Sd):
        return None
    assign = [-1] * m
    used = [False] * M

    def consistent(i, j):
        for a in range(i):
            if abs(Gs[i, a] - Gd[j, assign[a]]) > tol:
                return False
        return True

    def simplices_ok():
        for s in Ss:
            if frozenset(assign[x] for x in s) not in Sd:
                return False
        return True

    def rec(i):
        if i == m:
            return simplices_ok()
        for j in range(M):
            if not used[j] and consistent(i, j):
                assign[i] = j
                used[j] = True
                if rec(i + 1):
                    return True
                used[j] = False
                assign[i] = -1
        return False

    return list(assign) if rec(0) else None


@dataclass
class LinkIsometryReport:
    status: str  # "ok", "failed" or "vacuous"
    interior_vertices: int
    pairwise_ok: bool
    boundary_ok: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status != "failed"


def interior_link_isometry_check(smap: SubdivisionMap, E_parent: EmbeddedComplex,
                                 tol: float = 1e-6) -> LinkIsometryReport:
    """Check that interior-vertex links agree and boundary links embed into them.

    Intended for a single embedded top simplex.  Links are compared as
    configurations of unit vectors with their simplicial structure; equal Gram
    matrices under a structure-preserving vertex bijection are equivalent to
    an orthogonal transformation between the configurations.
    """
    E = subdivide_embedding(E_parent, smap)
    interior = [c for c in range(smap.child.n_vertices) if smap.is_interior(c)]
    if not interior:
        return LinkIsometryReport("vacuous", 0, True, True)
    ref = _vertex_link_config(E, interior[0])
    failures = []
    for c in interior[1:]:
        if match_configurations(_vertex_link_config(E, c), ref, tol) is None:
            failures.append(("interior", c))
    pairwise_ok = not failures
    for c in range(smap.child.n_vertices):
        if c in interior or not smap.child.neighbors[c]:
            continue
        if match_configurations(_vertex_link_config(E, c), ref, tol, injective_only=True) is None:
            failures.append(("boundary", c))
    boundary_ok = all(kind != "boundary" for kind, _ in failures)
    status = "ok" if not failures else "failed"
    return LinkIsometryReport(status, len(interior), pairwise_ok, boundary_ok, failures)
