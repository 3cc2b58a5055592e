"""Metric measurements on straight-line embedded complexes.

Gromov--Guth thickness is the minimum distance between images of simplices
that share no vertex.  Link thickness is the same notion transplanted to the
unit sphere of the normal space of a simplex, measured in angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .complex import SimplicialComplex, link
from .distance import hull_distance, padded_pair_distance, simplex_distance
from .errors import (
    DegenerateLinkError,
    DegenerateSimplexError,
    DimensionMismatchError,
    ParameterError,
)
from .lattice import lattice_points, staircase_cells
from .miniball import minimal_enclosing_ball

DEGENERACY_TOL = 1e-12
SAMPLE_BUDGET = 250_000


@dataclass(frozen=True, eq=False)
class EmbeddedComplex:
    """A complex together with vertex coordinates in ``R^n``.

    Each simplex is mapped to the convex hull of its vertex images.
    """

    complex: SimplicialComplex
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.ndim == 1:
            c = c.reshape(-1, 1) if self.complex.n_vertices else c.reshape(0, 1)
        if c.shape[0] != self.complex.n_vertices:
            raise DimensionMismatchError(
                f"{c.shape[0]} coordinate rows for {self.complex.n_vertices} vertices")
        if c.shape[1] < 1:
            raise DimensionMismatchError("ambient dimension must be >= 1")
        if not np.all(np.isfinite(c)):
            raise ValueError("coordinates must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return self.coords.shape[1]

    @cached_property
    def table(self):
        """Padded simplex table ``(simp, size)``; rows follow ``complex.simplices``."""
        X = self.complex
        K = max(X.dim + 1, 1)
        simp = np.full((len(X.simplices), K), -1, dtype=np.intp)
        size = np.empty(len(X.simplices), dtype=np.intp)
        for i, s in enumerate(X.simplices):
            simp[i, : len(s)] = s
            size[i] = len(s)
        simp.setflags(write=False)
        size.setflags(write=False)
        return simp, size

    def points(self, simplex) -> np.ndarray:
        return self.coords[list(simplex)]

    def with_coords(self, coords) -> "EmbeddedComplex":
        return EmbeddedComplex(self.complex, coords)

    def scaled(self, factor: float) -> "EmbeddedComplex":
        return EmbeddedComplex(self.complex, self.coords * factor)


# --- small helpers -----------------------------------------------------

def unit_angle(u, v):
    """Angle between unit vectors, stable near 0 and pi. Works row-wise."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return 2.0 * np.arctan2(np.linalg.norm(u - v, axis=-1), np.linalg.norm(u + v, axis=-1))


def is_degenerate(points) -> bool:
    """True when the Gram matrix of edge vectors is numerically singular."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.shape[0] <= 1:
        return False
    E = P[1:] - P[0]
    diff = P[:, None, :] - P[None, :, :]
    longest2 = float(np.max(np.sum(diff**2, axis=-1)))
    if longest2 == 0.0:
        return True
    ev = np.linalg.eigvalsh(E @ E.T)
    return bool(ev[0] < DEGENERACY_TOL * longest2)


def _degenerate_mask(coords, simp, size):
    out = np.zeros(len(size), dtype=bool)
    for a in np.unique(size):
        if a <= 1:
            continue
        rows = np.nonzero(size == a)[0]
        P = coords[simp[rows, :a]]
        E = P[:, 1:] - P[:, :1]
        G = np.einsum("kin,kjn->kij", E, E)
        diff = P[:, :, None, :] - P[:, None, :, :]
        longest2 = np.max(np.sum(diff**2, axis=-1), axis=(1, 2))
        ev = np.linalg.eigvalsh(G)[:, 0]
        out[rows] = (longest2 == 0) | (ev < DEGENERACY_TOL * longest2)
    return out


def disjoint_mask(simp, ia, ib):
    """Rows where simplices ``ia`` and ``ib`` share no vertex."""
    A = simp[ia]
    B = simp[ib]
    share = (A[:, :, None] == B[:, None, :]) & (A[:, :, None] >= 0)
    return ~share.any(axis=(1, 2))


# --- sampling and near-pair search --------------------------------------

def _diameters(coords, simp, size):
    diam = np.zeros(len(size))
    for a in np.unique(size):
        if a <= 1:
            continue
        rows = np.nonzero(size == a)[0]
        P = coords[simp[rows, :a]]
        diff = P[:, :, None, :] - P[:, None, :, :]
        diam[rows] = np.sqrt(np.max(np.sum(diff**2, axis=-1), axis=(1, 2)))
    return diam


def sample_simplices(coords, simp, size, h, ids=None, budget=SAMPLE_BUDGET):
    """Lattice samples on each simplex with covering radius at most ``h``.

    The spacing is enlarged when the sample count would exceed ``budget``.
    Returns ``(points, owner, h_used)``.
    """
    if ids is None:
        ids = np.arange(len(size))
    ids = np.asarray(ids, dtype=np.intp)
    sz = size[ids]
    diam = _diameters(coords, simp[ids], sz)
    h = float(h)
    if h <= 0 or not np.isfinite(h):
        h = float(diam.max()) if diam.size and diam.max() > 0 else 1.0
    while True:
        m = np.where(sz > 1, np.maximum(1, np.ceil(diam / h)), 0).astype(np.int64)
        counts = np.array([math.comb(int(mm) + int(a) - 1, int(a) - 1) if a > 1 else 1
                           for mm, a in zip(m, sz)]) if ids.size else np.zeros(0)
        if counts.sum() <= budget:
            break
        h *= 1.5
    pts = []
    owner = []
    keys = sz * 1_000_003 + m
    for key in np.unique(keys):
        rows = np.nonzero(keys == key)[0]
        a = int(sz[rows[0]])
        mm = int(m[rows[0]])
        if a == 1:
            pts.append(coords[simp[ids[rows], 0]])
            owner.append(ids[rows])
            continue
        bary = np.array(lattice_points(a - 1, mm), dtype=float) / mm
        P = coords[simp[ids[rows], :a]]
        S = np.einsum("la,kan->kln", bary, P)
        pts.append(S.reshape(-1, coords.shape[1]))
        owner.append(np.repeat(ids[rows], bary.shape[0]))
    if not pts:
        return np.zeros((0, coords.shape[1])), np.zeros(0, dtype=np.intp), h
    return np.concatenate(pts), np.concatenate(owner), h


class _BallIndex:
    """Bounding balls of simplices, grouped by radius for near-pair search.

    Every simplex gets the ball around its vertex mean that holds all its
    vertices.  Balls whose radii differ by less than a factor of two share a
    class with its own k-d tree over centers, so a query between two classes
    uses a search radius close to the true one even when simplex sizes span
    many orders of magnitude.
    """

    def __init__(self, E: EmbeddedComplex, ids=None):
        self.E = E
        self.simp, self.size = E.table
        S = len(self.size)
        ids = np.arange(S) if ids is None else np.unique(np.asarray(ids, dtype=np.intp))
        center = np.zeros((S, E.coords.shape[1]))
        rad = np.zeros(S)
        for a in np.unique(self.size[ids]):
            rows = ids[self.size[ids] == a]
            P = E.coords[self.simp[rows, :a]]
            c = P.mean(axis=1)
            center[rows] = c
            rad[rows] = np.sqrt(np.max(np.sum((P - c[:, None, :]) ** 2, axis=-1), axis=1))
        self.center, self.rad = center, rad
        pos = rad[ids] > 0
        cls = np.full(ids.size, np.iinfo(np.int64).min)
        cls[pos] = np.floor(np.log2(rad[ids][pos])).astype(np.int64)
        self.classes = []
        for c in np.unique(cls):
            rows = ids[cls == c]
            self.classes.append((rows, float(rad[rows].max()), cKDTree(center[rows])))

    def _candidates(self, r: float):
        out = []
        for x, (ra, ma, ta) in enumerate(self.classes):
            for rb, mb, tb in self.classes[x:]:
                R = (ma + mb + r) * (1 + 1e-9)
                if ta is tb:
                    sp = ta.query_pairs(R, output_type="ndarray")
                    i, j = ra[sp[:, 0]], ra[sp[:, 1]]
                else:
                    m = ta.sparse_distance_matrix(tb, R, output_type="ndarray")
                    i, j = ra[m["i"]], rb[m["j"]]
                if i.size:
                    gap = np.linalg.norm(self.center[i] - self.center[j], axis=1)
                    keep = gap <= (self.rad[i] + self.rad[j] + r) * (1 + 1e-9)
                    out.append(np.stack([np.minimum(i, j)[keep], np.maximum(i, j)[keep]]))
        if not out:
            return np.zeros(0, dtype=np.intp), np.zeros(0, dtype=np.intp)
        ia, ib = np.concatenate(out, axis=1)
        return ia.astype(np.intp), ib.astype(np.intp)

    def pairs(self, r: float):
        """All disjoint simplex pairs at distance ``<= r`` (needs ``r >= 0``)."""
        ia, ib = self._candidates(r)
        if ia.size:
            S = len(self.size)
            code = np.unique(ia.astype(np.int64) * S + ib)
            ia = (code // S).astype(np.intp)
            ib = (code % S).astype(np.intp)
            dj = disjoint_mask(self.simp, ia, ib)
            ia, ib = ia[dj], ib[dj]
        d = padded_pair_distance(self.E.coords, self.simp, self.size, ia, ib)
        ok = d <= r
        return ia[ok], ib[ok], d[ok]


def near_pairs(E: EmbeddedComplex, r: float, ids=None):
    """All disjoint simplex pairs at distance ``<= r``.

    Candidates are pairs whose bounding balls come within ``r`` of each
    other, so the search is exhaustive.  ``ids`` restricts both members of a
    pair to the given simplices.  Returns ``(ia, ib, dist)`` with ``ia < ib``,
    sorted by pair.
    """
    return _BallIndex(E, ids=ids).pairs(r)


def all_disjoint_pairs(E: EmbeddedComplex):
    simp, _ = E.table
    S = simp.shape[0]
    ia, ib = np.triu_indices(S, k=1)
    dj = disjoint_mask(simp, ia, ib)
    return ia[dj], ib[dj]


# --- Gromov--Guth thickness ---------------------------------------------

@dataclass(frozen=True)
class GGThickness:
    """Minimum distance over vertex-disjoint simplex pairs.

    ``value`` is ``None`` when the complex has no disjoint pair.
    """

    value: Optional[float]
    witness: Optional[tuple] = None


def _pick_witness(E, ia, ib, d):
    if d.size == 0:
        return GGThickness(None)
    m = d.min()
    hits = np.nonzero(d == m)[0]
    # lowest simplex ids win ties so both code paths agree
    j = hits[np.lexsort((ib[hits], ia[hits]))[0]]
    X = E.complex
    return GGThickness(float(m), (X.simplices[ia[j]], X.simplices[ib[j]]))


def gg_thickness_bruteforce(E: EmbeddedComplex, chunk: int = 200_000) -> GGThickness:
    """Reference implementation: distance of every disjoint pair."""
    simp, size = E.table
    ia, ib = all_disjoint_pairs(E)
    d = np.empty(ia.size)
    for s in range(0, ia.size, chunk):
        d[s:s + chunk] = padded_pair_distance(E.coords, simp, size, ia[s:s + chunk], ib[s:s + chunk])
    return _pick_witness(E, ia, ib, d)


def gg_thickness(E: EmbeddedComplex) -> GGThickness:
    """Gromov--Guth thickness with k-d tree pruning.

    The closest pair of distinct vertices gives an upper bound ``U``.  The
    search radius grows from ``U / 64`` until some pair is found, at which
    point every pair closer than the radius has been seen.
    """
    V = E.complex.n_vertices
    if V < 2:
        return GGThickness(None)
    dd, _ = cKDTree(E.coords).query(E.coords, k=2)
    U = float(dd[:, 1].min())  # two distinct vertices form a disjoint pair
    index = _BallIndex(E)
    cap = U * (1 + 1e-9)  # the closest vertex pair must survive rounding
    r = U / 64.0
    while True:
        ia, ib, d = index.pairs(r)
        if d.size or r >= cap:
            return _pick_witness(E, ia, ib, d)
        r = min(4.0 * r, cap)


# --- links ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SphericalLinkEmbedding:
    """Induced embedding of ``lk sigma`` into the unit sphere of the normal space.

    ``vectors[i]`` is the unit vector of link vertex ``i`` (ambient coordinates,
    orthogonal to the directions of ``aff(sigma)``); ``link`` is the link complex
    and ``parent`` maps its simplices to cofaces of ``sigma``.
    """

    base: tuple
    sphere_dim: int
    vectors: np.ndarray
    link: SimplicialComplex
    parent: dict

    @property
    def link_simplices(self) -> list:
        return [tuple(map(tuple, self.vectors[list(s)])) for s in self.link.simplices]

    def vectors_of(self, link_simplex) -> np.ndarray:
        return self.vectors[list(link_simplex)]


def normal_projector(points):
    """Orthogonal projector onto the complement of the direction space of ``aff(points)``."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    n = P.shape[1]
    if P.shape[0] == 1:
        return np.eye(n)
    if is_degenerate(P):
        raise DegenerateSimplexError("base simplex is degenerate")
    Q, _ = np.linalg.qr((P[1:] - P[0]).T)
    return np.eye(n) - Q @ Q.T


def link_embedding(E: EmbeddedComplex, sigma) -> SphericalLinkEmbedding:
    sigma = tuple(sorted(sigma))
    lk, parent = link(E.complex, sigma)
    base = E.points(sigma)
    proj = normal_projector(base)
    b = base.mean(axis=0)
    verts = [_link_vertex(parent, i, sigma) for i in range(lk.n_vertices)]
    raw = (E.coords[verts] - b) @ proj if verts else np.zeros((0, E.n))
    norms = np.linalg.norm(raw, axis=1)
    scale = max(float(np.max(np.linalg.norm(E.coords[verts] - b, axis=1))), 1e-300) if verts else 1.0
    if verts and norms.min() <= DEGENERACY_TOL * scale:
        raise DegenerateLinkError(f"link vertex of {sigma} projects to zero")
    vecs = raw / norms[:, None] if verts else raw
    return SphericalLinkEmbedding(sigma, E.n - len(sigma), vecs, lk, parent)


def _link_vertex(parent, i, sigma):
    (v,) = [u for u in parent[(i,)] if u not in sigma]
    return v


def spherical_hull_angle(U, W, tol=1e-4, grid=16, max_pairs=400_000, max_levels=60):
    """Certified minimum angle between the radial projections of ``conv(U)`` and ``conv(W)``.

    Branch and bound over barycentric cells.  A cell whose image vertices lie
    within angle ``rho < pi/2`` of their normalised centroid maps into the
    spherical cap of that radius (the cap's cone is convex), so
    ``angle(cA, cB) - rhoA - rhoB`` bounds a cell pair from below, while the
    centroid angle is attained and bounds the optimum from above.  Starts
    from a level-``grid`` lattice (``grid + 1`` points per edge) and halves
    cells until the gap closes below ``tol``.

    Returns ``(lower, upper)`` with ``lower <= true <= upper`` and, on normal
    termination, ``upper - lower <= tol``.
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    W = np.atleast_2d(np.asarray(W, dtype=float))
    for S in (U, W):
        if S.shape[0] > 1 and simplex_distance(S, np.zeros((1, S.shape[1]))) <= 1e-12:
            raise DegenerateLinkError("link simplex spans a line through the origin")
    U = U / np.linalg.norm(U, axis=1, keepdims=True)
    W = W / np.linalg.norm(W, axis=1, keepdims=True)
    p, q = U.shape[0] - 1, W.shape[0] - 1
    if p == 0 and q == 0:
        a = float(unit_angle(U[0], W[0]))
        return a, a
    ca0 = staircase_cells(p, grid).astype(float) / grid
    cb0 = staircase_cells(q, grid).astype(float) / grid
    ia, ib = np.meshgrid(np.arange(len(ca0)), np.arange(len(cb0)), indexing="ij")
    CA = ca0[ia.ravel()]
    CB = cb0[ib.ravel()]
    split_a = staircase_cells(p, 2).astype(float) / 2
    split_b = staircase_cells(q, 2).astype(float) / 2
    best_ub = np.inf
    lb_discarded = np.inf

    def caps(C, S):
        X = C @ S
        c = X.sum(axis=1)
        c /= np.linalg.norm(c, axis=1, keepdims=True)
        Xn = X / np.linalg.norm(X, axis=2, keepdims=True)
        cosr = np.einsum("kin,kn->ki", Xn, c).min(axis=1)
        rho = np.where(cosr > 0, unit_angle(Xn, c[:, None, :]).max(axis=1), np.pi)
        return c, rho

    for _ in range(max_levels):
        cA, rA = caps(CA, U)
        cB, rB = caps(CB, W)
        ang = unit_angle(cA, cB)
        best_ub = min(best_ub, float(ang.min()))
        lb = np.maximum(ang - rA - rB, 0.0)
        done = lb >= best_ub - tol
        if done.any():
            lb_discarded = min(lb_discarded, float(lb[done].min()))
        keep = ~done
        if not keep.any():
            return min(lb_discarded, best_ub), best_ub
        CA, CB, rA, rB = CA[keep], CB[keep], rA[keep], rB[keep]
        if len(CA) * max(len(split_a), len(split_b)) > max_pairs:
            break
        grow_a = rA >= rB
        na, nb = len(split_a), len(split_b)
        # children of the side with the larger cap
        A1 = np.einsum("cij,kjl->kcil", split_a, CA[grow_a]).reshape(-1, p + 1, p + 1)
        B1 = np.repeat(CB[grow_a], na, axis=0)
        B2 = np.einsum("cij,kjl->kcil", split_b, CB[~grow_a]).reshape(-1, q + 1, q + 1)
        A2 = np.repeat(CA[~grow_a], nb, axis=0)
        CA = np.concatenate([A1, A2])
        CB = np.concatenate([B1, B2])
    cA, rA = caps(CA, U)
    cB, rB = caps(CB, W)
    lb = np.maximum(unit_angle(cA, cB) - rA - rB, 0.0)
    return min(lb_discarded, float(lb.min())), best_ub


@dataclass(frozen=True)
class LinkThickness:
    """Minimum angle between disjoint link simplices.

    ``value`` is a certified lower bound (``None`` when the link has no
    disjoint pair); ``upper`` is an attained angle, ``upper - value <= 1e-4``.
    ``witness`` names the two link simplices by their cofaces of ``sigma``.
    """

    value: Optional[float]
    witness: Optional[tuple] = None
    upper: Optional[float] = None


def link_thickness(E: EmbeddedComplex, sigma, tol: float = 1e-4, skip_point_pairs=False) -> LinkThickness:
    emb = link_embedding(E, sigma)
    lk = emb.link
    simps = lk.simplices
    best = (np.inf, None, None)
    npts = lk.n_vertices
    if npts >= 2 and not skip_point_pairs:
        i, j = np.triu_indices(npts, k=1)
        ang = unit_angle(emb.vectors[i], emb.vectors[j])
        m = int(np.argmin(ang))
        best = (float(ang[m]), ((i[m],), (j[m],)), float(ang[m]))
    higher = [s for s in simps if len(s) > 1]
    for s in higher:
        ss = set(s)
        for t in simps:
            if set(t) & ss:
                continue
            if len(t) > 1 and t < s:
                continue  # unordered pair already visited
            lo, hi = spherical_hull_angle(emb.vectors_of(s), emb.vectors_of(t), tol=tol)
            if lo < best[0]:
                best = (lo, (s, t), hi)
    if best[1] is None:
        return LinkThickness(None)
    s, t = best[1]
    return LinkThickness(best[0], (emb.parent[tuple(s)], emb.parent[tuple(t)]), best[2])


def _vertex_point_link_angles(E: EmbeddedComplex):
    """Angles between every pair of edges at a common vertex, vectorized.

    Returns ``(angles, v, w1, w2)``.
    """
    X = E.complex
    vs, w1s, w2s = [], [], []
    for v, nb in enumerate(X.neighbors):
        if len(nb) < 2:
            continue
        a, b = np.triu_indices(len(nb), k=1)
        nb = np.asarray(nb)
        vs.append(np.full(a.size, v))
        w1s.append(nb[a])
        w2s.append(nb[b])
    if not vs:
        z = np.zeros(0, dtype=np.intp)
        return np.zeros(0), z, z, z
    v = np.concatenate(vs)
    w1 = np.concatenate(w1s)
    w2 = np.concatenate(w2s)
    C = E.coords
    d1 = C[w1] - C[v]
    d2 = C[w2] - C[v]
    n1 = np.linalg.norm(d1, axis=1)
    n2 = np.linalg.norm(d2, axis=1)
    if (n1 == 0).any() or (n2 == 0).any():
        raise DegenerateLinkError("zero-length edge at a vertex link")
    ang = unit_angle(d1 / n1[:, None], d2 / n2[:, None])
    return ang, v, w1, w2


def min_link_thickness(E: EmbeddedComplex, tol: float = 1e-4, simplices=None) -> tuple:
    """Minimum link thickness over ``simplices`` (default: every simplex).

    Returns ``(value, sigma, LinkThickness)``; ``value`` is ``None`` if no
    link has a disjoint pair.
    """
    X = E.complex
    best = (None, None, LinkThickness(None))
    if simplices is None:
        ang, v, w1, w2 = _vertex_point_link_angles(E)
        if ang.size:
            m = int(np.argmin(ang))
            s = (int(v[m]),)
            wit = (tuple(sorted((s[0], int(w1[m])))), tuple(sorted((s[0], int(w2[m])))))
            best = (float(ang[m]), s, LinkThickness(float(ang[m]), wit, float(ang[m])))
        todo = [s for s in X.simplices if (len(s) > 1 or X.dim - len(s) >= 1) and len(s) <= X.dim]
        skip_vertex_points = True
    else:
        todo = [tuple(sorted(s)) for s in simplices]
        skip_vertex_points = False
    for s in todo:
        if len(s) > 1 and not X.cofaces(s):
            continue
        lt = link_thickness(E, s, tol=tol, skip_point_pairs=skip_vertex_points and len(s) == 1)
        if lt.value is not None and (best[0] is None or lt.value < best[0]):
            best = (lt.value, s, lt)
    return best


# --- edges, crossings, quality, enclosing ball ---------------------------

def edge_length_stats(E: EmbeddedComplex):
    """``(edge_min, edge_max)`` over edges, or ``None`` when there are no edges."""
    edges = E.complex.edges
    if not edges:
        return None
    e = np.asarray(edges)
    L = np.linalg.norm(E.coords[e[:, 0]] - E.coords[e[:, 1]], axis=1)
    return float(L.min()), float(L.max())


def point_simplex_distances(E: EmbeddedComplex, centers, sids):
    """Distances from ``centers[i]`` to simplex ``sids[i]`` (batched)."""
    simp, size = E.table
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    sids = np.asarray(sids, dtype=np.intp)
    out = np.empty(len(sids))
    for a in np.unique(size[sids]):
        rows = np.nonzero(size[sids] == a)[0]
        A = centers[rows][:, None, :]
        B = E.coords[simp[sids[rows], :a]]
        out[rows] = hull_distance(A, B)[0]
    return out


def ball_crossing_count(E: EmbeddedComplex, center, radius: float) -> int:
    """Number of simplices (all dimensions) within ``radius`` of ``center``."""
    if radius <= 0:
        raise ParameterError("radius must be positive")
    S = len(E.complex.simplices)
    c = np.asarray(center, dtype=float).reshape(1, -1)
    if c.shape[1] != E.n:
        raise DimensionMismatchError("center dimension differs from the ambient dimension")
    d = point_simplex_distances(E, np.repeat(c, S, axis=0), np.arange(S))
    return int(np.count_nonzero(d <= radius))


def crossing_counts(E: EmbeddedComplex, centers, radius: float, colors=None, n_colors=None):
    """Crossing counts for many ball centers at once.

    Parameters
    ----------
    centers : array, shape (C, n)
    colors : int array over simplices, optional
        When given, also returns per-color counts of shape ``(C, n_colors)``.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    C = centers.shape[0]
    simp, size = E.table
    pts, owner, h = sample_simplices(E.coords, simp, size, radius / 2.0)
    counts = np.zeros(C, dtype=np.int64)
    per = None
    if colors is not None:
        per = np.zeros((C, n_colors), dtype=np.int64)
    if C == 0 or pts.shape[0] == 0:
        return counts, per
    ct = cKDTree(centers)
    st = cKDTree(pts)
    sm = ct.sparse_distance_matrix(st, radius + h, output_type="ndarray")
    if sm.size == 0:
        return counts, per
    S = len(size)
    code = np.unique(sm["i"].astype(np.int64) * S + owner[sm["j"]])
    ci = code // S
    si = code % S
    d = point_simplex_distances(E, centers[ci], si)
    hit = d <= radius
    counts = np.bincount(ci[hit], minlength=C)
    if colors is not None:
        col = np.asarray(colors)[si[hit]]
        per = np.bincount(ci[hit] * n_colors + col, minlength=C * n_colors).reshape(C, n_colors)
    return counts, per


def sample_centers(E: EmbeddedComplex, sample_spec: dict, max_centers: int = 3_000_000):
    """Ball centers inside the enclosing ball of ``E``.

    ``sample_spec`` is ``{"pitch": p}`` for a cubic lattice anchored at the
    enclosing-ball center, or ``{"count": m, "seed": s}`` for uniform samples.
    """
    c, R = minimal_enclosing_ball(E.coords)
    n = E.n
    if "pitch" in sample_spec:
        p = float(sample_spec["pitch"])
        if p <= 0:
            raise ParameterError("pitch must be positive")
        k = int(math.floor(R / p + 1e-9))
        if (2 * k + 1) ** n > max_centers * 4:
            raise ParameterError("lattice too fine for the enclosing ball")
        ax = np.arange(-k, k + 1) * p
        grid = np.stack(np.meshgrid(*([ax] * n), indexing="ij"), axis=-1).reshape(-1, n)
        grid = grid[np.sum(grid**2, axis=1) <= R * R * (1 + 1e-12) + 1e-24]
        return grid + c
    if "count" in sample_spec:
        m = int(sample_spec["count"])
        rng = np.random.default_rng(sample_spec.get("seed", 0))
        g = rng.standard_normal((m, n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = R * rng.random(m) ** (1.0 / n)
        return c + g * r[:, None]
    raise ParameterError("sample_spec needs 'pitch' or 'count'")


def max_crossing(E: EmbeddedComplex, radius: float, sample_spec: dict):
    """``(max_count, argmax_center)`` over sampled centers; ties go to the first center."""
    centers = sample_centers(E, sample_spec)
    counts, _ = crossing_counts(E, centers, radius)
    if counts.size == 0:
        return 0, None
    j = int(np.argmax(counts))
    return int(counts[j]), centers[j]


def simplex_quality(points) -> float:
    """Least vertex altitude over the opposite face divided by the longest edge.

    Zero for degenerate simplices.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    d = P.shape[0] - 1
    if d < 1:
        raise ParameterError("quality is undefined for a single point")
    if is_degenerate(P):
        return 0.0
    diff = P[:, None, :] - P[None, :, :]
    longest = float(np.sqrt(np.max(np.sum(diff**2, axis=-1))))
    alt = np.inf
    for i in range(d + 1):
        face = np.delete(P, i, axis=0)
        v = P[i] - face[0]
        if d > 1:
            Q, _ = np.linalg.qr((face[1:] - face[0]).T)
            v = v - Q @ (Q.T @ v)
        alt = min(alt, float(np.linalg.norm(v)))
    return alt / longest


def cayley_menger_volume(points) -> float:
    """d-volume of a simplex from its pairwise distances (Cayley--Menger)."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    m = P.shape[0]
    d = m - 1
    if d == 0:
        return 1.0
    D2 = np.sum((P[:, None, :] - P[None, :, :]) ** 2, axis=-1)
    CM = np.ones((m + 1, m + 1))
    CM[0, 0] = 0.0
    CM[1:, 1:] = D2
    det = np.linalg.det(CM)
    v2 = (-1) ** (d + 1) * det / (2**d * math.factorial(d) ** 2)
    return math.sqrt(max(v2, 0.0))


def enclosing_radius(E: EmbeddedComplex) -> float:
    return minimal_enclosing_ball(E.coords)[1]


def degenerate_simplices(E: EmbeddedComplex) -> list:
    simp, size = E.table
    mask = _degenerate_mask(E.coords, simp, size)
    return [E.complex.simplices[i] for i in np.nonzero(mask)[0]]


def validity(E: EmbeddedComplex):
    """``(ok, reason)``: injective iff no simplex is degenerate and thickness > 0."""
    bad = degenerate_simplices(E)
    if bad:
        return False, f"degenerate simplex {bad[0]}"
    gg = gg_thickness(E)
    if gg.value is not None and gg.value <= 0:
        return False, f"disjoint simplices {gg.witness} intersect"
    return True, "ok"


# --- report ----------------------------------------------------------------

@dataclass
class ThicknessReport:
    gg_thickness: Optional[float]
    witness: Optional[list]
    min_link_thickness: Optional[float]
    link_witness: Optional[dict]
    edge_min: Optional[float]
    edge_max: Optional[float]
    enclosing_radius: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "gg_thickness": self.gg_thickness,
            "witness": self.witness,
            "min_link_thickness": self.min_link_thickness,
            "link_witness": self.link_witness,
            "edge_min": self.edge_min,
            "edge_max": self.edge_max,
            "enclosing_radius": self.enclosing_radius,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["gg_thickness"], d["witness"], d["min_link_thickness"],
                   d.get("link_witness"), d["edge_min"], d["edge_max"], d["enclosing_radius"])


def thickness_report(E: EmbeddedComplex, links: bool = True) -> ThicknessReport:
    gg = gg_thickness(E)
    lval, lsig, lt = min_link_thickness(E) if links else (None, None, None)
    es = edge_length_stats(E)
    link_wit = None
    if lval is not None:
        link_wit = {"sigma": list(lsig), "pair": [list(x) for x in lt.witness], "upper": lt.upper}
    return ThicknessReport(
        gg_thickness=gg.value,
        witness=[list(s) for s in gg.witness] if gg.witness else None,
        min_link_thickness=lval,
        link_witness=link_wit,
        edge_min=es[0] if es else None,
        edge_max=es[1] if es else None,
        enclosing_radius=enclosing_radius(E),
    )
