"""Exact Euclidean distances between convex hulls of small point sets.

All kernels are batched: inputs carry a leading axis of ``N`` independent
pairs and every output has that leading axis too.  Hulls have at most a
handful of vertices (simplices of dimension <= 3), so the general kernel
enumerates face pairs: the optimum of ``min |x - y|`` over two polytopes is
attained in the relative interiors of some pair of faces on which the
unconstrained affine least-squares problem is nonsingular.  Solving that
problem for every face pair and keeping the best feasible solution is an
exhaustive active-set method and is exact up to floating point.
Closed forms are used for point/segment combinations.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatchError

_FEAS_TOL = 1e-11
_SING_TOL = 1e-13


def point_point(P, Q):
    """Distances between rows of ``P`` and ``Q``, shape ``(N,)``."""
    return np.linalg.norm(P - Q, axis=-1)


def point_segment(P, Q0, Q1):
    """Distance from points ``P`` to segments ``[Q0, Q1]``.

    Returns ``(dist, t)`` with the closest point ``Q0 + t (Q1 - Q0)``.
    """
    d = Q1 - Q0
    dd = np.einsum("ij,ij->i", d, d)
    num = np.einsum("ij,ij->i", P - Q0, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(dd > 0, num / np.where(dd > 0, dd, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = Q0 + t[:, None] * d
    return np.linalg.norm(P - closest, axis=-1), t


def segment_segment(P0, P1, Q0, Q1):
    """Distance between segments ``[P0, P1]`` and ``[Q0, Q1]``.

    Returns ``(dist, s, t)``; closest points are ``P0 + s (P1 - P0)`` and
    ``Q0 + t (Q1 - Q0)``.  Clamped closed form with one extra alternating
    projection to stabilise nearly parallel pairs.
    """
    d1 = P1 - P0
    d2 = Q1 - Q0
    r = P0 - Q0
    a = np.einsum("ij,ij->i", d1, d1)
    e = np.einsum("ij,ij->i", d2, d2)
    f = np.einsum("ij,ij->i", d2, r)
    c = np.einsum("ij,ij->i", d1, r)
    b = np.einsum("ij,ij->i", d1, d2)
    # zero reciprocal for a point "segment" pins its parameter at 0
    with np.errstate(divide="ignore"):
        ia = np.where(a > 0, 1.0 / a, 0.0)
        ie = np.where(e > 0, 1.0 / e, 0.0)
    denom = a * e - b * b
    parallel = denom <= 1e-14 * a * e
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(parallel, 0.0, (b * f - c * e) / np.where(parallel, 1.0, denom))
    s = _unit(s) * (a > 0)
    for _ in range(2):
        t = _unit((b * s + f) * ie)
        s = _unit((b * t - c) * ia)
    t = _unit((b * s + f) * ie)
    diff = r + s[:, None] * d1 - t[:, None] * d2
    return np.sqrt(np.einsum("ij,ij->i", diff, diff)), s, t


def _unit(x):
    return np.minimum(np.maximum(x, 0.0), 1.0)


@lru_cache(maxsize=None)
def _face_pairs(a, b, n):
    fa = [I for r in range(1, a + 1) for I in itertools.combinations(range(a), r)]
    fb = [J for r in range(1, b + 1) for J in itertools.combinations(range(b), r)]
    return [(I, J) for I in fa for J in fb if len(I) + len(J) - 2 <= n]


def hull_distance_enum(A, B):
    """Face-enumeration kernel for arbitrary small hulls.

    Parameters
    ----------
    A : array, shape (N, a, n)
    B : array, shape (N, b, n)

    Returns
    -------
    dist : array, shape (N,)
    alpha : array, shape (N, a)
        Barycentric coordinates of the closest point in ``conv(A)``.
    beta : array, shape (N, b)
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    N, a, n = A.shape
    b = B.shape[1]
    best = np.full(N, np.inf)
    alpha = np.zeros((N, a))
    beta = np.zeros((N, b))
    scale = np.maximum(
        np.max(np.abs(A), axis=(1, 2)), np.max(np.abs(B), axis=(1, 2)))
    scale = np.where(scale > 0, scale, 1.0)
    for I, J in _face_pairs(a, b, n):
        c = A[:, I[0]] - B[:, J[0]]
        cols = [A[:, i] - A[:, I[0]] for i in I[1:]] + [B[:, J[0]] - B[:, j] for j in J[1:]]
        m = len(cols)
        al = np.zeros((N, a))
        be = np.zeros((N, b))
        if m == 0:
            al[:, I[0]] = 1.0
            be[:, J[0]] = 1.0
            d = np.linalg.norm(c, axis=1)
            ok = np.ones(N, dtype=bool)
        else:
            M = np.stack(cols, axis=1)  # (N, m, n)
            G = np.einsum("kin,kjn->kij", M, M)
            rhs = -np.einsum("kin,kn->ki", M, c)
            ev = np.linalg.eigvalsh(G)
            ok = ev[:, 0] > _SING_TOL * np.maximum(ev[:, -1], 1e-300)
            ok &= ev[:, -1] > 1e-24 * scale**2
            if not ok.any():
                continue
            z = np.zeros((N, m))
            z[ok] = np.linalg.solve(G[ok], rhs[ok][..., None])[..., 0]
            s = z[:, : len(I) - 1]
            u = z[:, len(I) - 1:]
            ca = np.concatenate([1.0 - s.sum(axis=1, keepdims=True), s], axis=1)
            cb = np.concatenate([1.0 - u.sum(axis=1, keepdims=True), u], axis=1)
            ok &= (ca.min(axis=1) >= -_FEAS_TOL) & (cb.min(axis=1) >= -_FEAS_TOL)
            ca = np.clip(ca, 0.0, None)
            cb = np.clip(cb, 0.0, None)
            ca /= ca.sum(axis=1, keepdims=True)
            cb /= cb.sum(axis=1, keepdims=True)
            al[:, list(I)] = ca
            be[:, list(J)] = cb
            x = np.einsum("ka,kan->kn", al, A)
            y = np.einsum("kb,kbn->kn", be, B)
            d = np.linalg.norm(x - y, axis=1)
        better = ok & (d < best)
        best = np.where(better, d, best)
        alpha[better] = al[better]
        beta[better] = be[better]
    return best, alpha, beta


def hull_distance(A, B):
    """Batched hull distance with closed forms for point/segment shapes.

    Same signature and return values as :func:`hull_distance_enum`.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.ndim != 3 or B.ndim != 3 or A.shape[0] != B.shape[0]:
        raise ValueError("expected arrays of shape (N, a, n) and (N, b, n)")
    if A.shape[2] != B.shape[2]:
        raise DimensionMismatchError(f"ambient dims {A.shape[2]} != {B.shape[2]}")
    N, a, _ = A.shape
    b = B.shape[1]
    one = np.ones((N, 1))
    if a == 1 and b == 1:
        return point_point(A[:, 0], B[:, 0]), one, one.copy()
    if a == 1 and b == 2:
        d, t = point_segment(A[:, 0], B[:, 0], B[:, 1])
        return d, one, np.stack([1 - t, t], axis=1)
    if a == 2 and b == 1:
        d, t = point_segment(B[:, 0], A[:, 0], A[:, 1])
        return d, np.stack([1 - t, t], axis=1), one
    if a == 2 and b == 2:
        d, s, t = segment_segment(A[:, 0], A[:, 1], B[:, 0], B[:, 1])
        return d, np.stack([1 - s, s], axis=1), np.stack([1 - t, t], axis=1)
    return hull_distance_enum(A, B)


def simplex_distance(A, B) -> float:
    """Minimum Euclidean distance between ``conv(A)`` and ``conv(B)``.

    ``A`` and ``B`` are sequences of points in the same ``R^n``.  Returns 0
    when the hulls intersect.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[0] == 0 or B.shape[0] == 0:
        raise ValueError("point sets must be nonempty")
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchError(f"ambient dims {A.shape[1]} != {B.shape[1]}")
    d, _, _ = hull_distance(A[None], B[None])
    return float(d[0])


def padded_pair_distance(coords, simp, size, ia, ib, want_bary=False):
    """Distances between simplex pairs given as rows of a padded index table.

    Parameters
    ----------
    coords : array, shape (V, n)
    simp : int array, shape (S, kmax+1)
        Vertex ids, padded with -1.
    size : int array, shape (S,)
        Number of vertices per simplex.
    ia, ib : int arrays, shape (P,)
        Simplex ids of the pairs.

    Returns ``dist`` of shape ``(P,)`` and, if ``want_bary``, padded barycentric
    arrays of shape ``(P, kmax+1)`` for each side.
    """
    ia = np.asarray(ia, dtype=np.intp)
    ib = np.asarray(ib, dtype=np.intp)
    P = ia.shape[0]
    K = simp.shape[1]
    dist = np.empty(P)
    if want_bary:
        ba = np.zeros((P, K))
        bb = np.zeros((P, K))
    if P == 0:
        return (dist, ba, bb) if want_bary else dist
    sa = size[ia]
    sb = size[ib]
    key = sa * (K + 1) + sb
    for kv in np.unique(key):
        rows = np.nonzero(key == kv)[0]
        a, b = divmod(int(kv), K + 1)
        A = coords[simp[ia[rows], :a]]
        B = coords[simp[ib[rows], :b]]
        d, al, be = hull_distance(A, B)
        dist[rows] = d
        if want_bary:
            ba[rows, :a] = al
            bb[rows, :b] = be
    return (dist, ba, bb) if want_bary else dist
