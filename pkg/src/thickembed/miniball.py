"""Smallest enclosing ball of a point set (Welzl recursion with move-to-front).

The recursion is over the support set only (depth <= n + 1); the scan over
points is an explicit loop, so large inputs do not hit the recursion limit.
Deterministic for a given input order.
"""

import numpy as np


def _circumball(S):
    """Center and squared radius of the smallest ball with all of ``S`` on its boundary.

    ``S`` has shape (m, n) with affinely independent rows; the center lies in
    their affine hull.
    """
    m = S.shape[0]
    if m == 0:
        return None, -1.0
    if m == 1:
        return S[0].copy(), 0.0
    U = S[1:] - S[0]
    G = U @ U.T
    rhs = 0.5 * np.einsum("ij,ij->i", U, U)
    lam, *_ = np.linalg.lstsq(G, rhs, rcond=None)
    c = S[0] + lam @ U
    return c, float(np.max(np.sum((S - c) ** 2, axis=1)))


def _mtf(P, order, end, support, n, eps):
    c, r2 = _circumball(P[support]) if support else (None, -1.0)
    if len(support) == n + 1:
        return c, r2, order
    i = 0
    while i < end:
        idx = order[i:end]
        if c is None:
            out = np.array([0])
        else:
            d2 = np.sum((P[idx] - c) ** 2, axis=1)
            out = np.nonzero(d2 > r2 * (1 + eps) + eps)[0]
            if out.size == 0:
                break
        j = i + int(out[0])
        p = order[j]
        c, r2, order = _mtf(P, order, j, support + [p], n, eps)
        # move p to the front
        order = np.concatenate(([p], np.delete(order, j)))
        i = j + 1
    return c, r2, order


def minimal_enclosing_ball(points, eps=1e-12):
    """Return ``(center, radius)`` of the minimal ball containing ``points``.

    Parameters
    ----------
    points : array_like, shape (m, n)
    eps : float
        Relative slack when testing containment.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    m, n = P.shape
    if m == 0:
        raise ValueError("need at least one point")
    # centering improves conditioning of the circumball solves
    shift = P.mean(axis=0)
    Q = P - shift
    c, r2, _ = _mtf(Q, np.arange(m), m, [], n, eps)
    r = float(np.sqrt(max(r2, 0.0)))
    # guard against tolerance slack: ensure every point is covered
    r = max(r, float(np.sqrt(np.max(np.sum((Q - c) ** 2, axis=1)))))
    return c + shift, r
