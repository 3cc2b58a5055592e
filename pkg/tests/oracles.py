"""Reference computations that share no code with the package."""

import itertools

import numpy as np
from scipy.optimize import minimize


def hull_distance_oracle(A, B, samples=10_000, seed=0, refine=4):
    """Distance between conv(A) and conv(B): barycentric sampling plus local refinement.

    The squared distance is convex in the barycentric coordinates, so an
    SLSQP polish from the best samples lands on the global minimum.
    """
    A = np.atleast_2d(np.asarray(A, float))
    B = np.atleast_2d(np.asarray(B, float))
    a, b = len(A), len(B)
    rng = np.random.default_rng(seed)
    wa = rng.dirichlet(np.ones(a), samples) if a > 1 else np.ones((samples, 1))
    wb = rng.dirichlet(np.ones(b), samples) if b > 1 else np.ones((samples, 1))
    # include the vertices themselves
    wa = np.vstack([wa, np.eye(a)[np.arange(a).repeat(b)]])
    wb = np.vstack([wb, np.tile(np.eye(b), (a, 1))])
    d2 = np.sum((wa @ A - wb @ B) ** 2, axis=1)
    best = float(d2.min())

    def f(z):
        r = z[:a] @ A - z[a:] @ B
        return float(r @ r)

    def g(z):
        r = z[:a] @ A - z[a:] @ B
        return np.concatenate([2 * A @ r, -2 * B @ r])

    cons = [{"type": "eq", "fun": lambda z: z[:a].sum() - 1, "jac": lambda z: np.r_[np.ones(a), np.zeros(b)]},
            {"type": "eq", "fun": lambda z: z[a:].sum() - 1, "jac": lambda z: np.r_[np.zeros(a), np.ones(b)]}]
    for i in np.argsort(d2)[:refine]:
        z0 = np.concatenate([wa[i], wb[i]])
        res = minimize(f, z0, jac=g, bounds=[(0, 1)] * (a + b), constraints=cons, method="SLSQP",
                       options={"ftol": 1e-16, "maxiter": 500})
        z = np.clip(res.x, 0, None)
        z[:a] /= z[:a].sum()
        z[a:] /= z[a:].sum()
        best = min(best, f(z))
    return float(np.sqrt(max(best, 0.0)))


def segment_grid_oracle(P0, P1, Q0, Q1, m=100):
    """Two-segment distance on an m-by-m parameter grid, then a finer grid around the best cell."""
    P0, P1, Q0, Q1 = (np.asarray(x, float) for x in (P0, P1, Q0, Q1))
    lo_s, hi_s, lo_t, hi_t = 0.0, 1.0, 0.0, 1.0
    best = np.inf
    for _ in range(8):
        s = np.linspace(lo_s, hi_s, m)
        t = np.linspace(lo_t, hi_t, m)
        X = P0 + s[:, None] * (P1 - P0)
        Y = Q0 + t[:, None] * (Q1 - Q0)
        D = np.linalg.norm(X[:, None, :] - Y[None, :, :], axis=-1)
        i, j = np.unravel_index(np.argmin(D), D.shape)
        best = min(best, float(D[i, j]))
        ws, wt = (hi_s - lo_s) / (m - 1), (hi_t - lo_t) / (m - 1)
        lo_s, hi_s = max(0.0, s[i] - 2 * ws), min(1.0, s[i] + 2 * ws)
        lo_t, hi_t = max(0.0, t[j] - 2 * wt), min(1.0, t[j] + 2 * wt)
    return best


def gg_oracle(simplices, coords):
    """All-pairs Gromov--Guth thickness with the sampling oracle for each pair."""
    best = np.inf
    for s, t in itertools.combinations(simplices, 2):
        if set(s) & set(t):
            continue
        best = min(best, hull_distance_oracle(coords[list(s)], coords[list(t)], samples=2000))
    return None if best == np.inf else best


def min_enclosing_radius_oracle(P):
    """Minimize the max distance to a center (convex), polished with SLSQP on (c, r)."""
    P = np.asarray(P, float)
    c0 = P.mean(axis=0)
    r0 = float(np.linalg.norm(P - c0, axis=1).max())
    n = P.shape[1]
    cons = {"type": "ineq", "fun": lambda z: z[n] ** 2 - np.sum((P - z[:n]) ** 2, axis=1)}
    res = minimize(lambda z: z[n], np.r_[c0, r0], constraints=[cons], method="SLSQP",
                   options={"ftol": 1e-15, "maxiter": 1000})
    return float(np.linalg.norm(P - res.x[:n], axis=1).max())
