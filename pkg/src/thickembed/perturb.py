"""Thickening by bounded vertex moves.

A local search over single-vertex moves.  Each vertex stays inside the ball
of radius ``tau`` around its input position.  A move is accepted only if the
smallest distance among the pairs it touches either rises, or stays at or
above the current global minimum while a log barrier over close pairs
decreases.  Either way thickness never goes down.  Every point of a simplex moves by at most ``tau``, so a
pair can only come within ``c`` if it started within ``c + 2 tau``; one
neighbor list built on the input therefore stays exhaustive for the whole run.
"""

from __future__ import annotations

import numpy as np

from .distance import padded_pair_distance, segment_segment
from .errors import DegenerateLinkError, DegenerateSimplexError, ParameterError
from .geometry import EmbeddedComplex, link_thickness, near_pairs, simplex_quality, unit_angle


def _norm(x):
    # one formula everywhere, so the displacement test is reproducible to the bit
    return np.sqrt(np.sum(x * x, axis=-1))


def _project(p, center, tau):
    """Closest point of the closed ``tau`` ball, guaranteed inside in floating point."""
    off = p - center
    nrm = float(_norm(off))
    if nrm <= tau:
        return p
    f = tau / nrm
    q = center + off * f
    while float(_norm(q - center)) > tau:
        f *= 1.0 - 1e-14
        q = center + off * f
    return q


class _PairList:
    """Verlet list of disjoint simplex pairs within ``radius``."""

    def __init__(self, E, radius, stars):
        self.ia, self.ib, self.d = near_pairs(E, radius)
        S = len(E.table[1])
        keys = np.concatenate([self.ia, self.ib])
        vals = np.concatenate([np.arange(self.ia.size)] * 2)
        order = np.argsort(keys, kind="stable")
        self.vals = vals[order]
        self.starts = np.searchsorted(keys[order], np.arange(S + 1))
        self.stars = stars
        self._cache = {}

    def of_vertex(self, v):
        got = self._cache.get(v)
        if got is None:
            parts = [self.vals[self.starts[s]:self.starts[s + 1]] for s in self.stars[v]]
            got = np.unique(np.concatenate(parts)) if parts else np.zeros(0, dtype=np.intp)
            self._cache[v] = got
        return got


def _barrier(d, c):
    with np.errstate(divide="ignore"):
        return float(np.sum(np.where(d < c, np.log(c / np.maximum(d, 0.0)), 0.0)))


class _Guards:
    """Shape constraints that keep the moved embedding away from degeneracy."""

    def __init__(self, E, edge_floor, angle_floor, quality_floor, link_floor):
        X = E.complex
        C = E.coords
        V = X.n_vertices
        e = np.asarray(X.edges, dtype=np.intp).reshape(-1, 2)
        self.E = E
        self.edges = e
        self.emin = edge_floor * np.linalg.norm(C[e[:, 0]] - C[e[:, 1]], axis=1)
        self.edges_at = [[] for _ in range(V)]
        for i, (a, b) in enumerate(e.tolist()):
            self.edges_at[a].append(i)
            self.edges_at[b].append(i)
        self.edges_at = [np.asarray(x, dtype=np.intp) for x in self.edges_at]
        tri = [(v, nb[i], nb[j]) for v, nb in enumerate(X.neighbors)
               for i in range(len(nb)) for j in range(i + 1, len(nb))]
        self.tri = np.asarray(tri, dtype=np.intp).reshape(-1, 3)
        at = [[] for _ in range(V)]
        for i, t in enumerate(self.tri.tolist()):
            for u in set(t):
                at[u].append(i)
        self.tri_at = [np.asarray(x, dtype=np.intp) for x in at]
        self.angle_min = 0.0
        if len(self.tri):
            self.angle_min = angle_floor * float(self._angles(C, np.arange(len(self.tri))).min())
        # higher-dimensional shape guards, only for complexes of dimension >= 2
        self.quality = {}
        self.links = []
        self.links_at = [[] for _ in range(V)]
        self.link_min = 0.0
        if X.dim >= 2:
            for s in X.simplices:
                if len(s) >= 3:
                    self.quality[s] = quality_floor * simplex_quality(C[list(s)])
            vals = []
            for s in X.simplices:
                if len(s) <= X.dim and X.cofaces(s) and (len(s) > 1 or X.dim - len(s) >= 1):
                    lt = link_thickness(E, s, skip_point_pairs=len(s) == 1)
                    if lt.value is None:
                        continue
                    vals.append(lt.value)
                    gi = len(self.links)
                    self.links.append(s)
                    star = set(s)
                    for c in X.cofaces(s):
                        star.update(c)
                    for u in star:
                        self.links_at[u].append(gi)
            if vals:
                self.link_min = link_floor * min(vals)
        self.star_simplices = [[X.simplices[i] for i in st if len(X.simplices[i]) >= 3]
                               for st in X.vertex_star]

    def _angles(self, C, idx):
        v, a, b = self.tri[idx].T
        d1 = C[a] - C[v]
        d2 = C[b] - C[v]
        n1 = np.linalg.norm(d1, axis=1)
        n2 = np.linalg.norm(d2, axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            ang = unit_angle(d1 / n1[:, None], d2 / n2[:, None])
        return np.where((n1 > 0) & (n2 > 0), ang, 0.0)

    def ok(self, C, v) -> bool:
        ei = self.edges_at[v]
        if ei.size:
            e = self.edges[ei]
            if np.any(np.linalg.norm(C[e[:, 0]] - C[e[:, 1]], axis=1) < self.emin[ei]):
                return False
        ti = self.tri_at[v]
        if ti.size and np.any(self._angles(C, ti) < self.angle_min):
            return False
        for s in self.star_simplices[v]:
            if simplex_quality(C[list(s)]) < self.quality[s]:
                return False
        if self.links_at[v]:
            E = EmbeddedComplex(self.E.complex, C)
            for gi in self.links_at[v]:
                s = self.links[gi]
                try:
                    lt = link_thickness(E, s, skip_point_pairs=len(s) == 1)
                except (DegenerateLinkError, DegenerateSimplexError):
                    return False
                if lt.value is not None and lt.value < self.link_min:
                    return False
        return True


class _Evaluator:
    """Pair distances for the pairs touched by one vertex.

    For complexes of dimension <= 1 every simplex is a (possibly
    degenerate) segment and a single segment kernel call covers all pairs.
    """

    def __init__(self, simp, size, pl):
        self.simp, self.size, self.pl = simp, size, pl
        self.fast = simp.shape[1] <= 2
        if self.fast:
            seg = simp.copy()
            if seg.shape[1] == 1:
                seg = np.concatenate([seg, seg], axis=1)
            seg[:, 1] = np.where(seg[:, 1] >= 0, seg[:, 1], seg[:, 0])
            self.seg = seg

    def distances(self, P, idx):
        ia, ib = self.pl.ia[idx], self.pl.ib[idx]
        if self.fast:
            A, B = self.seg[ia], self.seg[ib]
            return segment_segment(P[A[:, 0]], P[A[:, 1]], P[B[:, 0]], P[B[:, 1]])[0]
        return padded_pair_distance(P, self.simp, self.size, ia, ib)

    def push_direction(self, P, v, idx):
        """Sum over close pairs of the separating direction weighted by ``1 / d**2``."""
        ia, ib = self.pl.ia[idx], self.pl.ib[idx]
        if self.fast:
            A, B = self.seg[ia], self.seg[ib]
            _, s, t = segment_segment(P[A[:, 0]], P[A[:, 1]], P[B[:, 0]], P[B[:, 1]])
            ba = np.stack([1 - s, s], axis=1)
            bb = np.stack([1 - t, t], axis=1)
        else:
            A, B = self.simp[ia], self.simp[ib]
            _, ba, bb = padded_pair_distance(P, self.simp, self.size, ia, ib, want_bary=True)
        x = np.einsum("pk,pkn->pn", ba, P[np.where(A >= 0, A, 0)])
        y = np.einsum("pk,pkn->pn", bb, P[np.where(B >= 0, B, 0)])
        w = np.sum(np.where(A == v, ba, 0.0), axis=1) - np.sum(np.where(B == v, bb, 0.0), axis=1)
        diff = x - y
        d2 = np.maximum(np.sum(diff * diff, axis=1), 1e-300)
        return np.sum(diff * (w / d2)[:, None], axis=0)


def thicken_perturb(E: EmbeddedComplex, tau: float, budget: int | None = None, rng_seed=0,
                    target: float | None = None, edge_floor: float = 0.5, angle_floor: float = 0.5,
                    quality_floor: float = 0.5, link_floor: float = 0.5, trials_per_vertex: int = 4,
                    max_rounds: int = 200, return_stats: bool = False):
    """Move vertices by at most ``tau`` to increase Gromov--Guth thickness.

    Parameters
    ----------
    tau : float
        Displacement bound per vertex (Euclidean, exact).
    budget : int, optional
        Maximum number of trial moves; defaults to ``40 * V``.
    target : float, optional
        Pairs closer than ``target`` are pushed apart; defaults to ``tau / 2``.
    edge_floor, angle_floor, quality_floor, link_floor : float
        Moves may not shrink an edge below ``edge_floor`` times its input
        length, the smallest angle between edges at a vertex below
        ``angle_floor`` times its input minimum, and (dimension >= 2)
        simplex quality and link thickness below the analogous fractions.

    Returns the perturbed embedding, plus a stats dict if ``return_stats``.
    """
    if not tau >= 0:
        raise ParameterError("tau must be nonnegative")
    X = E.complex
    V = X.n_vertices
    stats = {"tau": float(tau), "trials": 0, "accepted": 0, "rounds": 0, "pairs": 0,
             "initial_min": None, "final_min": None, "max_displacement": 0.0}
    if tau == 0 or V == 0:
        return (E, stats) if return_stats else E
    c = float(target if target is not None else 0.5 * tau)
    if budget is None:
        budget = 40 * V
    rng = np.random.default_rng(rng_seed)
    simp, size = E.table
    stars = [np.asarray(s, dtype=np.intp) for s in X.vertex_star]
    P0 = E.coords.copy()
    P = P0.copy()
    radius = c + 2.0 * tau
    guards = _Guards(E, edge_floor, angle_floor, quality_floor, link_floor)

    pl = _PairList(E, radius, stars)
    if pl.d.size == 0:
        return (E, stats) if return_stats else E
    T = float(pl.d.min())
    stats["initial_min"] = T
    stats["pairs"] = int(pl.d.size)
    steps = np.full(V, 0.5 * tau)
    ev = _Evaluator(simp, size, pl)

    def try_vertex(v):
        nonlocal T
        idx = pl.of_vertex(v)
        dd = pl.d[idx]
        close = dd < c
        if not close.any():
            return False
        g = ev.push_direction(P, v, idx[close])
        gn = float(np.linalg.norm(g))
        if gn > 0:
            g = g / gn
        e_old = _barrier(dd, c)
        old = P[v].copy()
        s = steps[v]
        for trial in range(trials_per_vertex):
            stats["trials"] += 1
            r = rng.standard_normal(P.shape[1])
            r /= np.linalg.norm(r)
            dirn = g + (0.25 * 2**trial if gn > 0 else 1.0) * r
            dirn /= np.linalg.norm(dirn)
            P[v] = _project(old + s * dirn, P0[v], tau)
            dn = ev.distances(P, idx)
            lo = dn.min()
            better = lo > dd.min() or (lo >= T and _barrier(dn, c) < e_old)
            if better and guards.ok(P, v):
                pl.d[idx] = dn
                steps[v] = min(1.5 * s, tau)
                stats["accepted"] += 1
                T = float(pl.d.min())
                return True
            s *= 0.5
        P[v] = old
        steps[v] = max(s, 1e-3 * tau)
        return False

    def try_group(verts, rigid=False):
        """Move several vertices at once, each along its own push direction.

        With ``rigid`` the group is translated along the summed direction,
        which keeps the angles inside the group intact.
        """
        nonlocal T
        verts = np.asarray(verts, dtype=np.intp)
        idx = np.unique(np.concatenate([pl.of_vertex(v) for v in verts]))
        dd = pl.d[idx]
        close = dd < c
        if not close.any():
            return False
        G = np.array([ev.push_direction(P, v, idx[close]) for v in verts])
        gmax = float(np.linalg.norm(G, axis=1).max())
        if gmax == 0:
            return False
        G /= gmax
        if rigid:
            G[:] = G.sum(axis=0) / max(float(np.linalg.norm(G.sum(axis=0))), 1e-300)
        e_old = _barrier(dd, c)
        old = P[verts].copy()
        s = float(steps[verts].max())
        for trial in range(trials_per_vertex):
            stats["trials"] += 1
            noise = rng.standard_normal(G.shape) * (0.1 * 2**trial)
            for i, v in enumerate(verts):
                P[v] = _project(old[i] + s * (G[i] + noise[i]), P0[v], tau)
            dn = ev.distances(P, idx)
            lo = dn.min()
            better = lo > dd.min() or (lo >= T and _barrier(dn, c) < e_old)
            if better and all(guards.ok(P, v) for v in verts):
                pl.d[idx] = dn
                stats["accepted"] += 1
                T = float(pl.d.min())
                return True
            s *= 0.5
        P[verts] = old
        return False

    def pair_vertices(j):
        u = np.concatenate([simp[pl.ia[j]], simp[pl.ib[j]]])
        return np.unique(u[u >= 0]).tolist()

    def sweep(verts):
        moved = 0
        for v in verts:
            if stats["trials"] >= budget or T >= c:
                break
            moved += try_vertex(v)
        return moved

    # Worst pair first; when its own vertices are stuck, move the vertices
    # of the pairs crowding them, and as a last resort sweep every vertex
    # with a close pair.
    while T < c and stats["trials"] < budget and stats["rounds"] < max_rounds:
        j = int(np.argmin(pl.d))
        T_before = T
        core = pair_vertices(j)
        if sweep(core) and T > T_before:
            continue
        near = set()
        for v in core:
            idx = pl.of_vertex(v)
            for jj in idx[pl.d[idx] < c]:
                near.update(pair_vertices(jj))
        near = sorted(near - set(core))
        sweep(near)
        sweep(core)
        if T > T_before:
            continue
        # single moves are jammed: move the pair, then each closed star, jointly
        groups = [core] + [sorted({v, *X.neighbors[v]}) for v in core]
        for grp in groups:
            for rigid in (False, True):
                if stats["trials"] >= budget:
                    break
                try_group(grp, rigid)
        if T > T_before:
            continue
        stats["rounds"] += 1
        close = np.nonzero(pl.d < c)[0]
        allv = np.unique(np.concatenate([simp[pl.ia[close]].ravel(), simp[pl.ib[close]].ravel()]))
        if not sweep(allv[allv >= 0].tolist()):
            break
    out = EmbeddedComplex(X, P)
    disp = _norm(P - P0)
    assert float(disp.max()) <= tau, "displacement bound violated"
    stats["max_displacement"] = float(disp.max())
    stats["final_min"] = T if np.isfinite(T) else None
    return (out, stats) if return_stats else out
