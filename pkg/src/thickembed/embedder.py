"""Random sphere placement, condition certification and the embedding pipeline."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np

from .complex import SimplicialComplex, color_simplices, load_profile, pairs_within_distance_two
from .errors import (DegenerateLinkError, DegenerateSimplexError, InvalidEmbeddingError,
                     ParameterError, SaturationError)
from .geometry import (EmbeddedComplex, crossing_counts, link_thickness, min_link_thickness,
                       sample_centers, thickness_report, unit_angle, validity)
from .perturb import thicken_perturb
from .subdivision import edgewise_subdivide, subdivide_embedding

SCHEMA_VERSION = 1


@dataclass
class PlacementParams:
    """Parameters of the constrained random placement.

    ``radius=None`` means ``V ** (1 / (n - k))``.  ``alpha0`` is used both as a
    chordal separation factor (edges at least ``alpha0 * R`` long) and as an
    angle in radians for link thickness.
    """

    ambient_dim: int
    radius: Optional[float] = None
    alpha0: float = 0.25
    max_resample_rounds: int = 2000
    rng_seed: int = 0
    restart_every: int = 100
    auto_alpha: bool = True
    min_alpha0: float = 1e-3

    def validate(self, X: SimplicialComplex):
        k = X.top_dim
        if self.ambient_dim < 2 * k + 1:
            raise ParameterError(f"ambient dimension {self.ambient_dim} < 2k+1 = {2 * k + 1}")
        if self.radius is not None and not self.radius > 0:
            raise ParameterError("radius must be positive")
        if not 0 < self.alpha0 < 2:
            raise ParameterError("alpha0 must lie in (0, 2)")
        if self.max_resample_rounds < 0:
            raise ParameterError("max_resample_rounds must be nonnegative")

    def resolved_radius(self, X: SimplicialComplex) -> float:
        if self.radius is not None:
            return float(self.radius)
        V = X.n_vertices
        k = max(X.top_dim, 0)
        return float(max(V, 1)) ** (1.0 / (self.ambient_dim - k))


def sphere_points(rng, count: int, n: int, R: float) -> np.ndarray:
    """Uniform points on the sphere of radius ``R`` (normalized Gaussians)."""
    g = rng.standard_normal((count, n))
    nrm = np.linalg.norm(g, axis=1, keepdims=True)
    while np.any(nrm == 0):  # pragma: no cover - probability zero
        bad = nrm[:, 0] == 0
        g[bad] = rng.standard_normal((int(bad.sum()), n))
        nrm = np.linalg.norm(g, axis=1, keepdims=True)
    return R * g / nrm


class _ConstraintSet:
    """Incremental checker for separation and link constraints.

    Each violation is ``(kind, item, value, participants)``.
    """

    def __init__(self, X: SimplicialComplex, alpha0: float, R: float):
        self.X = X
        self.alpha0 = alpha0
        self.R = R
        e = np.asarray(X.edges, dtype=np.intp).reshape(-1, 2)
        self.edges = e
        V = X.n_vertices
        self.edges_at = [[] for _ in range(V)]
        for i, (a, b) in enumerate(e.tolist()):
            self.edges_at[a].append(i)
            self.edges_at[b].append(i)
        # angle triples at every vertex cover point pairs of vertex links
        vs, w1, w2 = [], [], []
        for v, nb in enumerate(X.neighbors):
            for i in range(len(nb)):
                for j in range(i + 1, len(nb)):
                    vs.append(v)
                    w1.append(nb[i])
                    w2.append(nb[j])
        self.tri = np.array([vs, w1, w2], dtype=np.intp).reshape(3, -1)
        self.tri_at = [[] for _ in range(V)]
        for i, (v, a, b) in enumerate(self.tri.T.tolist()):
            for u in (v, a, b):
                self.tri_at[u].append(i)
        # simplices whose links need the general certifier
        k = X.dim
        self.general = [s for s in X.simplices
                        if len(s) <= k and X.cofaces(s) and (len(s) > 1 or k - len(s) >= 1)]
        self.general_at = [[] for _ in range(V)]
        for gi, s in enumerate(self.general):
            star = set(s)
            for c in X.cofaces(s):
                star.update(c)
            for u in star:
                self.general_at[u].append(gi)

    def violations(self, C, verts=None):
        out = []
        if verts is None:
            eidx = np.arange(len(self.edges))
            tidx = np.arange(self.tri.shape[1])
            gidx = range(len(self.general))
        else:
            eidx = np.array(sorted({i for v in verts for i in self.edges_at[v]}), dtype=np.intp)
            tidx = np.array(sorted({i for v in verts for i in self.tri_at[v]}), dtype=np.intp)
            gidx = sorted({i for v in verts for i in self.general_at[v]})
        if eidx.size:
            e = self.edges[eidx]
            L = np.linalg.norm(C[e[:, 0]] - C[e[:, 1]], axis=1)
            for j in np.nonzero(L < self.alpha0 * self.R)[0]:
                a, b = e[j]
                out.append(("separation", (int(a), int(b)), float(L[j]), (int(a), int(b))))
        if tidx.size:
            v, a, b = self.tri[:, tidx]
            d1 = C[a] - C[v]
            d2 = C[b] - C[v]
            n1 = np.linalg.norm(d1, axis=1)
            n2 = np.linalg.norm(d2, axis=1)
            with np.errstate(invalid="ignore", divide="ignore"):
                ang = unit_angle(d1 / n1[:, None], d2 / n2[:, None])
            ang = np.where((n1 > 0) & (n2 > 0), ang, 0.0)
            for j in np.nonzero(~(ang >= self.alpha0))[0]:
                trip = (int(v[j]), int(a[j]), int(b[j]))
                out.append(("link", (trip[0],), float(ang[j]), trip))
        if len(gidx):
            E = EmbeddedComplex(self.X, C)
            for gi in gidx:
                s = self.general[gi]
                try:
                    lt = link_thickness(E, s, skip_point_pairs=len(s) == 1)
                    val, wit = lt.value, lt.witness
                except (DegenerateLinkError, DegenerateSimplexError):
                    val, wit = 0.0, None
                if val is not None and val < self.alpha0:
                    part = set(s)
                    for c in (wit or self.X.cofaces(s)):
                        part.update(c)
                    out.append(("link", s, float(val), tuple(sorted(part))))
        return out


def _place_once(X, n, R, alpha0, rounds, restart_every, rng):
    V = X.n_vertices
    C = sphere_points(rng, V, n, R)
    cs = _ConstraintSet(X, alpha0, R)
    bad = cs.violations(C)
    local = 0
    r = 0
    while bad:
        if r >= rounds:
            kind, item, val, _ = min(bad, key=lambda b: (b[2], b[1]))
            raise SaturationError(
                f"{kind} constraint at {item} still violated (value {val:.6g}) after {r} rounds",
                constraint={"kind": kind, "simplex": list(item), "value": val}, rounds=r)
        r += 1
        local += 1
        if local > restart_every:
            C = sphere_points(rng, V, n, R)
            local = 0
            bad = cs.violations(C)
            continue
        part = sorted({u for b in bad for u in b[3]})
        C[part] = sphere_points(rng, len(part), n, R)
        bad = cs.violations(C, part)
    return C, r


def random_sphere_placement(X: SimplicialComplex, params: PlacementParams,
                            return_info: bool = False):
    """Uniform random placement on the sphere of radius ``R``, conditioned by rejection.

    Vertices taking part in a violated constraint are redrawn, with a full
    redraw every ``restart_every`` rounds.  With ``auto_alpha`` a saturation
    halves ``alpha0`` and retries; the final value and the ladder are reported
    through ``return_info``.
    """
    params.validate(X)
    n = params.ambient_dim
    R = params.resolved_radius(X)
    rng = np.random.default_rng(params.rng_seed)
    alpha = params.alpha0
    ladder = []
    while True:
        try:
            C, rounds = _place_once(X, n, R, alpha, params.max_resample_rounds,
                                    params.restart_every, rng)
            ladder.append({"alpha0": alpha, "status": "ok", "rounds": rounds})
            break
        except SaturationError as exc:
            ladder.append({"alpha0": alpha, "status": "saturated", "rounds": exc.rounds,
                           "constraint": exc.constraint})
            if not params.auto_alpha or alpha / 2 < params.min_alpha0:
                exc.ladder = ladder
                raise
            alpha /= 2
    E = EmbeddedComplex(X, C)
    if return_info:
        return E, {"alpha0_final": alpha, "radius": R, "ladder": ladder}
    return E


# --- certification ---------------------------------------------------------

@dataclass
class ConditionReport:
    """Measured placement conditions, each with its witness."""

    radius: float
    alpha0: float
    cond1_ok: bool
    cond1_min_edge: Optional[float]
    cond1_witness: Optional[tuple]
    cond2_ok: bool
    cond2_min_link_thickness: Optional[float]
    cond2_witness: Optional[dict]
    dagger_min_pair_distance: Optional[float]
    dagger_ratio: Optional[float]
    dagger_witness: Optional[tuple]
    edge_ratio: Optional[float]
    edge_ratio_witness: Optional[tuple]
    sphere_deviation: float

    @property
    def ok(self) -> bool:
        return self.cond1_ok and self.cond2_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def check_conditions(E: EmbeddedComplex, alpha0: float, radius: float | None = None,
                     tol: float = 1e-4) -> ConditionReport:
    """Re-measure the placement conditions from scratch.

    ``radius`` defaults to the mean distance of the vertices from the origin.
    Link thickness uses the certified lower bound of the branch-and-bound
    certifier (tolerance ``tol``); no state is shared with the sampler.
    """
    X = E.complex
    C = E.coords
    norms = np.linalg.norm(C, axis=1)
    R = float(radius) if radius is not None else float(norms.mean()) if len(norms) else 0.0
    dev = float(np.max(np.abs(norms - R)) / R) if len(norms) and R > 0 else 0.0
    e = np.asarray(X.edges, dtype=np.intp).reshape(-1, 2)
    if len(e):
        L = np.linalg.norm(C[e[:, 0]] - C[e[:, 1]], axis=1)
        i, j = int(np.argmin(L)), int(np.argmax(L))
        emin, emax = float(L[i]), float(L[j])
        c1_wit = tuple(int(x) for x in e[i])
        ratio = emax / emin if emin > 0 else math.inf
        ratio_wit = (c1_wit, tuple(int(x) for x in e[j]))
        c1 = emin >= alpha0 * R
    else:
        emin = c1_wit = ratio = ratio_wit = None
        c1 = True
    try:
        lval, lsig, lt = min_link_thickness(E, tol=tol)
        c2_wit = None if lval is None else {"sigma": list(lsig), "pair": [list(x) for x in lt.witness]}
    except (DegenerateLinkError, DegenerateSimplexError) as exc:
        lval, c2_wit = 0.0, {"error": str(exc)}
    c2 = lval is None or lval >= alpha0
    pairs = pairs_within_distance_two(X)
    if pairs:
        P = np.asarray(pairs, dtype=np.intp)
        D = np.linalg.norm(C[P[:, 0]] - C[P[:, 1]], axis=1)
        m = int(np.argmin(D))
        dag, dag_wit = float(D[m]), (int(P[m, 0]), int(P[m, 1]))
        dag_ratio = dag / R if R > 0 else None
    else:
        dag = dag_ratio = dag_wit = None
    return ConditionReport(R, alpha0, bool(c1), emin, c1_wit, bool(c2), lval, c2_wit,
                           dag, dag_ratio, dag_wit, ratio, ratio_wit, dev)


# --- crossings --------------------------------------------------------------

@dataclass
class CrossingProfile:
    max_count: int
    argmax: Optional[list]
    per_color_max: list
    radius: float
    n_centers: int

    def to_dict(self):
        return asdict(self)


def crossing_profile(E: EmbeddedComplex, radius: float = 1.0, sample_spec: dict | None = None,
                     coloring=None) -> CrossingProfile:
    """Maximum ball crossing count overall and per color class.

    Balls of ``radius`` are centered on a lattice of pitch ``radius`` (or the
    given ``sample_spec``) clipped to the enclosing ball.
    """
    if sample_spec is None:
        sample_spec = {"pitch": radius}
    if coloring is None:
        coloring = color_simplices(E.complex)
    centers = sample_centers(E, sample_spec)
    col = np.array([coloring.color[s] for s in E.complex.simplices], dtype=np.intp)
    counts, per = crossing_counts(E, centers, radius, colors=col,
                                  n_colors=max(coloring.color_count, 1))
    if counts.size == 0:
        return CrossingProfile(0, None, [0] * coloring.color_count, radius, 0)
    j = int(np.argmax(counts))
    return CrossingProfile(int(counts[j]), centers[j].tolist(),
                           [int(x) for x in per.max(axis=0)][: coloring.color_count],
                           radius, int(len(centers)))


# --- pipeline ----------------------------------------------------------------

@dataclass
class PipelineResult:
    embedding: EmbeddedComplex
    subdivision: object
    placement: EmbeddedComplex
    conditions: ConditionReport
    report_pre: object   # subdivided placement, before perturbation
    report_post: object  # after perturbation, before scaling
    report_final: object
    scale: float
    radius_pre: float
    radius_final: float
    crossings: Optional[CrossingProfile]
    params: dict
    perturb_stats: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict, compare=False)

    def to_dict(self, include_embedding: bool = True) -> dict:
        from .io import embedding_to_dict

        d = {
            "schema_version": SCHEMA_VERSION,
            "params": self.params,
            "conditions": self.conditions.to_dict(),
            "report_pre": self.report_pre.to_dict(),
            "report_post": self.report_post.to_dict(),
            "report_final": self.report_final.to_dict(),
            "scale": self.scale,
            "radius_pre": self.radius_pre,
            "radius_final": self.radius_final,
            "crossings": self.crossings.to_dict() if self.crossings else None,
            "perturb": self.perturb_stats,
            "subdivision": {"t": self.subdivision.t, "child_vertices": self.subdivision.child.n_vertices},
        }
        if include_embedding:
            d["embedding"] = embedding_to_dict(self.embedding)
        return d


def auto_subdivision(R: float, piece_length: float) -> int:
    """Smallest ``t`` with ``R / t <= piece_length``."""
    return max(1, math.ceil(R / piece_length - 1e-12))


def run_pipeline(X: SimplicialComplex, n: int, params: PlacementParams | None = None,
                 t_subdiv: int | str = 1, tau: float | None = None, tau_factor: float = 0.25,
                 budget: int | None = None, perturb_seed: int | None = None,
                 piece_length: float = 4.0, crossing: bool = True, crossing_radius: float = 1.0,
                 links: bool = True) -> PipelineResult:
    """Place, certify, subdivide, thicken and normalize.

    ``t_subdiv="auto"`` picks ``t`` so that subdivided edges are at most
    ``piece_length * (edge / R)`` long.  ``tau`` defaults to ``tau_factor``
    times the shortest subdivided edge.  The result is scaled by
    ``1 / gg_thickness`` so the final thickness is 1.
    """
    if params is None:
        params = PlacementParams(ambient_dim=n)
    if params.ambient_dim != n:
        params = PlacementParams(**{**asdict(params), "ambient_dim": n})
    timings = {}
    t0 = time.perf_counter()
    I0, info = random_sphere_placement(X, params, return_info=True)
    R = info["radius"]
    alpha = info["alpha0_final"]
    timings["placement"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    cond = check_conditions(I0, alpha, radius=R)
    if not cond.ok:
        raise InvalidEmbeddingError(f"placement failed certification: {cond.to_dict()}")
    prof = crossing_profile(I0, radius=crossing_radius) if crossing else None
    timings["certify"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    t = auto_subdivision(R, piece_length) if t_subdiv == "auto" else t_subdiv
    smap = edgewise_subdivide(X, t)
    E1 = subdivide_embedding(I0, smap)
    ok, why = validity(E1)
    if not ok:
        raise InvalidEmbeddingError(f"subdivided placement is not an embedding: {why}")
    rep_pre = thickness_report(E1, links=links)
    timings["subdivide"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if tau is None:
        tau = tau_factor * rep_pre.edge_min if rep_pre.edge_min is not None else 0.0
    seed = params.rng_seed if perturb_seed is None else perturb_seed
    E2, stats = thicken_perturb(E1, tau, budget=budget, rng_seed=seed, return_stats=True)
    rep_post = thickness_report(E2, links=links)
    timings["perturb"] = time.perf_counter() - t0

    gg = rep_post.gg_thickness
    if gg is None or gg <= 0:
        raise InvalidEmbeddingError("perturbed embedding has no positive thickness")
    lam = 1.0 / gg
    E3 = E2.scaled(lam)
    rep_final = thickness_report(E3, links=links)
    record = {
        "V": X.n_vertices, "k": X.top_dim, "n": n, "radius": R, "alpha0": params.alpha0,
        "alpha0_final": alpha, "alpha_ladder": info["ladder"], "seed": params.rng_seed,
        "perturb_seed": seed, "t_subdiv": t, "tau": tau, "budget": budget,
        "load": load_profile(X).max_load, "crossing_radius": crossing_radius if crossing else None,
    }
    return PipelineResult(E3, smap, I0, cond, rep_pre, rep_post, rep_final, lam,
                          rep_post.enclosing_radius, rep_final.enclosing_radius, prof, record,
                          stats, timings)
