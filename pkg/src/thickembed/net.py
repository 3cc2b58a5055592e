"""Greedy epsilon-nets on finite metric samples."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import ParameterError, ThickEmbedError


class MetricError(ThickEmbedError, ValueError):
    """A distance table is not a metric, or a mesh metric is undefined."""


class MetricSample:
    """A finite metric space given by a table, a callable or Euclidean coordinates.

    Use the ``from_*`` constructors.  ``row(i)`` returns the distances from
    point ``i`` to every point.
    """

    def __init__(self, point_count: int, table=None, func: Optional[Callable] = None, coords=None):
        if point_count < 1:
            raise ParameterError("a metric sample needs at least one point")
        self.point_count = int(point_count)
        self.table = table
        self.func = func
        self.coords = coords

    @classmethod
    def from_table(cls, D, check_triangles: int = 2000, tol: float = 1e-9, seed: int = 0):
        D = np.asarray(D, dtype=float)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise MetricError("distance table must be square")
        if not np.all(np.isfinite(D)):
            raise MetricError("distance table has non-finite entries")
        if np.any(np.diag(D) != 0):
            raise MetricError("d(x, x) must be 0")
        if np.any(D < 0):
            raise MetricError("distances must be nonnegative")
        if not np.array_equal(D, D.T):
            raise MetricError("distance table is not symmetric")
        m = D.shape[0]
        if m >= 3 and check_triangles:
            rng = np.random.default_rng(seed)
            i, j, k = rng.integers(0, m, size=(3, check_triangles))
            bad = D[i, k] > D[i, j] + D[j, k] + tol
            if bad.any():
                a = int(np.argmax(bad))
                raise MetricError(f"triangle inequality fails at ({i[a]}, {j[a]}, {k[a]})")
        return cls(m, table=D)

    @classmethod
    def from_coords(cls, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return cls(X.shape[0], coords=X)

    @classmethod
    def from_callable(cls, func: Callable, point_count: int):
        return cls(point_count, func=func)

    def row(self, i: int) -> np.ndarray:
        if self.table is not None:
            return self.table[i]
        if self.coords is not None:
            return np.linalg.norm(self.coords - self.coords[i], axis=1)
        return np.array([float(self.func(i, j)) for j in range(self.point_count)])

    def dist(self, i: int, j: int) -> float:
        if self.table is not None:
            return float(self.table[i, j])
        if self.coords is not None:
            return float(np.linalg.norm(self.coords[i] - self.coords[j]))
        return float(self.func(i, j))


@dataclass
class NetCertificate:
    packing_ok: bool
    covering_ok: bool
    packing_witness: Optional[tuple] = None   # (center_i, center_j, distance)
    covering_witness: Optional[tuple] = None  # (point, distance to nearest center)

    def to_dict(self):
        return {"packing_ok": self.packing_ok, "covering_ok": self.covering_ok,
                "packing_witness": list(self.packing_witness) if self.packing_witness else None,
                "covering_witness": list(self.covering_witness) if self.covering_witness else None}


@dataclass
class NetResult:
    center_indices: list
    epsilon: float
    certificate: NetCertificate
    nearest: np.ndarray = field(repr=False, default=None)

    @property
    def packing_ok(self):
        return self.certificate.packing_ok

    @property
    def covering_ok(self):
        return self.certificate.covering_ok

    def to_dict(self):
        return {"schema_version": 1, "epsilon": self.epsilon,
                "centers": list(self.center_indices), **self.certificate.to_dict()}


def greedy_net(S: MetricSample, eps: float) -> NetResult:
    """Scan points by ascending index; a point more than ``eps`` from all centers becomes one."""
    if not eps > 0:
        raise ParameterError("epsilon must be positive")
    nearest = np.full(S.point_count, np.inf)
    centers = []
    for i in range(S.point_count):
        if nearest[i] > eps:
            centers.append(i)
            np.minimum(nearest, S.row(i), out=nearest)
    cert = certify_net(S, centers, eps)
    return NetResult(centers, float(eps), cert, nearest)


def certify_net(S: MetricSample, centers, eps: float) -> NetCertificate:
    """Check packing (centers pairwise > eps) and covering (all points within eps).

    Witnesses are the closest offending center pair and the farthest
    uncovered point, with ties broken by lowest index.
    """
    centers = [int(c) for c in centers]
    if any(c < 0 or c >= S.point_count for c in centers):
        raise ParameterError("center index out of range")
    pack_wit = None
    best = np.inf
    nearest = np.full(S.point_count, np.inf)
    for a, c in enumerate(centers):
        r = S.row(c)
        np.minimum(nearest, r, out=nearest)
        if a + 1 < len(centers):
            rest = r[centers[a + 1:]]
            j = int(np.argmin(rest))
            if rest[j] <= eps and rest[j] < best:
                best = float(rest[j])
                pack_wit = (c, centers[a + 1 + j], best)
    packing_ok = pack_wit is None
    cov_wit = None
    if nearest.size and nearest.max() > eps:
        i = int(np.argmax(nearest))
        cov_wit = (i, float(nearest[i]))
    return NetCertificate(packing_ok, cov_wit is None, pack_wit, cov_wit)


def mesh_to_metric(mesh) -> MetricSample:
    """Edge-weighted shortest-path metric on the vertices of a mesh.

    ``mesh`` is an ``EmbeddedComplex`` or a path to an ``.emb`` / ``.off`` file.
    """
    from .geometry import EmbeddedComplex
    from .io import read_mesh

    E = mesh if isinstance(mesh, EmbeddedComplex) else read_mesh(mesh)
    V = E.complex.n_vertices
    e = np.asarray(E.complex.edges, dtype=np.intp).reshape(-1, 2)
    w = np.linalg.norm(E.coords[e[:, 0]] - E.coords[e[:, 1]], axis=1)
    if V > 1 and np.any(w == 0):
        raise MetricError("mesh has a zero-length edge")
    G = csr_matrix((w, (e[:, 0], e[:, 1])), shape=(V, V))
    ncomp, _ = connected_components(G, directed=False)
    if ncomp > 1:
        raise MetricError(f"mesh is disconnected ({ncomp} components); build one net per component")
    D = shortest_path(G, method="D", directed=False)
    D = np.minimum(D, D.T)  # exact symmetry
    return MetricSample.from_table(D)
