"""Abstract simplicial complexes: face closure, links, graph metric, coloring.

Simplices are strictly increasing tuples of vertex ids.  A complex stores
every face explicitly and is immutable after construction; derived tables
(adjacency, vertex stars, simplex index) are computed lazily and cached.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    MalformedSimplexError,
    ParameterError,
    SimplexNotFoundError,
    VertexRangeError,
)

Simplex = tuple


class SimplicialComplex:
    """A face-closed set of simplices on vertices ``0 .. V-1``.

    Use :func:`build_complex` rather than calling the constructor directly;
    the constructor trusts that ``faces`` is already closed and sorted.
    """

    def __init__(self, dim: int, n_vertices: int, faces: Sequence[Sequence[Simplex]]):
        self.dim = dim
        self.n_vertices = n_vertices
        self.faces = tuple(tuple(level) for level in faces)

    # --- basic queries -------------------------------------------------

    def __repr__(self):
        counts = ", ".join(str(len(f)) for f in self.faces)
        return f"SimplicialComplex(dim={self.dim}, V={self.n_vertices}, f=({counts}))"

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.n_vertices == other.n_vertices
            and self.faces == other.faces
        )

    def __hash__(self):
        return hash((self.dim, self.n_vertices, self.faces))

    def __contains__(self, simplex):
        return tuple(simplex) in self.index

    def __len__(self):
        return len(self.simplices)

    @property
    def top_dim(self) -> int:
        """Largest dimension that actually occurs (-1 for the empty complex)."""
        for d in range(len(self.faces) - 1, -1, -1):
            if self.faces[d]:
                return d
        return -1

    def f_vector(self) -> tuple:
        return tuple(len(f) for f in self.faces)

    @cached_property
    def simplices(self) -> tuple:
        """All simplices, ordered by dimension and then lexicographically."""
        return tuple(itertools.chain.from_iterable(self.faces))

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.simplices)}

    @property
    def edges(self) -> tuple:
        return self.faces[1] if len(self.faces) > 1 else ()

    @cached_property
    def maximal_simplices(self) -> tuple:
        """Simplices that are not a proper face of another simplex."""
        covered = set()
        for d in range(1, len(self.faces)):
            for s in self.faces[d]:
                for i in range(len(s)):
                    covered.add(s[:i] + s[i + 1:])
        return tuple(s for s in self.simplices if s not in covered)

    @cached_property
    def neighbors(self) -> tuple:
        adj = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def vertex_star(self) -> tuple:
        """For each vertex, the ids (into :attr:`simplices`) of simplices containing it."""
        star = [[] for _ in range(self.n_vertices)]
        for i, s in enumerate(self.simplices):
            for v in s:
                star[v].append(i)
        return tuple(tuple(x) for x in star)

    def cofaces(self, simplex: Simplex) -> list:
        """Simplices that properly contain ``simplex``."""
        simplex = tuple(simplex)
        if simplex not in self.index:
            raise SimplexNotFoundError(simplex)
        ids = set(self.vertex_star[simplex[0]])
        for v in simplex[1:]:
            ids.intersection_update(self.vertex_star[v])
        out = [self.simplices[i] for i in sorted(ids)]
        return [t for t in out if len(t) > len(simplex)]


def _closure(tops: Iterable[Simplex], dim: int) -> list:
    levels = [set() for _ in range(dim + 1)]
    for s in tops:
        for r in range(1, len(s) + 1):
            levels[r - 1].update(itertools.combinations(s, r))
    return levels


def build_complex(top_simplices: Iterable[Sequence[int]], vertex_count: int,
                  dim: int | None = None) -> SimplicialComplex:
    """Face closure of ``top_simplices`` on ``vertex_count`` vertices.

    Parameters
    ----------
    top_simplices : iterable of vertex tuples
        Generating simplices; any order of ids inside a tuple is accepted.
    vertex_count : int
        Number of vertices ``V``. Vertices not named by any tuple are isolated.
    dim : int, optional
        Declared dimension ``k``. Defaults to the largest tuple dimension
        (0 when there are no tuples).

    Raises
    ------
    MalformedSimplexError
        If a tuple repeats a vertex, is empty, or is longer than ``dim + 1``.
    VertexRangeError
        If an id is negative or ``>= vertex_count``.
    """
    if vertex_count < 0:
        raise ParameterError(f"vertex_count must be >= 0, got {vertex_count}")
    tops = []
    for raw in top_simplices:
        s = tuple(int(v) for v in raw)
        if not s:
            raise MalformedSimplexError("empty simplex")
        if len(set(s)) != len(s):
            raise MalformedSimplexError(f"repeated vertex in simplex {tuple(raw)}")
        for v in s:
            if v < 0 or v >= vertex_count:
                raise VertexRangeError(f"vertex id {v} out of range for V={vertex_count}")
        tops.append(tuple(sorted(s)))
    max_len = max((len(s) for s in tops), default=1)
    if dim is None:
        dim = max_len - 1
    elif max_len - 1 > dim:
        raise MalformedSimplexError(
            f"simplex of dimension {max_len - 1} exceeds declared dimension {dim}")
    levels = _closure(tops, dim)
    levels[0].update((v,) for v in range(vertex_count))
    return SimplicialComplex(dim, vertex_count, [sorted(level) for level in levels])


# --- links -------------------------------------------------------------

def link(X: SimplicialComplex, sigma: Sequence[int]):
    """Combinatorial link of ``sigma``.

    Returns ``(lk, parent)`` where ``lk`` is a complex on the densely relabelled
    vertices of ``⋃ (tau minus sigma)`` (increasing parent id order) and
    ``parent`` maps every link simplex to the coface ``tau`` it comes from.
    An ``r``-simplex ``tau ⊋ sigma`` contributes the ``(r - i - 1)``-simplex
    ``tau minus sigma``.
    """
    sigma = tuple(sorted(sigma))
    cof = X.cofaces(sigma)
    sset = set(sigma)
    verts = sorted({v for t in cof for v in t if v not in sset})
    relabel = {v: i for i, v in enumerate(verts)}
    parent = {}
    for t in cof:
        ls = tuple(relabel[v] for v in t if v not in sset)
        parent[ls] = t
    ldim = max(X.dim - len(sigma), 0)
    levels = [[] for _ in range(ldim + 1)]
    for ls in parent:
        levels[len(ls) - 1].append(ls)
    lk = SimplicialComplex(ldim, len(verts), [sorted(level) for level in levels])
    return lk, parent


# --- graph metric ------------------------------------------------------

def _check_vertex(X, v):
    if v < 0 or v >= X.n_vertices:
        raise VertexRangeError(f"vertex id {v} out of range for V={X.n_vertices}")


def graph_distance(X: SimplicialComplex, v: int, w: int) -> float:
    """Edge-path distance in the 1-skeleton (``math.inf`` if disconnected)."""
    _check_vertex(X, v)
    _check_vertex(X, w)
    if v == w:
        return 0
    seen = {v: 0}
    queue = deque([v])
    nbrs = X.neighbors
    while queue:
        u = queue.popleft()
        for x in nbrs[u]:
            if x not in seen:
                seen[x] = seen[u] + 1
                if x == w:
                    return seen[x]
                queue.append(x)
    return math.inf


def pairs_within_distance_two(X: SimplicialComplex) -> list:
    """Unordered vertex pairs ``(v, w)``, ``v < w``, with graph distance 1 or 2."""
    nbrs = X.neighbors
    out = set()
    for v in range(X.n_vertices):
        ball = set(nbrs[v])
        for u in nbrs[v]:
            ball.update(nbrs[u])
        ball.discard(v)
        out.update((v, w) for w in ball if w > v)
    return sorted(out)


# --- load and coloring -------------------------------------------------

@dataclass(frozen=True)
class LoadProfile:
    """Number of simplices containing each vertex.

    ``include_self`` selects the convention: when true the vertex itself is
    counted along with every higher simplex through it.
    """

    per_vertex: tuple
    include_self: bool

    @property
    def max_load(self) -> int:
        return max(self.per_vertex, default=0)


def load_profile(X: SimplicialComplex, include_self: bool = True) -> LoadProfile:
    offset = 0 if include_self else 1
    return LoadProfile(tuple(len(s) - offset for s in X.vertex_star), include_self)


@dataclass(frozen=True)
class SimplexColoring:
    color: dict
    color_count: int

    def classes(self) -> dict:
        out = {}
        for s, c in self.color.items():
            out.setdefault(c, []).append(s)
        return out


def color_simplices(X: SimplicialComplex, L: int | None = None) -> SimplexColoring:
    """Greedy proper coloring of the shared-vertex conflict graph.

    Simplices are visited by decreasing dimension, then lexicographically, and
    take the smallest color unused by already-colored simplices sharing a
    vertex.  ``L`` is only used to validate the ``(k+1)L`` bound; the
    coloring itself does not depend on it.
    """
    order = sorted(range(len(X.simplices)), key=lambda i: (-len(X.simplices[i]), X.simplices[i]))
    colors = [-1] * len(X.simplices)
    star = X.vertex_star
    for i in order:
        used = set()
        for v in X.simplices[i]:
            for j in star[v]:
                if colors[j] >= 0:
                    used.add(colors[j])
        c = 0
        while c in used:
            c += 1
        colors[i] = c
    count = max(colors, default=-1) + 1
    if L is not None and X.top_dim >= 1 and count > (X.dim + 1) * L:
        # greedy cannot exceed this when L is the true max load
        raise ParameterError(f"{count} colors exceed (k+1)L = {(X.dim + 1) * L}; is L the max load?")
    return SimplexColoring({s: colors[i] for i, s in enumerate(X.simplices)}, count)


def is_proper_coloring(X: SimplicialComplex, coloring: SimplexColoring) -> bool:
    for a, b in itertools.combinations(X.simplices, 2):
        if set(a) & set(b) and coloring.color[a] == coloring.color[b]:
            return False
    return True
