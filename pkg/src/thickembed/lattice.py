"""Lattice points and staircase (Freudenthal) cells of a scaled standard simplex.

A lattice point of the ``d``-simplex at level ``t`` is an integer vector
``a = (a_0, ..., a_d) >= 0`` with ``sum(a) = t``.  Writing the partial sums
``x_j = a_j + ... + a_d`` gives ``t >= x_1 >= ... >= x_d >= 0``; the edgewise
subdivision consists of the unit-cube staircase simplices
``b, b + e_pi(1), b + e_pi(1) + e_pi(2), ...`` that stay inside that region.
"""

import itertools
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def lattice_points(d, t):
    """All ``a`` with ``d + 1`` nonnegative entries summing to ``t`` (lexicographic, descending a_0)."""
    if d == 0:
        return ((t,),)
    out = []
    for a0 in range(t, -1, -1):
        for rest in lattice_points(d - 1, t - a0):
            out.append((a0,) + rest)
    return tuple(out)


def _to_bary(x, t):
    d = len(x)
    if d == 0:
        return (t,)
    a = [t - x[0]]
    a += [x[i] - x[i + 1] for i in range(d - 1)]
    a.append(x[-1])
    return tuple(a)


@lru_cache(maxsize=None)
def staircase_cells(d, t):
    """Child simplices of the level-``t`` edgewise subdivision of the ``d``-simplex.

    Returns an int array of shape ``(t**d, d + 1, d + 1)``: for each child, its
    ``d + 1`` vertices as barycentric numerators (denominator ``t``).
    """
    if d == 0:
        return np.array([[[t]]], dtype=np.int64)
    cells = []
    perms = list(itertools.permutations(range(d)))
    for base in itertools.product(range(t), repeat=d):
        for pi in perms:
            x = list(base)
            verts = [tuple(x)]
            for j in pi:
                x[j] += 1
                verts.append(tuple(x))
            if all(t >= v[0] and all(v[i] >= v[i + 1] for i in range(d - 1)) and v[-1] >= 0
                   for v in verts):
                cells.append([_to_bary(v, t) for v in verts])
    arr = np.array(cells, dtype=np.int64)
    arr.setflags(write=False)
    return arr
