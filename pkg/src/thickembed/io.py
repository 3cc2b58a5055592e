"""Text formats.

SCX (complex)::

    scx <k> <V>
    0 1 2          # one maximal simplex per line
    ...

EMB (embedding): an SCX block, then ``n <ambient-dim>``, then ``V`` lines of
``n`` floats.  ``#`` starts a comment anywhere on a line; blank lines are
ignored.  Floats are written with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .complex import SimplicialComplex, build_complex
from .errors import ParseError, ThickEmbedError
from .geometry import EmbeddedComplex

SCHEMA_VERSION = 1


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body


def _parse_scx_lines(lines, path=None, stop_at_n=False):
    lines = list(lines)
    if not lines:
        raise ParseError("missing 'scx <k> <V>' header", line=1, path=path)
    lineno, head = lines[0]
    tok = head.split()
    if len(tok) != 3 or tok[0] != "scx":
        raise ParseError(f"bad header {head!r}; expected 'scx <k> <V>'", line=lineno, path=path)
    try:
        k, V = int(tok[1]), int(tok[2])
    except ValueError:
        raise ParseError(f"non-integer header field in {head!r}", line=lineno, path=path) from None
    if k < 0 or V < 0:
        raise ParseError("k and V must be nonnegative", line=lineno, path=path)
    tops = []
    rest = []
    for i, (lineno, body) in enumerate(lines[1:], start=1):
        if stop_at_n and body.split()[0] == "n":
            rest = lines[i:]
            break
        try:
            s = tuple(int(x) for x in body.split())
        except ValueError:
            raise ParseError(f"non-integer vertex id in {body!r}", line=lineno, path=path) from None
        if len(s) > k + 1:
            raise ParseError(f"simplex {s} has more than k+1={k + 1} vertices", line=lineno, path=path)
        if len(set(s)) != len(s):
            raise ParseError(f"repeated vertex in {s}", line=lineno, path=path)
        if any(v < 0 or v >= V for v in s):
            raise ParseError(f"vertex id out of range in {s} (V={V})", line=lineno, path=path)
        tops.append(s)
    return build_complex(tops, V, dim=k), rest


def parse_scx(text: str, path=None) -> SimplicialComplex:
    X, _ = _parse_scx_lines(_lines(text), path=path)
    return X


def format_scx(X: SimplicialComplex) -> str:
    out = [f"scx {X.dim} {X.n_vertices}"]
    for s in X.maximal_simplices:
        if len(s) > 1:
            out.append(" ".join(map(str, s)))
    return "\n".join(out) + "\n"


def parse_emb(text: str, path=None) -> EmbeddedComplex:
    X, rest = _parse_scx_lines(_lines(text), path=path, stop_at_n=True)
    if not rest:
        raise ParseError("missing 'n <ambient-dim>' line", path=path)
    lineno, body = rest[0]
    tok = body.split()
    if len(tok) != 2:
        raise ParseError(f"bad ambient line {body!r}", line=lineno, path=path)
    try:
        n = int(tok[1])
    except ValueError:
        raise ParseError(f"non-integer ambient dimension in {body!r}", line=lineno, path=path) from None
    if n < 1:
        raise ParseError("ambient dimension must be >= 1", line=lineno, path=path)
    rows = rest[1:]
    if len(rows) != X.n_vertices:
        where = rows[-1][0] if rows else lineno
        raise ParseError(f"expected {X.n_vertices} coordinate lines, found {len(rows)}", line=where, path=path)
    coords = np.empty((X.n_vertices, n))
    for i, (ln, body) in enumerate(rows):
        tok = body.split()
        if len(tok) != n:
            raise ParseError(f"expected {n} coordinates, found {len(tok)}", line=ln, path=path)
        try:
            coords[i] = [float(x) for x in tok]
        except ValueError:
            raise ParseError(f"bad coordinate in {body!r}", line=ln, path=path) from None
        if not np.all(np.isfinite(coords[i])):
            raise ParseError("non-finite coordinate", line=ln, path=path)
    return EmbeddedComplex(X, coords)


def format_emb(E: EmbeddedComplex) -> str:
    out = [format_scx(E.complex).rstrip("\n"), f"n {E.n}"]
    for row in E.coords:
        out.append(" ".join(repr(float(x)) for x in row))
    return "\n".join(out) + "\n"


def parse_off(text: str, path=None):
    """Parse an OFF surface; polygons are fan-triangulated. Returns ``EmbeddedComplex``."""
    lines = list(_lines(text))
    if not lines or not lines[0][1].startswith("OFF"):
        raise ParseError("missing OFF header", line=1, path=path)
    head = lines[0][1][3:].split()
    idx = 1
    if not head:
        if len(lines) < 2:
            raise ParseError("missing counts line", path=path)
        head = lines[1][1].split()
        idx = 2
    try:
        nv, nf = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise ParseError("bad counts line", line=lines[idx - 1][0], path=path) from None
    if len(lines) < idx + nv + nf:
        raise ParseError("file truncated", line=lines[-1][0], path=path)
    coords = []
    for ln, body in lines[idx: idx + nv]:
        try:
            coords.append([float(x) for x in body.split()[:3]])
        except ValueError:
            raise ParseError(f"bad vertex line {body!r}", line=ln, path=path) from None
    tris = []
    for ln, body in lines[idx + nv: idx + nv + nf]:
        try:
            tok = [int(x) for x in body.split()]
        except ValueError:
            raise ParseError(f"bad face line {body!r}", line=ln, path=path) from None
        m = tok[0]
        f = tok[1: 1 + m]
        if len(f) != m or m < 3:
            raise ParseError("face vertex count mismatch", line=ln, path=path)
        if any(v < 0 or v >= nv for v in f):
            raise ParseError("face vertex out of range", line=ln, path=path)
        tris.extend((f[0], f[i], f[i + 1]) for i in range(1, m - 1))
    X = build_complex(tris, nv, dim=2)
    return EmbeddedComplex(X, np.array(coords, dtype=float).reshape(nv, -1))


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise IOFailure(str(exc)) from exc


class IOFailure(ThickEmbedError, OSError):
    """File could not be read or written."""


def read_scx(path) -> SimplicialComplex:
    return parse_scx(_read(path), path=path)


def read_emb(path) -> EmbeddedComplex:
    return parse_emb(_read(path), path=path)


def read_mesh(path) -> EmbeddedComplex:
    """Read an ``.emb`` or ``.off`` surface mesh."""
    text = _read(path)
    if str(path).lower().endswith(".off") or text.lstrip().startswith("OFF"):
        return parse_off(text, path=path)
    return parse_emb(text, path=path)


def write_text(path, text: str):
    try:
        p = Path(path)
        if p.parent and not p.parent.exists():
            p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    except OSError as exc:
        raise IOFailure(str(exc)) from exc


def write_scx(path, X):
    write_text(path, format_scx(X))


def write_emb(path, E):
    write_text(path, format_emb(E))


def dumps_json(obj) -> str:
    """Canonical JSON: sorted keys, repr floats, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def write_json(path, obj):
    write_text(path, dumps_json(obj))


def read_json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), line=exc.lineno, path=path) from exc


def complex_to_dict(X: SimplicialComplex) -> dict:
    return {"k": X.dim, "V": X.n_vertices,
            "maximal": [list(s) for s in X.maximal_simplices if len(s) > 1]}


def complex_from_dict(d) -> SimplicialComplex:
    return build_complex(d["maximal"], d["V"], dim=d["k"])


def embedding_to_dict(E: EmbeddedComplex) -> dict:
    return {"complex": complex_to_dict(E.complex), "n": E.n, "coords": E.coords.tolist()}


def embedding_from_dict(d) -> EmbeddedComplex:
    X = complex_from_dict(d["complex"])
    coords = np.array(d["coords"], dtype=float).reshape(X.n_vertices, d["n"])
    return EmbeddedComplex(X, coords)


def subdivision_to_dict(smap) -> dict:
    """``SubdivisionMap`` as JSON: child vertices by parent simplex id and numerators."""
    P = smap.parent
    verts = []
    for key in smap.vertex_keys:
        carrier = tuple(v for v, _ in key)
        verts.append({"parent_simplex": P.index[carrier], "numerators": [a for _, a in key]})
    tops = [{"child": list(c), "parent_simplex": P.index[smap.simplex_parent[c]]}
            for c in smap.child.maximal_simplices]
    return {"schema_version": SCHEMA_VERSION, "t": smap.t, "parent": complex_to_dict(P),
            "vertices": verts, "top_simplices": tops}


def subdivision_from_dict(d):
    from .subdivision import edgewise_subdivide

    P = complex_from_dict(d["parent"])
    smap = edgewise_subdivide(P, d["t"])
    keys = [tuple(zip(P.simplices[v["parent_simplex"]], v["numerators"])) for v in d["vertices"]]
    if tuple(keys) != smap.vertex_keys:
        raise ParseError("subdivision vertices do not match the canonical edgewise subdivision")
    return smap


def default_out_dir() -> Path:
    return Path(os.environ.get("THICKEMBED_OUT", "."))
