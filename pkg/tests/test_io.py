import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thickembed import EmbeddedComplex, build_complex, edgewise_subdivide
from thickembed.errors import ParseError
from thickembed.io import (IOFailure, complex_from_dict, complex_to_dict, dumps_json, embedding_from_dict,
                           embedding_to_dict, format_emb, format_scx, parse_emb, parse_scx, read_emb,
                           read_json, subdivision_from_dict, subdivision_to_dict)


@st.composite
def complexes(draw, max_v=12):
    V = draw(st.integers(0, max_v))
    k = draw(st.integers(0, 3))
    if V == 0:
        return build_complex([], 0, dim=k)
    tops = draw(st.lists(st.lists(st.integers(0, V - 1), min_size=1, max_size=k + 1, unique=True), max_size=10))
    return build_complex(tops, V, dim=k)


finite = st.floats(allow_nan=False, allow_infinity=False, width=64, min_value=-1e12, max_value=1e12)


@st.composite
def embeddings(draw):
    X = draw(complexes())
    n = draw(st.integers(1, 5))
    vals = draw(st.lists(finite, min_size=X.n_vertices * n, max_size=X.n_vertices * n))
    return EmbeddedComplex(X, np.array(vals, dtype=float).reshape(X.n_vertices, n))


@settings(max_examples=200, deadline=None)
@given(complexes())
def test_scx_roundtrip(X):
    assert parse_scx(format_scx(X)) == X


@settings(max_examples=200, deadline=None)
@given(embeddings())
def test_emb_roundtrip(E):
    F = parse_emb(format_emb(E))
    assert F.complex == E.complex
    assert np.array_equal(F.coords, E.coords)


@settings(max_examples=200, deadline=None)
@given(embeddings())
def test_json_roundtrip(E):
    d = json.loads(dumps_json(embedding_to_dict(E)))
    F = embedding_from_dict(d)
    assert F.complex == E.complex and np.array_equal(F.coords, E.coords)
    assert complex_from_dict(complex_to_dict(E.complex)) == E.complex


def test_subdivision_json_roundtrip():
    X = build_complex([(0, 1, 2), (2, 3)], 5)
    smap = edgewise_subdivide(X, 3)
    back = subdivision_from_dict(json.loads(dumps_json(subdivision_to_dict(smap))))
    assert back.child == smap.child and back.vertex_keys == smap.vertex_keys
    d = subdivision_to_dict(smap)
    d["vertices"][-1]["numerators"] = [99] * len(d["vertices"][-1]["numerators"])
    with pytest.raises(ParseError):
        subdivision_from_dict(d)


def test_comments_and_blank_lines():
    X = parse_scx("# a triangle\nscx 2 4\n\n0 1 2  # top\n3\n")
    assert X.f_vector() == (4, 3, 1)


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("scx 1\n", 1),
    ("scx 1 3\n0 1\n0 x\n", 3),
    ("scx 1 3\n0 1 2\n", 2),
    ("scx 1 3\n0 3\n", 2),
    ("scx 1 3\n1 1\n", 2),
])
def test_scx_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_scx(text)
    assert info.value.line == line


def test_emb_errors():
    with pytest.raises(ParseError):
        parse_emb("scx 1 2\n0 1\n")
    with pytest.raises(ParseError) as info:
        parse_emb("scx 1 2\n0 1\nn 2\n0 0\n1\n")
    assert info.value.line == 5
    with pytest.raises(ParseError):
        parse_emb("scx 1 2\n0 1\nn 1\n0\nnan\n")


def test_missing_file(tmp_path):
    with pytest.raises(IOFailure):
        read_emb(tmp_path / "nope.emb")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ParseError):
        read_json(bad)


def test_numpy_values_serialize():
    s = dumps_json({"a": np.float64(0.1), "b": np.int64(3), "c": np.arange(2), "d": (1, 2)})
    assert json.loads(s) == {"a": 0.1, "b": 3, "c": [0, 1], "d": [1, 2]}
