"""Tests for the JSON matrix format and result envelopes."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spacert import gaussian, io, separability, spa, states, witnesses


def test_identity_roundtrip(tmp_path):
    path = tmp_path / "eye.json"
    io.write_matrix(path, np.eye(2))
    np.testing.assert_array_equal(io.read_matrix(path), np.eye(2))


def test_werner_roundtrip_exact(tmp_path):
    path = tmp_path / "w.json"
    rho = states.werner(3, 0.3)
    io.write_matrix(path, rho)
    assert np.abs(io.read_matrix(path) - rho).max() == 0.0


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@st.composite
def complex_matrices(draw):
    shape = draw(st.tuples(st.integers(1, 5), st.integers(1, 5)))
    re = draw(arrays(np.float64, shape, elements=finite))
    im = draw(arrays(np.float64, shape, elements=finite))
    return re + 1j * im


@settings(max_examples=50, deadline=None)
@given(complex_matrices())
def test_roundtrip_bit_exact(mat):
    doc = json.loads(json.dumps(io.matrix_to_json(mat)))
    back = io.matrix_from_json(doc)
    assert back.tobytes() == mat.astype(complex).tobytes()


@pytest.mark.parametrize("doc,field", [
    ({"rows": 2, "cols": 2}, "data"),
    ({"rows": 2, "cols": 2, "data": [[1, 0]] * 3}, "data"),
    ({"rows": 0, "cols": 2, "data": []}, "rows"),
    ({"rows": 1, "cols": 2, "data": [[1, 0], [1]]}, "data'[1]"),
    ({"rows": 1, "cols": 1, "data": [["x", 0]]}, "data'[0][0]"),
    ({"rows": 1, "cols": 1, "data": "nope"}, "data"),
    ([1, 2], "object"),
])
def test_schema_errors_name_field(doc, field):
    with pytest.raises(io.SchemaError, match=field.replace("[", r"\[").replace("]", r"\]")):
        io.matrix_from_json(doc)


def test_invalid_json_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"rows": 1,\n "cols": 1, "data": [[1, 0],]}')
    with pytest.raises(io.SchemaError, match="line 2"):
        io.read_matrix(path)


def test_real_matrix_roundtrip():
    mat = np.arange(6.0).reshape(2, 3) / 7
    np.testing.assert_array_equal(io.real_matrix_from_json(io.real_matrix_to_json(mat)), mat)
    with pytest.raises(io.SchemaError):
        io.real_matrix_from_json({"rows": 1, "cols": 1, "data": [float("nan")]})


def test_witness_roundtrip():
    w = witnesses.random_decomposable_witness((2, 3), np.random.default_rng(0))
    back = io.witness_from_json(json.loads(io.dumps(io.witness_to_json(w))))
    np.testing.assert_array_equal(back.op, w.op)
    assert tuple(back.dims) == (2, 3)
    np.testing.assert_array_equal(back.decomposable_form.q, w.decomposable_form.q)
    with pytest.raises(io.SchemaError):
        io.witness_from_json({"op": {}})


def test_channel_roundtrip():
    ch = gaussian.transposition_channel(2, 2.0)
    back = io.channel_from_json(json.loads(io.dumps(io.channel_to_json(ch))))
    np.testing.assert_array_equal(back.x, ch.x)
    np.testing.assert_array_equal(back.y, ch.y)
    with pytest.raises(io.SchemaError, match="'Y'"):
        io.channel_from_json({"n": 1, "X": io.real_matrix_to_json(np.eye(2)), "v": [0, 0]})


def test_result_envelopes_are_deterministic():
    res = spa.spa_standard(witnesses.tau_witness(3, 1))
    a = io.dumps(io.spa_result_to_json(res))
    b = io.dumps(io.spa_result_to_json(spa.spa_standard(witnesses.tau_witness(3, 1))))
    assert a == b
    doc = json.loads(a)
    assert doc["p_star"] == pytest.approx(0.4) and doc["method"] == "closed_form"
    v = separability.tau_spa_certificate(3, 1)
    vdoc = io.verdict_to_json(v)
    assert vdoc["status"] == "separable_certified" and vdoc["certificate"]
