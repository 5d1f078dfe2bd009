"""JSON serialization for matrices, channels, witnesses and results.

Complex matrices are stored as ``{"rows", "cols", "data": [[re, im], ...]}``
in row-major order; real matrices as ``{"rows", "cols", "data": [x, ...]}``.
Floats are written with Python's shortest round-trip representation, so a
write followed by a read reproduces every entry bit for bit.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """A JSON document does not match the expected layout; the message names the field."""


def _finite(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {type(x).__name__}")
    x = float(x)
    if not math.isfinite(x):
        raise SchemaError(f"{where}: non-finite value")
    return x


def _shape(doc, kind: str) -> tuple[int, int]:
    if not isinstance(doc, dict):
        raise SchemaError(f"{kind}: expected a JSON object, got {type(doc).__name__}")
    for key in ("rows", "cols", "data"):
        if key not in doc:
            raise SchemaError(f"{kind}: missing field {key!r}")
    rows, cols = doc["rows"], doc["cols"]
    for key, val in (("rows", rows), ("cols", cols)):
        if isinstance(val, bool) or not isinstance(val, int) or val <= 0:
            raise SchemaError(f"{kind}: field {key!r} must be a positive integer, got {val!r}")
    if not isinstance(doc["data"], list):
        raise SchemaError(f"{kind}: field 'data' must be a list")
    if len(doc["data"]) != rows * cols:
        raise SchemaError(f"{kind}: field 'data' has {len(doc['data'])} entries, expected rows*cols = {rows * cols}")
    return rows, cols


def matrix_to_json(mat) -> dict:
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2:
        raise ValueError("expected a 2-D array")
    rows, cols = mat.shape
    data = [[float(z.real), float(z.imag)] for z in mat.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_json(doc) -> np.ndarray:
    rows, cols = _shape(doc, "matrix")
    out = np.empty(rows * cols, dtype=complex)
    for idx, entry in enumerate(doc["data"]):
        where = f"matrix: field 'data'[{idx}]"
        if not isinstance(entry, list) or len(entry) != 2:
            raise SchemaError(f"{where}: expected a [re, im] pair, got {entry!r}")
        out[idx] = complex(_finite(entry[0], where + "[0]"), _finite(entry[1], where + "[1]"))
    return out.reshape(rows, cols)


def real_matrix_to_json(mat) -> dict:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim == 1:
        mat = mat.reshape(1, -1)
    rows, cols = mat.shape
    return {"rows": rows, "cols": cols, "data": [float(x) for x in mat.reshape(-1)]}


def real_matrix_from_json(doc) -> np.ndarray:
    rows, cols = _shape(doc, "real matrix")
    vals = [_finite(x, f"real matrix: field 'data'[{i}]") for i, x in enumerate(doc["data"])]
    return np.array(vals, dtype=float).reshape(rows, cols)


def _load(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def write_matrix(path, mat) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(mat)) + "\n")


def read_matrix(path) -> np.ndarray:
    return matrix_from_json(_load(path))


def dumps(doc) -> str:
    """Deterministic JSON text (sorted keys)."""
    return json.dumps(doc, sort_keys=True)


# ---------------------------------------------------------------------------
# envelopes


def witness_to_json(w) -> dict:
    doc = {
        "dims": list(w.dims),
        "op": matrix_to_json(w.op),
        "trace_normalized": bool(w.trace_normalized),
        "positive": bool(w.positive),
        "label": w.label,
    }
    if w.decomposable_form is not None:
        form = w.decomposable_form
        doc["decomposable_form"] = {"P": matrix_to_json(form.p), "Q": matrix_to_json(form.q), "eps": form.eps}
    return doc


def witness_from_json(doc):
    from .witnesses import DecomposableForm, Witness

    if not isinstance(doc, dict) or "op" not in doc or "dims" not in doc:
        raise SchemaError("witness: expected fields 'dims' and 'op'")
    form = None
    if "decomposable_form" in doc:
        f = doc["decomposable_form"]
        form = DecomposableForm(matrix_from_json(f["P"]), matrix_from_json(f["Q"]), _finite(f["eps"], "eps"))
    return Witness(tuple(doc["dims"]), matrix_from_json(doc["op"]), bool(doc.get("trace_normalized", False)),
                   form, bool(doc.get("positive", False)), doc.get("label", ""))


def channel_to_json(ch) -> dict:
    return {"n": ch.n, "X": real_matrix_to_json(ch.x), "Y": real_matrix_to_json(ch.y),
            "v": [float(x) for x in ch.v]}


def channel_from_json(doc):
    from .gaussian import GaussianChannelCM

    for key in ("n", "X", "Y", "v"):
        if key not in doc:
            raise SchemaError(f"channel: missing field {key!r}")
    return GaussianChannelCM(int(doc["n"]), real_matrix_from_json(doc["X"]), real_matrix_from_json(doc["Y"]),
                             np.array([_finite(x, "channel: field 'v'") for x in doc["v"]]))


def spa_result_to_json(res) -> dict:
    approx = res.approx
    op = approx.choi if hasattr(approx, "choi") else approx.op
    doc = {"p_star": res.p_star, "lambda_min": res.lambda_min, "method": res.method,
           "degenerate": res.degenerate, "approx": matrix_to_json(op)}
    if res.p_check is not None:
        doc["p_check"] = res.p_check
    return doc


def verdict_to_json(v) -> dict:
    doc = {"status": v.status, "min_pt_eigenvalue": v.min_pt_eigenvalue}
    if v.certificate:
        doc["certificate"] = [
            {"label": p.label, "kind": p.kind, "weight": float(np.trace(p.operator).real), "products": len(p.products)}
            for p in v.certificate
        ]
    if v.note:
        doc["note"] = v.note
    return doc
