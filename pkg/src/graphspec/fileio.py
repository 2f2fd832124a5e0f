"""CSV / JSON formats for graphs, ensembles, PSDs, and fitted models.

Graphs travel as edge-list CSV (``src,dst,weight`` header, one row per
directed entry ``S[dst, src] = weight``) or as dense matrix CSV with a
header row.  Ensembles are N x R matrix CSV plus a JSON metadata sidecar.
PSDs and models are JSON documents.  All values are written with ``repr``
so identical data produces identical bytes.
"""
from __future__ import annotations

import json
import os

import numpy as np

from .errors import InputError, InvalidSpec
from .processes import PsdEstimate, SignalEnsemble
from .spectral import GraphShift

EDGE_HEADER = "src,dst,weight"


def _require_real(arr, what):
    if np.iscomplexobj(arr):
        raise InputError(f"{what} with complex values cannot be stored as CSV")
    return np.asarray(arr, dtype=float)


def save_edge_list(shift, path):
    """Write the off-diagonal entries of an adjacency shift as an edge list.

    The format cannot represent trailing isolated vertices (the node count
    is recovered from the largest index present).
    """
    a = _require_real(shift.matrix, "graph")
    lines = [EDGE_HEADER]
    for dst, src in np.argwhere(a != 0):
        if dst == src:
            continue
        lines.append(f"{src},{dst},{float(a[dst, src])!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def save_matrix_csv(matrix, path, prefix="c"):
    """Dense matrix CSV with a generated header row."""
    m = _require_real(np.atleast_2d(matrix), "matrix")
    header = ",".join(f"{prefix}{j}" for j in range(m.shape[1]))
    lines = [header]
    for row in m:
        lines.append(",".join(repr(float(v)) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_matrix_csv(path):
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def load_adjacency(path):
    """Read a graph as edge-list CSV or dense matrix CSV (sniffed by header)."""
    with open(path) as fh:
        header = fh.readline().strip()
    if header == EDGE_HEADER:
        rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if rows.size == 0:
            raise InvalidSpec(f"{path} contains no edges")
        n = int(rows[:, :2].max()) + 1
        a = np.zeros((n, n))
        for src, dst, w in rows:
            a[int(dst), int(src)] = w
        return a
    return load_matrix_csv(path)


def build_shift(adjacency, kind="adjacency"):
    """Assemble the shift from a loaded adjacency matrix."""
    a = np.asarray(adjacency, dtype=float)
    if kind == "adjacency":
        return GraphShift(a, "adjacency")
    if kind == "laplacian":
        if not np.allclose(a, a.T):
            raise InvalidSpec("Laplacian shift needs a symmetric adjacency")
        return GraphShift(np.diag(a.sum(axis=1)) - a, "laplacian")
    raise InvalidSpec(f"unknown shift kind {kind!r}")


def load_shift(path, kind="adjacency"):
    return build_shift(load_adjacency(path), kind)


def _sidecar(path):
    base, _ = os.path.splitext(path)
    return base + ".json"


def save_ensemble(ens, path, meta=None):
    """Ensemble as N x R CSV (columns r0..r{R-1}) plus a JSON sidecar."""
    save_matrix_csv(_require_real(ens.data, "ensemble"), path, prefix="r")
    doc = {"n": ens.n, "r": ens.r, "noise_kind": ens.noise_kind}
    if ens.generator is not None:
        doc["filter"] = [float(c) for c in ens.generator.coeffs]
    doc.update(meta or {})
    with open(_sidecar(path), "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_ensemble(path):
    """Read an ensemble CSV; the sidecar (when present) restores metadata."""
    data = load_matrix_csv(path)
    noise_kind, meta = "gaussian", {}
    sidecar = _sidecar(path)
    if os.path.exists(sidecar):
        with open(sidecar) as fh:
            meta = json.load(fh)
        noise_kind = meta.get("noise_kind", "gaussian")
    return SignalEnsemble(data, noise_kind), meta


def save_psd(est, path):
    """PSD JSON document: ``{"p": [...], "method": {...}, "meta": {...}}``."""
    doc = {
        "p": [float(v) for v in est.values],
        "method": dict(est.method),
        "meta": dict(est.meta),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_psd(path):
    with open(path) as fh:
        doc = json.load(fh)
    if "p" not in doc:
        raise InvalidSpec(f"{path} is not a PSD document (missing 'p')")
    return PsdEstimate(
        np.asarray(doc["p"], dtype=float),
        method=doc.get("method", {}),
        meta=doc.get("meta", {}),
    )


def save_model(doc, path):
    """Fitted model JSON: name, coefficients, objective, diagnostics."""
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")


def load_vector(text_or_path, n=None):
    """Parse a comma-separated vector, a scalar, or a JSON/CSV file path."""
    if os.path.exists(text_or_path):
        if text_or_path.endswith(".json"):
            return load_psd(text_or_path).values
        return load_matrix_csv(text_or_path).ravel()
    try:
        values = np.asarray(
            [float(tok) for tok in str(text_or_path).split(",") if tok != ""]
        )
    except ValueError as exc:
        raise InvalidSpec(f"cannot parse vector {text_or_path!r}") from exc
    if values.size == 1 and n is not None:
        values = np.full(n, values[0])
    return values
