"""JSON and CSV serialisation.

Complex numbers are written as ``[re, im]`` pairs.  Floats use ``repr`` so a
write/read round trip is exact and repeated runs are byte-identical.

CSV layout::

    # key=value
    # key=value
    omega,value
    19.5,0.0123
"""

from __future__ import annotations

import io
import json
from pathlib import Path

import numpy as np

from .core import product_labels, validate_density


def _pairs(a: np.ndarray):
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [_pairs(x) for x in a]


def _unpair(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.shape[-1:] != (2,):
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def density_to_json(rho: np.ndarray, labels=None) -> dict:
    rho = np.asarray(rho, dtype=complex)
    n = int(round(np.log2(rho.shape[0])))
    return {"basis": list(labels or product_labels(n)), "density": _pairs(rho)}


def state_to_json(psi: np.ndarray, labels=None) -> dict:
    psi = np.asarray(psi, dtype=complex)
    n = int(round(np.log2(psi.shape[0])))
    return {"basis": list(labels or product_labels(n)), "state": _pairs(psi)}


def generator_to_json(lam: np.ndarray, labels) -> dict:
    labels = list(labels)
    pairs = [f"{a},{b}" for a in labels for b in labels]
    return {"basis": labels, "rows": pairs, "generator": _pairs(lam)}


def density_from_json(obj) -> np.ndarray:
    """Density matrix from a parsed document holding ``density`` or ``state``.

    The ``basis`` field must list product labels in the canonical order.
    """
    if not isinstance(obj, dict) or "basis" not in obj:
        raise ValueError("document needs a 'basis' field")
    basis = list(obj["basis"])
    n = len(basis[0]) if basis else 0
    if n == 0 or basis != list(product_labels(n)):
        raise ValueError(f"basis must be {list(product_labels(max(n, 1)))} style product labels")
    d = 2**n
    if "density" in obj:
        rho = _unpair(obj["density"])
        if rho.shape != (d, d):
            raise ValueError(f"density must be {d}x{d}")
    elif "state" in obj:
        psi = _unpair(obj["state"])
        if psi.shape != (d,):
            raise ValueError(f"state must have {d} entries")
        rho = np.outer(psi, psi.conj())
    else:
        raise ValueError("document needs 'density' or 'state'")
    return validate_density(rho, 1e-10, 1e-10)


def load_density(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return density_from_json(json.load(fh))


def _fmt(x) -> str:
    return repr(float(x))


def format_csv(header: dict, columns: list[str], data: np.ndarray) -> str:
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[1] != len(columns):
        raise ValueError("data shape does not match columns")
    buf = io.StringIO()
    for key, val in header.items():
        if "\n" in str(val) or "=" in str(key):
            raise ValueError(f"header entry {key!r} cannot be written")
        buf.write(f"# {key}={val}\n")
    buf.write(",".join(columns) + "\n")
    for row in data:
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    return buf.getvalue()


def parse_csv(text: str) -> tuple[dict, list[str], np.ndarray]:
    header: dict[str, str] = {}
    lines = text.split("\n")
    k = 0
    while k < len(lines) and lines[k].startswith("# "):
        key, sep, val = lines[k][2:].partition("=")
        if not sep:
            raise ValueError(f"malformed header line {lines[k]!r}")
        header[key] = val
        k += 1
    if k >= len(lines) or not lines[k]:
        raise ValueError("missing column line")
    columns = lines[k].split(",")
    rows = [ln for ln in lines[k + 1:] if ln]
    data = np.array([[float(x) for x in ln.split(",")] for ln in rows], dtype=float)
    if rows and data.shape[1] != len(columns):
        raise ValueError("row width does not match columns")
    return header, columns, data.reshape(len(rows), len(columns))


def format_json(header: dict, columns: list[str], data: np.ndarray) -> str:
    data = np.asarray(data, dtype=float)
    doc = {"header": {k: str(v) for k, v in header.items()}, "columns": list(columns),
           "data": {c: [float(x) for x in data[:, i]] for i, c in enumerate(columns)}}
    return json.dumps(doc, indent=1) + "\n"


def parse_json(text: str) -> tuple[dict, list[str], np.ndarray]:
    doc = json.loads(text)
    cols = doc["columns"]
    data = np.column_stack([np.asarray(doc["data"][c], dtype=float) for c in cols]) if cols else np.zeros((0, 0))
    return doc["header"], cols, data


def write_table(path, header: dict, columns: list[str], data: np.ndarray, fmt: str = "csv") -> str:
    """Render the table and write it to ``path`` (skipped when ``path`` is None)."""
    if fmt == "csv":
        text = format_csv(header, columns, data)
    elif fmt == "json":
        text = format_json(header, columns, data)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text


def read_table(path) -> tuple[dict, list[str], np.ndarray]:
    text = Path(path).read_text(encoding="utf-8")
    return parse_json(text) if text.lstrip().startswith("{") else parse_csv(text)
