"""JSON and CSV encodings.

Complex numbers are ``[re, im]`` pairs written with the shortest decimal
that round-trips the IEEE double (Python's ``repr``), so encoded files are
byte-stable.  Document layouts::

    Bicomplex       {"z1": [re, im], "z2": [re, im]}
    CMatrix         {"rows": p, "cols": q, "entries": [[[re, im], ...], ...]}
    BCMatrix        {"rows": p, "cols": q, "M1": [[...]], "M2": [[...]]}
                    (input may give {"P1": ..., "P2": ...} channels instead)
    series          {"p": p, "q": q, "terms": [{"n": n, "coeff": <BCMatrix>}, ...]}
    complex series  same, with "kind": "complex" and <CMatrix> coefficients
    Realization     {"A": <CMatrix>, "B": ..., "C": ..., "D": ...}
    PartialFractions {"D": <CMatrix>, "poles": [{"p": [re, im], "H": [<CMatrix>, ...]}]}
    FactorOptions   {"K", "N", "newton_tol", "max_iter", "normalization"}
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from typing import Iterable

import numpy as np

from .bicomplex import Bicomplex, BoundaryPoint
from .errors import SchemaError
from .linalg import BCMatrix
from .realization import PartialFractions, PolePart, Realization
from .series import BCLaurentSeries, ChannelSeries
from .spectral import FactorOptions

__all__ = [
    "dumps",
    "encode_complex",
    "decode_complex",
    "encode_bicomplex",
    "decode_bicomplex",
    "encode_cmatrix",
    "decode_cmatrix",
    "encode_bcmatrix",
    "decode_bcmatrix",
    "encode_series",
    "decode_series",
    "encode_complex_series",
    "decode_complex_series",
    "encode_realization",
    "decode_realization",
    "encode_partial_fractions",
    "decode_partial_fractions",
    "encode_options",
    "decode_options",
    "samples_csv",
    "sweep_csv",
]

SAMPLE_COLUMNS = ("t", "s", "entry_row", "entry_col", "re_z1", "im_z1", "re_z2", "im_z2")
SWEEP_COLUMNS = ("m", "a", "t", "s", "err")


def _num(x) -> float:
    x = float(x)
    # normalize -0.0 so that equal values encode identically
    return 0.0 if x == 0 else x


def _render(obj, level: int) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_render(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return json.dumps(list(obj), allow_nan=False)
        # rows of scalar pairs stay on one line
        if all(isinstance(v, (list, tuple)) and all(not isinstance(w, (dict, list, tuple)) for w in v) for v in obj):
            return "[" + ", ".join(json.dumps(list(v), allow_nan=False) for v in obj) + "]"
        items = [inner + _render(v, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj, allow_nan=False)


def dumps(obj) -> str:
    """Deterministic JSON text (trailing newline included).

    Objects and nested lists are indented; lists of scalars and rows of
    ``[re, im]`` pairs are kept on one line.
    """
    return _render(obj, 0) + "\n"


def _require(doc, key: str, where: str):
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object, got {type(doc).__name__}")
    if key not in doc:
        raise SchemaError(f"{where}: missing key {key!r}")
    return doc[key]


# scalars ------------------------------------------------------------------


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def decode_complex(doc, where: str = "complex") -> complex:
    if isinstance(doc, (int, float)) and not isinstance(doc, bool):
        val = complex(doc)
    elif (
        isinstance(doc, list)
        and len(doc) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in doc)
    ):
        val = complex(doc[0], doc[1])
    else:
        raise SchemaError(f"{where}: expected [re, im], got {doc!r}")
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise SchemaError(f"{where}: non-finite value")
    return val


def encode_bicomplex(Z: Bicomplex) -> dict:
    return {"z1": encode_complex(Z.z1), "z2": encode_complex(Z.z2)}


def decode_bicomplex(doc, where: str = "bicomplex") -> Bicomplex:
    return Bicomplex(
        decode_complex(_require(doc, "z1", where), f"{where}.z1"),
        decode_complex(_require(doc, "z2", where), f"{where}.z2"),
    )


# matrices -----------------------------------------------------------------


def _encode_grid(a: np.ndarray) -> list:
    return [[encode_complex(x) for x in row] for row in a]


def _decode_grid(doc, where: str, shape: tuple[int, int] | None = None) -> np.ndarray:
    if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
        raise SchemaError(f"{where}: expected a list of rows")
    rows = [[decode_complex(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(doc)]
    if len({len(r) for r in rows}) > 1:
        raise SchemaError(f"{where}: ragged rows")
    ncols = len(rows[0]) if rows else (shape[1] if shape else 0)
    out = np.array(rows, dtype=complex).reshape(len(rows), ncols)
    if shape is not None and out.shape != tuple(shape):
        raise SchemaError(f"{where}: shape {out.shape} does not match declared {tuple(shape)}")
    return out


def _declared_shape(doc, where: str) -> tuple[int, int] | None:
    if "rows" not in doc and "cols" not in doc:
        return None
    r, c = _require(doc, "rows", where), _require(doc, "cols", where)
    if not (isinstance(r, int) and isinstance(c, int)) or r < 0 or c < 0:
        raise SchemaError(f"{where}: rows/cols must be nonnegative integers")
    return r, c


def encode_cmatrix(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"rows": a.shape[0], "cols": a.shape[1], "entries": _encode_grid(a)}


def decode_cmatrix(doc, where: str = "matrix") -> np.ndarray:
    if isinstance(doc, list):
        return _decode_grid(doc, where)
    shape = _declared_shape(doc, where)
    return _decode_grid(_require(doc, "entries", where), f"{where}.entries", shape)


def encode_bcmatrix(M: BCMatrix) -> dict:
    p, q = M.shape
    return {"rows": p, "cols": q, "M1": _encode_grid(M.M1), "M2": _encode_grid(M.M2)}


def decode_bcmatrix(doc, where: str = "bcmatrix") -> BCMatrix:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    shape = _declared_shape(doc, where)
    try:
        if "P1" in doc or "P2" in doc:
            P1 = _decode_grid(_require(doc, "P1", where), f"{where}.P1", shape)
            P2 = _decode_grid(_require(doc, "P2", where), f"{where}.P2", shape)
            return BCMatrix.from_channels(P1, P2)
        M1 = _decode_grid(_require(doc, "M1", where), f"{where}.M1", shape)
        M2 = _decode_grid(_require(doc, "M2", where), f"{where}.M2", shape)
        return BCMatrix(M1, M2)
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"{where}: {exc}") from exc


# series -------------------------------------------------------------------


def encode_series(f: BCLaurentSeries) -> dict:
    return {
        "p": f.p,
        "q": f.q,
        "terms": [{"n": n, "coeff": encode_bcmatrix(M)} for n, M in f.terms()],
    }


def _decode_terms(doc, where: str, decode_coeff):
    p, q = _require(doc, "p", where), _require(doc, "q", where)
    if not (isinstance(p, int) and isinstance(q, int)) or p < 1 or q < 1:
        raise SchemaError(f"{where}: p and q must be positive integers")
    terms = _require(doc, "terms", where)
    if not isinstance(terms, list):
        raise SchemaError(f"{where}.terms: expected a list")
    out = {}
    for i, t in enumerate(terms):
        n = _require(t, "n", f"{where}.terms[{i}]")
        if not isinstance(n, int) or isinstance(n, bool):
            raise SchemaError(f"{where}.terms[{i}].n: expected an integer")
        if n in out:
            raise SchemaError(f"{where}.terms[{i}]: duplicate index n={n}")
        c = decode_coeff(_require(t, "coeff", f"{where}.terms[{i}]"), f"{where}.terms[{i}].coeff")
        if c.shape != (p, q):
            raise SchemaError(f"{where}.terms[{i}]: coefficient shape {c.shape} != ({p}, {q})")
        out[n] = c
    return (p, q), out


def decode_series(doc, where: str = "series") -> BCLaurentSeries:
    shape, terms = _decode_terms(doc, where, decode_bcmatrix)
    return BCLaurentSeries.from_terms(terms, shape)


def encode_complex_series(F: ChannelSeries) -> dict:
    p, q = F.shape
    return {
        "kind": "complex",
        "p": p,
        "q": q,
        "terms": [{"n": n, "coeff": encode_cmatrix(c)} for n, c in F.terms()],
    }


def decode_complex_series(doc, where: str = "series") -> ChannelSeries:
    shape, terms = _decode_terms(doc, where, decode_cmatrix)
    return ChannelSeries.from_terms(terms, shape)


def is_complex_series(doc) -> bool:
    return isinstance(doc, dict) and doc.get("kind") == "complex"


# realizations -------------------------------------------------------------


def encode_realization(R: Realization) -> dict:
    return {k: encode_cmatrix(getattr(R, k)) for k in "ABCD"}


def decode_realization(doc, where: str = "realization") -> Realization:
    mats = {k: decode_cmatrix(_require(doc, k, where), f"{where}.{k}") for k in "ABCD"}
    try:
        return Realization(**mats)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def encode_partial_fractions(pf: PartialFractions) -> dict:
    return {
        "D": encode_cmatrix(pf.D),
        "poles": [{"p": encode_complex(pp.p), "H": [encode_cmatrix(h) for h in pp.H]} for pp in pf.poles],
    }


def decode_partial_fractions(doc, where: str = "partial_fractions") -> PartialFractions:
    D = decode_cmatrix(_require(doc, "D", where), f"{where}.D")
    poles_doc = doc.get("poles", [])
    if not isinstance(poles_doc, list):
        raise SchemaError(f"{where}.poles: expected a list")
    poles = []
    for i, pd in enumerate(poles_doc):
        w = f"{where}.poles[{i}]"
        p = decode_complex(_require(pd, "p", w), f"{w}.p")
        H = _require(pd, "H", w)
        if not isinstance(H, list) or not H:
            raise SchemaError(f"{w}.H: expected a nonempty list")
        poles.append(PolePart(p, tuple(decode_cmatrix(h, f"{w}.H[{k}]") for k, h in enumerate(H))))
    try:
        return PartialFractions(D, tuple(poles))
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


# options ------------------------------------------------------------------


def encode_options(opts: FactorOptions) -> dict:
    return {
        "K": opts.K,
        "N": opts.N,
        "newton_tol": opts.newton_tol,
        "max_iter": opts.max_iter,
        "normalization": opts.normalization,
    }


def decode_options(doc, where: str = "options") -> FactorOptions:
    if doc is None:
        return FactorOptions()
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    unknown = set(doc) - {"K", "N", "newton_tol", "max_iter", "normalization", "pd_tol"}
    if unknown:
        raise SchemaError(f"{where}: unknown keys {sorted(unknown)}")
    try:
        return FactorOptions(**doc)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc


# CSV ----------------------------------------------------------------------


def _fmt(x) -> str:
    return repr(_num(x))


def samples_csv(f: BCLaurentSeries, points: Iterable[BoundaryPoint]) -> str:
    """Evaluate ``f`` at each point; one row per matrix entry."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SAMPLE_COLUMNS)
    for pt in points:
        M = f.eval(pt)
        for r in range(M.shape[0]):
            for c in range(M.shape[1]):
                z1, z2 = M.M1[r, c], M.M2[r, c]
                w.writerow([_fmt(pt.t), _fmt(pt.s), r, c, _fmt(z1.real), _fmt(z1.imag), _fmt(z2.real), _fmt(z2.imag)])
    return buf.getvalue()


def sweep_csv(rows: Iterable[tuple]) -> str:
    """CSV with columns ``m, a, t, s, err``; ``a`` may be ``None`` (left empty)."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for m, a, t, s, err in rows:
        w.writerow([int(m), "" if a is None else _fmt(a), _fmt(t), _fmt(s), _fmt(err)])
    return buf.getvalue()
