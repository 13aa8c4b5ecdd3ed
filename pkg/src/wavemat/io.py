"""JSON documents and CSV export.

Every document is a JSON object with ``schema_version``, ``kind``,
``field`` (``"c64"`` or ``"qi"``) and the payload for its kind:

==========  ==============================================
kind        payload
==========  ==============================================
matrix      ``m``, ``N``, ``coeffs[k][row][col]``
params      ``m``, ``N``, ``gamma[i][k]`` (``(m-1) x N``)
chain       ``m``, ``N``, ``directions[j][coord]``
row         ``m``, ``N``, ``row[k][col]``
unitary     ``m``, ``matrix[row][col]``
==========  ==============================================

Scalars are ``"p/q+r/s*i"`` strings on ``qi`` and ``[re, im]`` pairs on
``c64``.  Canonical output sorts keys, indents by two spaces and writes
floats with 17 significant digits, so it is stable under a parse and
re-serialize cycle.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .complete import RowVector
from .core import WaveletMatrix, to_flat
from .errors import DimensionMismatch, WaveMatError
from .factorize import FactorChain
from .field import Field, get_field
from .parametrize import ParamPoint

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "DocumentError",
    "dumps",
    "loads",
    "doc_field",
    "matrix_to_doc",
    "doc_to_matrix",
    "params_to_doc",
    "doc_to_params",
    "chain_to_doc",
    "doc_to_chain",
    "row_to_doc",
    "doc_to_row",
    "unitary_to_doc",
    "doc_to_unitary",
    "flat_csv",
]


class DocumentError(WaveMatError):
    """Malformed or inconsistent input document."""

    kind = "parse error"

    def __init__(self, message, kind=None):
        super().__init__(message)
        if kind is not None:
            self.kind = kind


# -- canonical JSON --------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("non-finite numbers have no JSON form")
    s = format(x, ".17g")
    if s == "-0":
        s = "0"
    return s


def _emit(obj, indent, out):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = sorted(obj.items())
        for n, (k, v) in enumerate(items):
            out.append(f"{pad}  {json.dumps(str(k))}: ")
            _emit(v, indent + 1, out)
            out.append(",\n" if n + 1 < len(items) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for n, v in enumerate(obj):
            out.append(pad + "  ")
            _emit(v, indent + 1, out)
            out.append(",\n" if n + 1 < len(obj) else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON text (sorted keys, 17 significant digits), newline terminated."""
    out = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out)


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("a document must be a JSON object")
    return doc


# -- helpers ------------------------------------------------------------------------


def _require(doc, key, kind=None):
    if kind is not None and doc.get("kind", kind) != kind:
        raise DocumentError(f"expected a {kind} document, got {doc.get('kind')!r}")
    if key not in doc:
        raise DocumentError(f"missing key {key!r}")
    return doc[key]


def _int(doc, key):
    v = _require(doc, key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise DocumentError(f"{key!r} must be a nonnegative integer")
    return v


def _tag_field(doc):
    try:
        return get_field(doc.get("field", "c64"))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def doc_field(doc, override: Field | None = None) -> Field:
    """Backend for a document: ``override`` if given, else its tag, else c64."""
    return override if override is not None else _tag_field(doc)


def _decode(doc, key, kind, depth, target):
    """Decode a nested list of scalars written in the document's own encoding."""
    src = _tag_field(doc)
    arr = _require(doc, key, kind)

    def walk(a, d):
        if d == 0:
            try:
                return target.coerce(src.from_json(a))
            except (ValueError, TypeError) as exc:
                raise DocumentError(f"{key}: {exc}") from None
        if not isinstance(a, list):
            raise DocumentError(f"{key}: expected a nested list of depth {depth}")
        return [walk(x, d - 1) for x in a]

    return walk(arr, depth)


def _encode(field, arr):
    if isinstance(arr, (list, tuple)):
        return [_encode(field, a) for a in arr]
    return field.to_json(arr)


def _header(kind, field, **extra):
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "field": field.tag, **extra}


def _check_version(doc):
    v = doc.get("schema_version", SCHEMA_VERSION)
    if v != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {v!r}")


# -- documents -----------------------------------------------------------------------


def matrix_to_doc(A: WaveletMatrix):
    f = A.field
    return _header("matrix", f, m=A.m, N=A.N, coeffs=_encode(f, A.coeffs()))


def doc_to_matrix(doc, field: Field | None = None) -> WaveletMatrix:
    _check_version(doc)
    f = doc_field(doc, field)
    coeffs = _decode(doc, "coeffs", "matrix", 3, f)
    m, N = _int(doc, "m"), _int(doc, "N")
    if len(coeffs) != N + 1 or any(len(M) != m or any(len(r) != m for r in M) for M in coeffs):
        raise DocumentError(f"coeffs must be {N + 1} blocks of {m}x{m}", kind="dimension mismatch")
    return WaveletMatrix.from_coeffs(coeffs, f)


def params_to_doc(p: ParamPoint):
    f = p.field
    return _header("params", f, m=p.m, N=p.N, gamma=_encode(f, [list(r) for r in p.gamma]))


def doc_to_params(doc, field: Field | None = None) -> ParamPoint:
    _check_version(doc)
    f = doc_field(doc, field)
    gamma = _decode(doc, "gamma", "params", 2, f)
    m, N = _int(doc, "m"), _int(doc, "N")
    try:
        return ParamPoint(m, N, tuple(map(tuple, gamma)), f)
    except DimensionMismatch as exc:
        raise DocumentError(str(exc), kind="dimension mismatch") from None


def chain_to_doc(chain: FactorChain):
    f = chain.field
    dirs = [list(v.v) for v in chain.factors]
    return _header("chain", f, m=chain.m, N=len(dirs), directions=_encode(f, dirs))


def doc_to_chain(doc, field: Field | None = None) -> FactorChain:
    _check_version(doc)
    f = doc_field(doc, field)
    dirs = _decode(doc, "directions", "chain", 2, f)
    m = _int(doc, "m")
    if "N" in doc and _int(doc, "N") != len(dirs):
        raise DocumentError("N must equal the number of directions", kind="dimension mismatch")
    if any(len(d) != m for d in dirs):
        raise DocumentError(f"every direction must have {m} entries", kind="dimension mismatch")
    try:
        return FactorChain(tuple(map(tuple, dirs)), m, f)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def row_to_doc(r: RowVector):
    f = r.field
    return _header("row", f, m=r.m, N=r.N, row=_encode(f, r.coeffs()))


def doc_to_row(doc, field: Field | None = None) -> RowVector:
    _check_version(doc)
    f = doc_field(doc, field)
    coeffs = _decode(doc, "row", "row", 2, f)
    m, N = _int(doc, "m"), _int(doc, "N")
    if len(coeffs) != N + 1 or any(len(c) != m for c in coeffs):
        raise DocumentError(f"row must be {N + 1} blocks of {m} entries", kind="dimension mismatch")
    return RowVector.from_coeffs(coeffs, f)


def unitary_to_doc(V, field: Field):
    return _header("unitary", field, m=len(V), matrix=_encode(field, V))


def doc_to_unitary(doc, field: Field | None = None):
    _check_version(doc)
    f = doc_field(doc, field)
    V = _decode(doc, "matrix", "unitary", 2, f)
    m = doc.get("m", len(V))
    if len(V) != m or any(len(r) != m for r in V):
        raise DocumentError(f"matrix must be {m}x{m}", kind="dimension mismatch")
    return V


# -- CSV ---------------------------------------------------------------------------


def _csv_scalar(field, a):
    if field.exact:
        return str(a)
    a = complex(a)
    if a.imag == 0:
        return _fmt_float(a.real)
    sign = "-" if a.imag < 0 else "+"
    return f"{_fmt_float(a.real)}{sign}{_fmt_float(abs(a.imag))}j"


def flat_csv(A: WaveletMatrix) -> str:
    """Flat rows ``a^i_0 .. a^i_{m(N+1)-1}``, one CSV line per row."""
    flat = to_flat(A)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in flat.rows:
        w.writerow([_csv_scalar(A.field, a) for a in row])
    return buf.getvalue()
