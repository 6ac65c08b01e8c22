"""
JSON interchange documents and human-readable rendering.

NumberDocument::

    {"n": 2, "rep": "standard", "coeffs": [x0, x1, x2, x12]}
    {"n": 2, "rep": "idempotent", "coeffs": [[re, im], [re, im]]}

Standard coefficients follow the bitmask order of the units; idempotent ones
follow the eps index order. MatrixDocument and KetDocument carry ``n``, ``m``,
``rep`` and ``entries``: a row-major list of coefficient payloads (``m*m`` of
them for a matrix, ``m`` for a ket). A matrix may also give ``entries`` as a
list of rows.

Numbers are written with 17 significant digits; NaN and infinities are
rejected in both directions.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .core import Multicomplex, check_level
from .errors import MulticomplexError
from .hilbert import Ket
from .idempotent import IdempotentRep, from_idempotent, to_idempotent
from .linalg import McMatrix

__all__ = [
    "DocumentError",
    "STANDARD",
    "IDEMPOTENT",
    "loads",
    "dumps",
    "number_to_doc",
    "doc_to_number",
    "matrix_to_doc",
    "doc_to_matrix",
    "ket_to_doc",
    "doc_to_ket",
    "format_real",
    "render_standard",
    "render_idempotent",
]

STANDARD = "standard"
IDEMPOTENT = "idempotent"
_REPS = (STANDARD, IDEMPOTENT)


class DocumentError(MulticomplexError, ValueError):
    """Malformed or inconsistent JSON document."""


def _reject_constant(name):
    raise DocumentError(f"non-finite number {name} is not allowed")


def loads(text):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc


def _num(x):
    x = float(x)
    if not math.isfinite(x):
        raise DocumentError("non-finite number cannot be serialised")
    if x == 0.0:
        return "0"
    return f"{x:.17g}"


def dumps(obj):
    """Compact JSON with 17-significant-digit floats and a trailing newline."""
    return _dump(obj) + "\n"


def _dump(obj):
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_dump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _field(doc, key, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"document is missing {key!r}")
    value = doc[key]
    if kind is not None and (not isinstance(value, kind) or isinstance(value, bool)):
        raise DocumentError(f"{key!r} has the wrong type")
    return value


def _level(doc, minimum=1):
    try:
        return check_level(_field(doc, "n", int), minimum)
    except MulticomplexError as exc:
        raise DocumentError(str(exc)) from exc


def _rep(doc, default=STANDARD):
    rep = doc.get("rep", default) if isinstance(doc, dict) else default
    if rep not in _REPS:
        raise DocumentError(f"unknown rep {rep!r}")
    return rep


def _real(x):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(f"expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise DocumentError("non-finite number is not allowed")
    return x


def _payload(value, level, rep):
    """Decode one coefficient payload to a standard-basis number."""
    if not isinstance(value, list):
        raise DocumentError("coefficient payload must be a list")
    if rep == STANDARD:
        if len(value) != 1 << level:
            raise DocumentError(f"standard payload needs {1 << level} numbers, got {len(value)}")
        return Multicomplex(level, [_real(x) for x in value])
    if level < 2:
        raise DocumentError("idempotent rep needs n >= 2")
    if len(value) != 1 << (level - 1):
        raise DocumentError(
            f"idempotent payload needs {1 << (level - 1)} pairs, got {len(value)}"
        )
    comps = []
    for pair in value:
        if not isinstance(pair, list) or len(pair) != 2:
            raise DocumentError("idempotent components must be [re, im] pairs")
        comps.append(complex(_real(pair[0]), _real(pair[1])))
    return from_idempotent(IdempotentRep(level, comps))


def _idem_payload(value, level, rep):
    """Decode to idempotent components without a standard-basis detour when possible."""
    if rep == IDEMPOTENT:
        _payload(value, level, rep)  # validates
        return np.array([complex(p[0], p[1]) for p in value])
    return to_idempotent(_payload(value, level, rep)).comps


def _encode(x, rep):
    if rep == STANDARD:
        if isinstance(x, IdempotentRep):
            x = from_idempotent(x)
        return [float(c) for c in x.coeffs]
    if isinstance(x, Multicomplex):
        x = to_idempotent(x)
    return [[float(z.real), float(z.imag)] for z in x.comps]


def _encode_comps(comps, rep, level):
    if rep == IDEMPOTENT:
        return [[float(z.real), float(z.imag)] for z in comps]
    return _encode(IdempotentRep(level, comps), STANDARD)


def number_to_doc(x, rep=STANDARD):
    return {"n": x.level, "rep": rep, "coeffs": _encode(x, rep)}


def doc_to_number(doc):
    """Decode a NumberDocument to a standard-basis number."""
    level = _level(doc)
    return _payload(_field(doc, "coeffs", list), level, _rep(doc))


def _dimension(doc):
    m = _field(doc, "m", int)
    if m < 1:
        raise DocumentError("m must be positive")
    return m


def matrix_to_doc(a, rep=IDEMPOTENT):
    entries = [
        _encode_comps(a.slices[:, i, j], rep, a.level) for i in range(a.m) for j in range(a.m)
    ]
    return {"n": a.level, "m": a.m, "rep": rep, "entries": entries}


def _is_nested(entries, rep):
    """True when entries are given as rows of payloads rather than a flat list."""
    probe = entries
    depth = 0
    while isinstance(probe, list) and probe:
        probe = probe[0]
        depth += 1
    # flat standard: [[x, ...]] depth 2; flat idempotent: [[[re, im]]] depth 3
    return depth > (2 if rep == STANDARD else 3)


def doc_to_matrix(doc):
    level = _level(doc, minimum=2)
    m = _dimension(doc)
    rep = _rep(doc)
    entries = _field(doc, "entries", list)
    if _is_nested(entries, rep):
        if len(entries) != m or any(not isinstance(row, list) or len(row) != m for row in entries):
            raise DocumentError(f"matrix needs {m} rows of {m} entries")
        entries = [e for row in entries for e in row]
    if len(entries) != m * m:
        raise DocumentError(f"matrix needs {m * m} entries, got {len(entries)}")
    comps = np.array([_idem_payload(e, level, rep) for e in entries])
    return McMatrix(level, np.transpose(comps.reshape(m, m, -1), (2, 0, 1)))


def ket_to_doc(v, rep=IDEMPOTENT):
    entries = [_encode_comps(v.slices[:, l], rep, v.level) for l in range(v.m)]
    return {"n": v.level, "m": v.m, "rep": rep, "entries": entries}


def doc_to_ket(doc):
    level = _level(doc, minimum=2)
    m = _dimension(doc)
    rep = _rep(doc)
    entries = _field(doc, "entries", list)
    if len(entries) != m:
        raise DocumentError(f"ket needs {m} entries, got {len(entries)}")
    return Ket(level, np.array([_idem_payload(e, level, rep) for e in entries]).T)


# human-readable rendering ----------------------------------------------------


def format_real(x):
    """Six significant digits, no trailing noise."""
    return f"{float(x) + 0.0:.6g}"


def _unit_name(mask):
    return "".join(f"i{k + 1}" for k in range(mask.bit_length()) if mask >> k & 1)


def _join_terms(terms):
    """``terms`` are (negative, text) pairs; joined as ``a + b - c``."""
    if not terms:
        return "0"
    out = ("-" if terms[0][0] else "") + terms[0][1]
    for neg, text in terms[1:]:
        out += (" - " if neg else " + ") + text
    return out


def _cutoff(values, tol):
    values = np.abs(np.asarray(values))
    return tol * max(1.0, float(np.max(values)) if values.size else 0.0)


def render_standard(x, tol=1e-12):
    """``x0 + x1·i1 + ...`` with negligible terms dropped."""
    cut = _cutoff(x.coeffs, tol)
    terms = []
    for mask, c in enumerate(x.coeffs):
        if abs(c) <= cut:
            continue
        mag = format_real(abs(c))
        if mask == 0:
            text = mag
        elif mag == "1":
            text = _unit_name(mask)
        else:
            text = f"{mag}·{_unit_name(mask)}"
        terms.append((c < 0, text))
    return _join_terms(terms)


def render_complex(z, tol=1e-12):
    """A complex scalar written with ``i1`` as the imaginary unit."""
    cut = _cutoff([z.real, z.imag], tol)
    re = z.real if abs(z.real) > cut else 0.0
    im = z.imag if abs(z.imag) > cut else 0.0
    terms = []
    if re:
        terms.append((re < 0, format_real(abs(re))))
    if im:
        mag = format_real(abs(im))
        terms.append((im < 0, "i1" if mag == "1" else f"{mag}·i1"))
    return _join_terms(terms)


def render_idempotent(r, tol=1e-12):
    """``z1·ε1 + z2·ε2 + ...`` over the canonical idempotents (1-based labels)."""
    if isinstance(r, Multicomplex):
        r = to_idempotent(r)
    cut = _cutoff(np.abs(r.comps), tol)
    terms = []
    for p, z in enumerate(r.comps):
        if abs(z) <= cut:
            continue
        label = f"ε{p + 1}"
        re = z.real if abs(z.real) > cut else 0.0
        im = z.imag if abs(z.imag) > cut else 0.0
        if not im:
            mag = format_real(abs(re))
            terms.append((re < 0, label if mag == "1" else f"{mag}·{label}"))
        elif not re:
            mag = format_real(abs(im))
            unit = "i1" if mag == "1" else f"{mag}·i1"
            terms.append((im < 0, f"{unit}·{label}"))
        else:
            terms.append((False, f"({render_complex(complex(re, im), tol)})·{label}"))
    return _join_terms(terms)
