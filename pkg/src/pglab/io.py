"""Text formats for multisets and codewords.

Multiset::

    pg-multiset v1
    p=3 h=1 modulus=- k=1
    x0 x1 x2 w
    ...

Codeword::

    pg-codeword v1
    p=19 h=1 modulus=-
    x0 x1 x2 value
    ...

Coordinates are field-element encodings and are normalized on input.
Unlisted points are 0 and duplicate rows add up mod p.  Blank lines and
lines starting with '#' are ignored.  ``modulus`` is comma-separated,
constant term first; '-' (or h=1) selects the default.
"""

from __future__ import annotations

from typing import Iterable, TextIO

import numpy as np

from .code import Codeword
from .field import Field, FieldError, create_field, format_modulus, parse_modulus
from .multiset import WeightedMultiset
from .plane import Plane, PlaneError, build_plane

MULTISET_HEADER = "pg-multiset v1"
CODEWORD_HEADER = "pg-codeword v1"


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _content(lines: Iterable[str]):
    for no, raw in enumerate(lines, 1):
        s = raw.strip()
        if s and not s.startswith("#"):
            yield no, s


def _params(no: int, text: str, required: tuple[str, ...]) -> dict[str, str]:
    out = {}
    for tok in text.split():
        if "=" not in tok:
            raise ParseError(no, f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        out[key] = val
    missing = [k for k in required if k not in out]
    if missing:
        raise ParseError(no, f"missing {', '.join(missing)}")
    return out


def _field(no: int, params: dict[str, str]) -> Field:
    try:
        return create_field(int(params["p"]), int(params["h"]), parse_modulus(params.get("modulus", "-")))
    except (ValueError, FieldError) as exc:
        raise ParseError(no, str(exc)) from exc


def _rows(plane: Plane, body) -> np.ndarray:
    vals = np.zeros(plane.n, dtype=np.int64)
    for no, s in body:
        toks = s.split()
        if len(toks) != 4:
            raise ParseError(no, f"expected 'x0 x1 x2 value', got {s!r}")
        try:
            x = [int(t) for t in toks]
            idx = plane.index(x[:3])
        except (ValueError, FieldError, PlaneError) as exc:
            raise ParseError(no, str(exc)) from exc
        vals[idx] += x[3]
    return vals % plane.p


def _split(lines: Iterable[str], header: str):
    body = _content(lines)
    first = next(body, None)
    if first is None or first[1] != header:
        raise ParseError(first[0] if first else 1, f"expected header {header!r}")
    second = next(body, None)
    if second is None:
        raise ParseError(first[0] + 1, "missing parameter line")
    return second, body


def read_multiset(lines: Iterable[str]) -> tuple[WeightedMultiset, int]:
    (no, text), body = _split(lines, MULTISET_HEADER)
    params = _params(no, text, ("p", "h", "k"))
    plane = build_plane(_field(no, params))
    try:
        k = int(params["k"])
    except ValueError as exc:
        raise ParseError(no, "k must be an integer") from exc
    if not 0 <= k < plane.p:
        raise ParseError(no, f"k={k} is not a residue mod {plane.p}")
    return WeightedMultiset(plane, _rows(plane, body)), k


def read_codeword(lines: Iterable[str]) -> Codeword:
    (no, text), body = _split(lines, CODEWORD_HEADER)
    params = _params(no, text, ("p", "h"))
    plane = build_plane(_field(no, params))
    return Codeword(plane, _rows(plane, body))


def _field_line(f: Field) -> str:
    return f"p={f.p} h={f.h} modulus={format_modulus(f)}"


def _sparse_rows(plane: Plane, values: np.ndarray) -> list[str]:
    return [" ".join(map(str, plane.coords(int(i)))) + f" {int(values[i])}" for i in np.flatnonzero(values)]


def write_multiset(m: WeightedMultiset, k: int, out: TextIO) -> None:
    f = m.plane.field
    out.write(f"{MULTISET_HEADER}\n{_field_line(f)} k={k}\n")
    for row in _sparse_rows(m.plane, m.weights):
        out.write(row + "\n")


def write_codeword(c: Codeword, out: TextIO) -> None:
    out.write(f"{CODEWORD_HEADER}\n{_field_line(c.plane.field)}\n")
    for row in _sparse_rows(c.plane, c.values):
        out.write(row + "\n")


def dense(c: Codeword) -> str:
    """All q^2+q+1 values in canonical point order, space separated."""
    return " ".join(str(int(v)) for v in c.values)
