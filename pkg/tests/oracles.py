"""Independent reference computations used to freeze expected values.

Field arithmetic comes from sympy's dense GF(p)[x] routines; geometry is
brute force over all coordinate triples.  Nothing here imports pglab.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_add, gf_irreducible_p, gf_mul, gf_rem


def _to_poly(a: int, p: int, h: int) -> list[int]:
    ds = []
    for _ in range(h):
        a, d = divmod(a, p)
        ds.append(d)
    high = list(reversed(ds))
    while high and high[0] == 0:
        high.pop(0)
    return high


def _from_poly(f: list[int], p: int) -> int:
    out = 0
    for c in f:
        out = out * p + int(c) % p
    return out


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, h: int) -> tuple[int, ...]:
    """Lex-smallest monic irreducible, most significant coefficient first,
    returned constant term first."""
    for low in itertools.product(range(p), repeat=h):
        high_first = [1] + list(low)
        if gf_irreducible_p([ZZ(c) for c in high_first], p, ZZ):
            return tuple(reversed(high_first))
    raise AssertionError("no irreducible found")


class OracleField:
    def __init__(self, p: int, h: int, modulus_low_first: tuple[int, ...] | None = None):
        self.p, self.h, self.q = p, h, p**h
        mod = modulus_low_first or (smallest_irreducible(p, h) if h > 1 else (0, 1))
        self.mod = [ZZ(c) for c in reversed(mod)]
        self._mul = {}

    def add(self, a: int, b: int) -> int:
        p, h = self.p, self.h
        return _from_poly(gf_add(_to_poly(a, p, h), _to_poly(b, p, h), p, ZZ), p)

    def mul(self, a: int, b: int) -> int:
        key = (a, b)
        if key not in self._mul:
            p, h = self.p, self.h
            prod = gf_mul(_to_poly(a, p, h), _to_poly(b, p, h), p, ZZ)
            self._mul[key] = _from_poly(gf_rem(prod, self.mod, p, ZZ), p)
        return self._mul[key]

    def neg(self, a: int) -> int:
        p, h = self.p, self.h
        return _from_poly([(-c) % p for c in _to_poly(a, p, h)], p)

    def inv(self, a: int) -> int:
        for b in range(1, self.q):
            if self.mul(a, b) == 1:
                return b
        raise ZeroDivisionError

    def dot(self, u, v) -> int:
        out = 0
        for x, y in zip(u, v):
            out = self.add(out, self.mul(x, y))
        return out


def projective_points(f: OracleField) -> list[tuple[int, int, int]]:
    """Normalized triples, in lexicographic order."""
    seen = set()
    for t in itertools.product(range(f.q), repeat=3):
        if t == (0, 0, 0):
            continue
        lead = next(c for c in t if c)
        s = f.inv(lead)
        seen.add(tuple(f.mul(s, c) for c in t))
    return sorted(seen)


def incident(f: OracleField, point, line) -> bool:
    return f.dot(point, line) == 0


def line_weight(f: OracleField, line, weights: dict) -> int:
    """Weighted size of line cap M (weights keyed by point triple), mod p."""
    return sum(w for P, w in weights.items() if incident(f, P, line)) % f.p


def codeword_dimension_prime(p: int) -> int:
    """Known dimension of the code of lines of PG(2, p), p prime."""
    return (p + 1) * p // 2 + 1
