"""Arithmetic in GF(p^h).

Elements are integers in ``[0, q-1]``; the base-p digits of an element,
least significant first, are its coefficients in the polynomial basis
``1, x, ..., x^(h-1)`` modulo a monic irreducible polynomial of degree h.
The prime subfield GF(p) is therefore the set of encodings ``0..p-1``, and
on it field arithmetic is plain arithmetic mod p.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

TABLE_LIMIT = 256


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, h) with q = p^h, or raise FieldError."""
    for p in range(2, q + 1):
        if q % p == 0:
            h, r = 0, q
            while r % p == 0:
                r //= p
                h += 1
            if r != 1:
                raise FieldError(f"{q} is not a prime power")
            return p, h
    raise FieldError(f"{q} is not a prime power")


# ---------- polynomials over GF(p), coefficient lists constant term first ----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    m = _trim([x % p for x in m])
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        f = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_mod(out, m, p)


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Irreducibility of a polynomial over GF(p).

    Degree <= 3 uses the root test; otherwise gcd(f, X^(p^i) - X) must be 1
    for every i <= deg/2.
    """
    f = _trim([c % p for c in modulus])
    h = len(f) - 1
    if h < 1:
        return False
    if h == 1:
        return True
    if h <= 3:
        for x in range(p):
            if sum(c * pow(x, i, p) for i, c in enumerate(f)) % p == 0:
                return False
        return True
    xpow = [0, 1]
    for _ in range(h // 2):
        # xpow <- xpow^p mod f
        acc = [1]
        base = xpow
        e = p
        while e:
            if e & 1:
                acc = _poly_mulmod(acc, base, f, p)
            base = _poly_mulmod(base, base, f, p)
            e >>= 1
        xpow = acc
        g = _poly_gcd(f, _poly_sub(xpow, [0, 1], p), p)
        if len(g) > 1:
            return False
    return True


def default_modulus(p: int, h: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree h.

    Coefficients are compared most significant first, so the search walks
    the lower coefficients (x^(h-1) down to the constant) in odometer order.
    """
    for high_first in itertools.product(range(p), repeat=h):
        coeffs = tuple(reversed(high_first)) + (1,)
        if is_irreducible(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {h} over GF({p})")


class Field:
    """GF(p^h) with elements encoded as integers.

    For q <= 256 full addition, multiplication and inverse tables are
    precomputed; the vectorised ``vadd``/``vmul`` helpers index them directly.
    """

    def __init__(self, p: int, h: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"p={p} is not prime")
        if h < 1:
            raise FieldError(f"h={h} must be positive")
        if h == 1:
            modulus = (0, 1)
        elif modulus is None:
            modulus = default_modulus(p, h)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            modulus = tuple(_trim(list(modulus)))
            if len(modulus) != h + 1:
                raise FieldError(f"modulus has degree {len(modulus) - 1}, expected {h}")
            if modulus[-1] != 1:
                raise FieldError("modulus must be monic")
            if not is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.h = h
        self.q = p**h
        self.modulus: tuple[int, ...] = tuple(modulus)
        self._tables = self.q <= TABLE_LIMIT
        if self._tables:
            self._build_tables()

    def __repr__(self) -> str:
        return f"Field(p={self.p}, h={self.h}, modulus={self.modulus})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.p, self.h, self.modulus) == (
            other.p,
            other.h,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.h, self.modulus))

    # ---------- encoding ----------

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.h):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def from_digits(self, ds: Iterable[int]) -> int:
        ds = list(ds)
        if len(ds) > self.h:
            raise FieldError(f"too many digits for GF({self.q})")
        return sum((d % self.p) * self.p**i for i, d in enumerate(ds))

    def elements(self) -> range:
        return range(self.q)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of GF({self.q})")
        return a

    # ---------- raw arithmetic ----------

    def _add_raw(self, a: int, b: int) -> int:
        if self.h == 1:
            return (a + b) % self.p
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def _neg_raw(self, a: int) -> int:
        if self.h == 1:
            return -a % self.p
        return self.from_digits(-x for x in self.digits(a))

    def _mul_raw(self, a: int, b: int) -> int:
        if self.h == 1:
            return a * b % self.p
        prod = _poly_mulmod(self.digits(a), self.digits(b), self.modulus, self.p)
        return self.from_digits(prod)

    def _build_tables(self) -> None:
        q = self.q
        els = range(q)
        self.add_table = np.array([[self._add_raw(a, b) for b in els] for a in els], dtype=np.int64)
        self.mul_table = np.array([[self._mul_raw(a, b) for b in els] for a in els], dtype=np.int64)
        self.neg_table = np.array([self._neg_raw(a) for a in els], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            row = self.mul_table[a]
            inv[a] = int(np.nonzero(row == 1)[0][0])
        self.inv_table = inv

    # ---------- public scalar API ----------

    def add(self, a: int, b: int) -> int:
        if self._tables:
            return int(self.add_table[a, b])
        return self._add_raw(a, b)

    def neg(self, a: int) -> int:
        if self._tables:
            return int(self.neg_table[a])
        return self._neg_raw(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._tables:
            return int(self.mul_table[a, b])
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self._tables:
            return int(self.inv_table[a])
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        """Square-and-multiply; ``pow(0, 0) == 1``."""
        if n < 0:
            if a == 0:
                raise ZeroDivisionError("negative power of 0")
            a, n = self.inv(a), -n
        result, base = 1, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def scalar(self, n: int) -> int:
        """The image of the integer n in the prime subfield."""
        return n % self.p

    # ---------- vectorised helpers ----------

    def vadd(self, a, b) -> np.ndarray:
        if self._tables:
            return self.add_table[a, b]
        return np.vectorize(self._add_raw, otypes=[np.int64])(a, b)

    def vneg(self, a) -> np.ndarray:
        if self._tables:
            return self.neg_table[a]
        return np.vectorize(self._neg_raw, otypes=[np.int64])(a)

    def vmul(self, a, b) -> np.ndarray:
        if self._tables:
            return self.mul_table[a, b]
        return np.vectorize(self._mul_raw, otypes=[np.int64])(a, b)

    def vinv(self, a) -> np.ndarray:
        if self._tables:
            a = np.asarray(a)
            if np.any(a == 0):
                raise ZeroDivisionError("0 has no inverse")
            return self.inv_table[a]
        return np.vectorize(self.inv, otypes=[np.int64])(a)


@lru_cache(maxsize=None)
def _cached_field(p: int, h: int, modulus: tuple[int, ...] | None) -> Field:
    return Field(p, h, modulus)


def create_field(p: int, h: int = 1, modulus: Sequence[int] | None = None) -> Field:
    """Return the (cached) field GF(p^h) with the given or default modulus."""
    if h == 1:
        modulus = None
    elif modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    return _cached_field(p, h, modulus)


def parse_modulus(text: str) -> tuple[int, ...] | None:
    """Parse "c0,c1,...,ch" (constant term first); "" or "-" means default."""
    text = text.strip()
    if text in ("", "-"):
        return None
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise FieldError(f"bad modulus {text!r}") from exc


def format_modulus(field: Field) -> str:
    if field.h == 1:
        return "-"
    return ",".join(str(c) for c in field.modulus)
