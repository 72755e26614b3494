"""The p-ary code C1(2, q) spanned by the incidence vectors of lines.

Codewords are dense residue vectors indexed by the canonical point order.
The line-sum functional (sum of a codeword over a line) is constant on C1
and vanishes exactly on the dual code.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .multiset import WeightedMultiset
from .plane import Plane


@dataclass(frozen=True, eq=False)
class Codeword:
    plane: Plane
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64) % self.plane.p
        if v.shape != (self.plane.n,):
            raise ValueError(f"codeword needs {self.plane.n} entries, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls, plane: Plane) -> "Codeword":
        return cls(plane, np.zeros(plane.n, dtype=np.int64))

    @classmethod
    def from_sparse(cls, plane: Plane, entries: Mapping[int, int]) -> "Codeword":
        v = np.zeros(plane.n, dtype=np.int64)
        for i, x in entries.items():
            v[i] += x
        return cls(plane, v)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Codeword) and other.plane is self.plane and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def __add__(self, other: "Codeword") -> "Codeword":
        return Codeword(self.plane, self.values + other.values)

    def __sub__(self, other: "Codeword") -> "Codeword":
        return Codeword(self.plane, self.values - other.values)

    def __neg__(self) -> "Codeword":
        return Codeword(self.plane, -self.values)

    def scale(self, a: int) -> "Codeword":
        return Codeword(self.plane, self.values * a)

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.values))

    @property
    def support(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.values)]

    def sparse(self) -> dict[int, int]:
        return {i: int(self.values[i]) for i in self.support}

    def line_sum(self, line: int) -> int:
        return int(self.values[self.plane.line_points[line]].sum() % self.plane.p)

    def line_sums(self) -> np.ndarray:
        return self.values[self.plane.line_points].sum(axis=1) % self.plane.p

    def is_dual(self) -> bool:
        """Membership in the dual code: every line sum vanishes."""
        return not self.line_sums().any()


def incidence_vector(plane: Plane, line: int) -> Codeword:
    v = np.zeros(plane.n, dtype=np.int64)
    v[plane.line_points[line]] = 1
    return Codeword(plane, v)


def weight(c: Codeword) -> int:
    return c.weight


def support(c: Codeword) -> list[int]:
    return c.support


@dataclass(frozen=True)
class LineCombination:
    """sum over terms of coefficient * incidence vector of the line."""

    terms: dict[int, int]

    def evaluate(self, plane: Plane) -> Codeword:
        v = np.zeros(plane.n, dtype=np.int64)
        for line, c in self.terms.items():
            v[plane.line_points[line]] += c
        return Codeword(plane, v)

    def coefficient_sum(self, p: int) -> int:
        return sum(self.terms.values()) % p


def combination(plane: Plane, terms: Mapping[int, int]) -> Codeword:
    return LineCombination(dict(terms)).evaluate(plane)


class LineCode:
    """Echelon data for C1(2, q) and its dual, built once per plane."""

    def __init__(self, plane: Plane):
        self.plane = plane
        self.p = plane.p
        self.n = plane.n

    @cached_property
    def matrix(self) -> np.ndarray:
        """Generator matrix: one incidence row per line."""
        return self.plane.incidence.astype(np.int64)

    @cached_property
    def _solver(self):
        # [A^t | I] reduced with pivots taken right to left, so that setting
        # the free line coefficients to 0 yields the lexicographically first
        # solution of A^t lam = c.
        n = self.n
        aug = np.concatenate([self.matrix.T, np.eye(n, dtype=np.int64)], axis=1)
        r, piv = linalg.rref(aug, self.p, reverse=True, ncols=n)
        return r[:, n:].copy(), np.array(piv, dtype=np.int64)

    @cached_property
    def basis(self) -> np.ndarray:
        """Reduced echelon basis of C1 (rows)."""
        r, piv = linalg.rref(self.matrix, self.p)
        return r[: len(piv)].copy()

    @cached_property
    def pivots(self) -> list[int]:
        return linalg.rref(self.matrix, self.p)[1]

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    @cached_property
    def dual_basis(self) -> np.ndarray:
        """Basis of the dual code {c : every line sum is 0}."""
        return linalg.nullspace(self.matrix, self.p)

    @property
    def dual_dimension(self) -> int:
        return int(self.dual_basis.shape[0])

    def is_codeword(self, c: Codeword) -> LineCombination | None:
        """A certificate c = sum lam_l v_l, or None if c is not in C1.

        A scalar multiple of a line gets its one-term certificate; any other
        codeword gets the lexicographically first coefficient vector.
        """
        single = _single_line(c)
        if single is not None:
            return single
        e, piv = self._solver
        b = e @ c.values % self.p
        rk = len(piv)
        if b[rk:].any():
            return None
        lam = np.zeros(self.n, dtype=np.int64)
        lam[piv] = b[:rk]
        return LineCombination({int(l): int(lam[l]) for l in np.flatnonzero(lam)})

    def contains(self, c: Codeword) -> bool:
        return self.is_codeword(c) is not None

    def supported_subspace(self, points: Iterable[int]) -> "SupportedSubspace":
        return supported_subspace(self, points)


def _single_line(c: Codeword) -> LineCombination | None:
    plane = c.plane
    supp = np.flatnonzero(c.values)
    if supp.size != plane.q + 1:
        return None
    line = plane.join(int(supp[0]), int(supp[1]))
    if not np.array_equal(plane.line_points[line], supp):
        return None
    vals = c.values[supp]
    if np.any(vals != vals[0]):
        return None
    return LineCombination({line: int(vals[0])})


@lru_cache(maxsize=8)
def line_code(plane: Plane) -> LineCode:
    return LineCode(plane)


@dataclass(frozen=True)
class SupportedSubspace:
    support_constraint: frozenset[int]
    basis: np.ndarray

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    def codewords(self, plane: Plane) -> list[Codeword]:
        return [Codeword(plane, row) for row in self.basis]


def supported_subspace(code: LineCode, points: Iterable[int]) -> SupportedSubspace:
    """Basis of {c in C1 : supp(c) within T}, reduced over the canonical order.

    A combination mu * B of the C1 basis vanishes outside T iff mu is in the
    left kernel of the columns of B outside T.
    """
    t = frozenset(int(i) for i in points)
    p, b = code.p, code.basis
    outside = np.array([i for i in range(code.n) if i not in t], dtype=np.int64)
    if outside.size == 0:
        return SupportedSubspace(t, b.copy())
    mu = linalg.nullspace(b[:, outside].T, p)
    if mu.shape[0] == 0:
        return SupportedSubspace(t, np.zeros((0, code.n), dtype=np.int64))
    vecs = mu @ b % p
    r, piv = linalg.rref(vecs, p)
    return SupportedSubspace(t, r[: len(piv)].copy())


def decompose(c: Codeword, lines: Sequence[int]) -> dict[int, int] | None:
    """Coefficients lam with c = sum lam_i v_{l_i} over the given lines, or None.

    A point lying on exactly one of the lines reads off that line's
    coefficient directly; the candidate is then checked by reconstruction.
    Without such private points a small exact solve is used.
    """
    plane = c.plane
    lines = [int(l) for l in dict.fromkeys(lines)]
    if len(lines) > 4:
        raise ValueError("decompose takes at most 4 lines")
    if not lines:
        return {} if c.weight == 0 else None
    rows = plane.line_points[lines]
    counts = np.zeros(plane.n, dtype=np.int64)
    np.add.at(counts, rows.ravel(), 1)
    coeffs = {}
    for l, row in zip(lines, rows):
        private = row[counts[row] == 1]
        if private.size == 0:
            break
        coeffs[l] = int(c.values[private[0]])
    else:
        if combination(plane, coeffs) == c:
            return coeffs
        return None
    a = np.zeros((plane.n, len(lines)), dtype=np.int64)
    for j, row in enumerate(rows):
        a[row, j] = 1
    x = linalg.solve(a, c.values, plane.p)
    if x is None:
        return None
    return {l: int(v) for l, v in zip(lines, x)}


# ---------- dual plane bridge ----------

def dual_multiset(comb: LineCombination, plane: Plane) -> WeightedMultiset:
    """The line combination read as a point multiset of the dual plane.

    Lines and points share one enumeration with a symmetric incidence, so
    the dual plane reuses ``plane`` with line index l becoming point index l.
    Coordinate P of the codeword is then the weight of the dual line P,
    hence w(c) is the number of non-(0 mod p) secants of the dual multiset.
    """
    return WeightedMultiset.from_points(plane, comb.terms)
