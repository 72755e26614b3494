"""Weighted multisets of points, their secant spectra and index diagnostics.

Weights live in Z_p.  For a residue k, a line is a *k-secant* when the
weights of its points sum to k mod p and a *bad* line otherwise; the index
of a point is the number of bad lines through it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, NamedTuple

import numpy as np

from .plane import Collineation, Plane, PlaneError


class MultisetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WeightedMultiset:
    plane: Plane
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.int64) % self.plane.p
        if w.shape != (self.plane.n,):
            raise MultisetError(f"expected {self.plane.n} weights, got shape {w.shape}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def empty(cls, plane: Plane) -> "WeightedMultiset":
        return cls(plane, np.zeros(plane.n, dtype=np.int64))

    @classmethod
    def from_points(cls, plane: Plane, weights: Mapping[int, int]) -> "WeightedMultiset":
        w = np.zeros(plane.n, dtype=np.int64)
        for i, v in weights.items():
            w[i] += v
        return cls(plane, w)

    @classmethod
    def from_lines(cls, plane: Plane, coefficients: Mapping[int, int]) -> "WeightedMultiset":
        """Sum of lines (as point sets) with the given coefficients.

        Every line meets every line in 1 or q+1 = 1 (mod p) points, so the
        result is a k mod p multiset with k the coefficient sum.
        """
        w = np.zeros(plane.n, dtype=np.int64)
        for line, c in coefficients.items():
            w[plane.line_points[line]] += c
        return cls(plane, w)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeightedMultiset)
            and other.plane is self.plane
            and np.array_equal(other.weights, self.weights)
        )

    def __hash__(self):
        return hash(self.weights.tobytes())

    @property
    def total(self) -> int:
        """|M| mod p."""
        return int(self.weights.sum() % self.plane.p)

    @property
    def support(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.weights)[0]]

    def add(self, point: int, amount: int) -> "WeightedMultiset":
        w = self.weights.copy()
        w[point] += amount
        return WeightedMultiset(self.plane, w)

    def changed_points(self, other: "WeightedMultiset") -> int:
        return int(np.count_nonzero(self.weights != other.weights))


@dataclass(frozen=True, eq=False)
class SecantSpectrum:
    k: int
    residues: np.ndarray
    delta: int
    indices: np.ndarray

    @property
    def bad(self) -> np.ndarray:
        return self.residues != self.k

    def bad_lines(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.bad)[0]]


def secant_spectrum(m: WeightedMultiset, k: int) -> SecantSpectrum:
    plane = m.plane
    if not 0 <= k < plane.p:
        raise MultisetError(f"k={k} is not a residue mod {plane.p}")
    residues = m.weights[plane.line_points].sum(axis=1) % plane.p
    bad = residues != k
    indices = bad[plane.point_lines].sum(axis=1)
    residues.setflags(write=False)
    indices.setflags(write=False)
    return SecantSpectrum(k, residues, int(bad.sum()), indices)


# ---------- affine chart ----------

class AffineChart:
    """Affine coordinates with a chosen line at infinity.

    The chart frame maps (0,0,1) to a point O off the ideal line, (0,1,0) to
    the ideal point (inf) and (1,0,0) to another ideal point R; its fourth
    point U is the first point off the ideal line not on O(inf) or OR.  In
    chart coordinates the ideal line is X2 = 0, the affine point (a, b) is
    (a, b, 1), the ideal point of slope m is (1, m, 0), (inf) is (0, 1, 0),
    and the line Y = yX + x has dual coordinates [y, -1, x].

    O, R and U are the canonically first admissible choices.  When
    ``infinity`` is not given, (inf) is the first point of the ideal line
    with zero weight in ``weights`` (or its first point if there is none).
    """

    def __init__(self, plane: Plane, ideal_line: int, infinity: int | None = None, weights=None):
        self.plane = plane
        self.ideal_line = ideal_line
        on = [int(i) for i in plane.line_points[ideal_line]]
        if infinity is None:
            infinity = on[0]
            if weights is not None:
                zero = [i for i in on if weights[i] == 0]
                if zero:
                    infinity = zero[0]
        elif infinity not in on:
            raise PlaneError("(inf) must lie on the ideal line")
        self.infinity = infinity
        r = next(i for i in on if i != infinity)
        on_set = set(on)
        o = next(i for i in range(plane.n) if i not in on_set)
        l1 = set(int(i) for i in plane.line_points[plane.join(o, infinity)])
        l2 = set(int(i) for i in plane.line_points[plane.join(o, r)])
        u = next(i for i in range(plane.n) if i not in on_set and i not in l1 and i not in l2)
        self.to_plane = Collineation.from_frame(plane, [o, infinity, r, u])
        self.from_plane = self.to_plane.inverse
        self._classify_points()

    def _classify_points(self) -> None:
        plane, f = self.plane, self.plane.field
        m = self.from_plane.matrix
        pts = plane.points
        img = []
        for r in range(3):
            acc = f.vmul(m[r][0], pts[:, 0])
            acc = f.vadd(acc, f.vmul(m[r][1], pts[:, 1]))
            img.append(f.vadd(acc, f.vmul(m[r][2], pts[:, 2])))
        x0, x1, x2 = img
        affine = x2 != 0
        self.affine_mask = affine
        self.a = np.zeros(plane.n, dtype=np.int64)
        self.b = np.zeros(plane.n, dtype=np.int64)
        inv2 = f.vinv(x2[affine])
        self.a[affine] = f.vmul(x0[affine], inv2)
        self.b[affine] = f.vmul(x1[affine], inv2)
        ideal = ~affine & (x0 != 0)
        self.ideal_mask = ideal
        self.slope = np.full(plane.n, -1, dtype=np.int64)
        self.slope[ideal] = f.vmul(x1[ideal], f.vinv(x0[ideal]))
        self._ideal_by_slope = np.zeros(plane.q, dtype=np.int64)
        self._ideal_by_slope[self.slope[ideal]] = np.nonzero(ideal)[0]

    def ideal_point(self, y: int) -> int:
        """Plane index of the ideal point (y)."""
        return int(self._ideal_by_slope[y])

    def affine_line(self, x: int, y: int) -> int:
        """Plane index of the line Y = yX + x."""
        f = self.plane.field
        return self.plane.index(_transpose_apply(f, self.from_plane.matrix, [y, f.neg(1), x]))

    def affine_point(self, a: int, b: int) -> int:
        plane = self.plane
        return plane.index(_matvec(plane.field, self.to_plane.matrix, [a, b, 1]))


def _matvec(f, m, v):
    out = []
    for row in m:
        acc = 0
        for x, y in zip(row, v):
            acc = f.add(acc, f.mul(x, int(y)))
        out.append(acc)
    return out


def _transpose_apply(f, m, v):
    # lines follow points by the inverse transpose; plane line = T^t * chart line
    mt = [[m[c][r] for c in range(3)] for r in range(3)]
    return _matvec(f, mt, v)


# ---------- the polynomial g ----------

def _require_ksecant(m: WeightedMultiset, k: int, ideal_line: int) -> None:
    plane = m.plane
    r = int(m.weights[plane.line_points[ideal_line]].sum() % plane.p)
    if r != k:
        raise MultisetError(f"line {ideal_line} meets M in {r} mod {plane.p}, not a {k}-secant")


class _GData:
    """Per-(M, chart) cached data for evaluating g."""

    def __init__(self, m: WeightedMultiset, chart: AffineChart):
        f = m.plane.field
        w = m.weights
        aff = chart.affine_mask & (w != 0)
        self.wa = w[aff]
        self.a = chart.a[aff]
        self.negb = f.vneg(chart.b[aff])
        ide = chart.ideal_mask & (w != 0)
        self.wi = w[ide]
        self.negy = f.vneg(chart.slope[ide])
        self.winf = int(w[chart.infinity])
        # t -> t^(q-1), the indicator of t != 0
        self.powtab = np.array([f.pow(t, f.q - 1) for t in range(f.q)], dtype=np.int64)
        assert set(self.powtab.tolist()) <= {0, 1}


def _g_row(m: WeightedMultiset, k: int, data: _GData, y: int, xs: np.ndarray) -> np.ndarray:
    """g(x, y) for each x in xs, as residues mod p.

    g(X, Y) = sum_v w_v (X + a_v Y - b_v)^(q-1) + sum_i w_i (Y - y_i)^(q-1)
              + w_inf - |M| + k

    (inf) sits on no non-vertical line, so its weight enters as the constant
    w_inf; with w_inf = 0 this is the unweighted formula term by term.
    """
    f, p = m.plane.field, m.plane.p
    ay_minus_b = f.vadd(f.vmul(data.a, y), data.negb)
    args = f.vadd(np.asarray(xs)[None, :], ay_minus_b[:, None])
    first = (data.wa[:, None] * data.powtab[args]).sum(axis=0)
    second = int((data.wi * data.powtab[f.vadd(y, data.negy)]).sum()) if len(data.wi) else 0
    return (first + second + data.winf - m.total + k) % p


def g_eval(m: WeightedMultiset, k: int, ideal_line: int, x: int, y: int, chart: AffineChart | None = None) -> int:
    """Value of g(x, y), which equals k - |l cap M| mod p for l: Y = yX + x."""
    _require_ksecant(m, k, ideal_line)
    chart = chart or AffineChart(m.plane, ideal_line, weights=m.weights)
    data = _GData(m, chart)
    return int(_g_row(m, k, data, y, np.array([x]))[0])


def g_table(m: WeightedMultiset, k: int, ideal_line: int, chart: AffineChart | None = None, ys=None) -> np.ndarray:
    """g over the whole affine grid: ``out[y, x] = g(x, y)``."""
    _require_ksecant(m, k, ideal_line)
    chart = chart or AffineChart(m.plane, ideal_line, weights=m.weights)
    data = _GData(m, chart)
    q = m.plane.q
    ys = range(q) if ys is None else ys
    xs = np.arange(q)
    return np.array([_g_row(m, k, data, y, xs) for y in ys])


class GcdCheck(NamedTuple):
    gcd_degree: int
    s: int
    agree: bool


def gcd_degree_check(
    m: WeightedMultiset, k: int, ideal_line: int, y: int, chart: AffineChart | None = None
) -> GcdCheck:
    """Compare deg gcd(g(X, y), X^q - X) with the bad affine lines through (y).

    X^q - X is the product of (X - x) over GF(q), so the gcd degree is the
    number of roots of g(X, y) in GF(q).
    """
    chart = chart or AffineChart(m.plane, ideal_line, weights=m.weights)
    row = g_table(m, k, ideal_line, chart, ys=[y])[0]
    roots = int(np.count_nonzero(row == 0))
    spec = secant_spectrum(m, k)
    # the ideal line is a k-secant, so every bad line through (y) is affine
    s = int(spec.indices[chart.ideal_point(y)])
    return GcdCheck(roots, s, roots == m.plane.q - s)


class HnCheck(NamedTuple):
    s: int
    n: dict[int, int]
    holds: bool


def hn_inequality_check(
    m: WeightedMultiset, k: int, ideal_line: int, chart: AffineChart | None = None
) -> HnCheck:
    """sum_h h*n_h <= s(s-1) for the ideal point of largest index.

    s is the largest index among ideal points other than (inf), and n_h the
    number of those ideal points with index s - h.
    """
    _require_ksecant(m, k, ideal_line)
    chart = chart or AffineChart(m.plane, ideal_line, weights=m.weights)
    spec = secant_spectrum(m, k)
    idx = [int(spec.indices[chart.ideal_point(y)]) for y in range(m.plane.q)]
    s = max(idx)
    n = {h: sum(1 for v in idx if v == s - h) for h in range(1, s + 1)}
    lhs = sum(h * c for h, c in n.items())
    return HnCheck(s, n, lhs <= s * (s - 1))


# ---------- thresholds ----------

@dataclass(frozen=True)
class IndexThresholds:
    q: int
    delta: int
    small_bound: Fraction
    large_bound: Fraction
    general_ok: bool
    lemma_small: Fraction | None = None
    lemma_large: Fraction | None = None
    lemma_ok: bool = False
    flags: dict = dc_field(default_factory=dict)

    def in_gap(self, index: int) -> bool:
        return self.small_bound < index < self.large_bound


def sqrt_floor(q: int) -> int:
    return math.isqrt(q)


def lemma_delta_bound(q: int) -> int:
    """(floor(sqrt q) + 1)(q + 1 - floor(sqrt q))."""
    r = math.isqrt(q)
    return (r + 1) * (q + 1 - r)


def index_thresholds(q: int, delta: int) -> IndexThresholds:
    """Exact bounds separating small and large point indices.

    Every index is at most ``small_bound`` or at least ``large_bound`` when
    q > 17 and delta < (3/16)(q+1)^2.  The tighter pair ``lemma_small`` /
    ``lemma_large`` applies when delta < (floor(sqrt q)+1)(q+1-floor(sqrt q)).
    Hypotheses are reported in ``flags``, never enforced.
    """
    q1 = q + 1
    small = Fraction(delta, q1) + Fraction(2 * delta * delta, q1**3)
    large = q1 - small
    q_ok = q > 17
    general_hyp = 16 * delta < 3 * q1 * q1
    r = math.isqrt(q)
    lemma_hyp = delta < lemma_delta_bound(q)
    flags = {"q_gt_17": q_ok, "delta_lt_3_16": general_hyp, "delta_lt_lemma_bound": lemma_hyp}
    lemma_small = lemma_large = None
    if lemma_hyp:
        lemma_small = min(Fraction(delta, q1) + 2, Fraction(r + 1))
        lemma_large = max(q1 - (Fraction(delta, q1) + 2), Fraction(q - r))
    return IndexThresholds(
        q, delta, small, large, q_ok and general_hyp, lemma_small, lemma_large, q_ok and lemma_hyp, flags
    )


def index_dichotomy_violations(spec: SecantSpectrum, q: int) -> list[int]:
    """Points whose index falls strictly between the two bounds."""
    th = index_thresholds(q, spec.delta)
    return [i for i, s in enumerate(spec.indices.tolist()) if th.in_gap(s)]


def quadratic_bound_violations(m: WeightedMultiset, k: int) -> list[int]:
    """Points P on some k-secant with q*s - s(s-1) > delta, s = index(P)."""
    plane = m.plane
    spec = secant_spectrum(m, k)
    q = plane.q
    out = []
    for i, s in enumerate(spec.indices.tolist()):
        if s < q + 1 and q * s - s * (s - 1) > spec.delta:
            out.append(i)
    return out
