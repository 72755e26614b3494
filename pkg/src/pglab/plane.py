"""The Desarguesian projective plane PG(2, q).

Points and lines share one canonical enumeration: normalized coordinate
triples (leftmost nonzero entry 1) in lexicographic order of their
encodings,

    (0,0,1), (0,1,0), ..., (0,1,q-1), (1,0,0), ..., (1,q-1,q-1).

A triple read as a line is its dual coordinate vector, and P lies on l iff
P . l = 0.  Since that relation is symmetric, the point-line incidence
matrix is symmetric under the shared enumeration, so the dual plane is the
same object with the roles of the two index sets exchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .field import Field

Triple = tuple[int, int, int]


class PlaneError(ValueError):
    pass


def normalize(field: Field, coords: Sequence[int]) -> Triple:
    """Scale a nonzero triple so that its leftmost nonzero entry is 1."""
    x = [field.check(int(c)) for c in coords]
    if len(x) != 3:
        raise PlaneError(f"expected 3 coordinates, got {len(x)}")
    for c in x:
        if c:
            s = field.inv(c)
            return tuple(field.mul(s, v) for v in x)  # type: ignore[return-value]
    raise PlaneError("the zero triple is not a projective point")


def cross(field: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    m, s = field.mul, field.sub
    return [
        s(m(a[1], b[2]), m(a[2], b[1])),
        s(m(a[2], b[0]), m(a[0], b[2])),
        s(m(a[0], b[1]), m(a[1], b[0])),
    ]


def dot(field: Field, a: Sequence[int], b: Sequence[int]) -> int:
    out = 0
    for x, y in zip(a, b):
        out = field.add(out, field.mul(x, y))
    return out


def normalize_array(field: Field, coords: np.ndarray) -> np.ndarray:
    """Row-wise ``normalize`` of an (n, 3) array; rows must be nonzero."""
    coords = np.asarray(coords, dtype=np.int64)
    nz = coords != 0
    if not nz.any(axis=1).all():
        raise PlaneError("zero triple in array")
    lead = coords[np.arange(len(coords)), nz.argmax(axis=1)]
    scale = field.vinv(lead)
    return field.vmul(coords, scale[:, None])


class Plane:
    """PG(2, q): canonical enumerations and incidence tables.

    ``line_points[l]`` lists the q+1 point indices on line l in increasing
    order, and ``point_lines[P]`` the q+1 lines through P.  Because the
    incidence matrix is symmetric, the two tables coincide.
    """

    def __init__(self, field: Field):
        self.field = field
        q = field.q
        self.q = q
        self.p = field.p
        self.n = q * q + q + 1
        pts = [(0, 0, 1)] + [(0, 1, z) for z in range(q)]
        pts += [(1, y, z) for y in range(q) for z in range(q)]
        self.points = np.array(pts, dtype=np.int64)
        self.points.setflags(write=False)
        x0, x1, x2 = self.points.T
        rows = []
        for a, b, c in pts:
            s = field.vadd(field.vadd(field.vmul(a, x0), field.vmul(b, x1)), field.vmul(c, x2))
            rows.append(np.nonzero(s == 0)[0])
        self.line_points = np.array(rows, dtype=np.int64)
        self.line_points.setflags(write=False)
        self.point_lines = self.line_points

    def __repr__(self) -> str:
        return f"Plane(q={self.q})"

    @property
    def lines(self) -> np.ndarray:
        return self.points

    # ---------- indexing ----------

    def _index_normalized(self, t: Sequence[int]) -> int:
        q = self.q
        if t[0] == 1:
            return 1 + q + t[1] * q + t[2]
        if t[1] == 1:
            return 1 + t[2]
        return 0

    def index(self, coords: Sequence[int]) -> int:
        """Index of the point (or line) with the given homogeneous coordinates."""
        return self._index_normalized(normalize(self.field, coords))

    point_index = index
    line_index = index

    def index_array(self, coords: np.ndarray) -> np.ndarray:
        t = normalize_array(self.field, coords)
        q = self.q
        return np.where(t[:, 0] == 1, 1 + q + t[:, 1] * q + t[:, 2], np.where(t[:, 1] == 1, 1 + t[:, 2], 0))

    def coords(self, i: int) -> Triple:
        return tuple(int(v) for v in self.points[i])  # type: ignore[return-value]

    # ---------- incidence ----------

    @cached_property
    def incidence(self) -> np.ndarray:
        """Dense (lines x points) 0/1 matrix."""
        m = np.zeros((self.n, self.n), dtype=np.uint8)
        m[np.repeat(np.arange(self.n), self.q + 1), self.line_points.ravel()] = 1
        return m

    @cached_property
    def _line_sets(self) -> list[frozenset[int]]:
        return [frozenset(int(i) for i in row) for row in self.line_points]

    def incident(self, point: int, line: int) -> bool:
        return point in self._line_sets[line]

    def points_on(self, line: int) -> np.ndarray:
        return self.line_points[line]

    def lines_through(self, point: int) -> np.ndarray:
        return self.point_lines[point]

    def join(self, a: int, b: int) -> int:
        """The line through two distinct points (given by index)."""
        if a == b:
            raise PlaneError("join of a point with itself")
        return self.index(cross(self.field, self.points[a], self.points[b]))

    def meet(self, a: int, b: int) -> int:
        """The intersection point of two distinct lines (given by index)."""
        if a == b:
            raise PlaneError("meet of a line with itself")
        return self.index(cross(self.field, self.points[a], self.points[b]))

    def collinear(self, a: int, b: int, c: int) -> bool:
        if len({a, b, c}) < 3:
            return True
        return self.incident(c, self.join(a, b))


@lru_cache(maxsize=16)
def build_plane(field: Field) -> Plane:
    return Plane(field)


# ---------- collineations ----------

def _det3(f: Field, m: Sequence[Sequence[int]]) -> int:
    a = f.mul(m[0][0], f.sub(f.mul(m[1][1], m[2][2]), f.mul(m[1][2], m[2][1])))
    b = f.mul(m[0][1], f.sub(f.mul(m[1][0], m[2][2]), f.mul(m[1][2], m[2][0])))
    c = f.mul(m[0][2], f.sub(f.mul(m[1][0], m[2][1]), f.mul(m[1][1], m[2][0])))
    return f.add(f.sub(a, b), c)


def _inverse3(f: Field, m: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    d = _det3(f, m)
    if d == 0:
        raise PlaneError("singular matrix")
    di = f.inv(d)
    cols = [[m[r][c] for r in range(3)] for c in range(3)]
    # rows of the inverse are cross products of the columns of m
    adj = [cross(f, cols[1], cols[2]), cross(f, cols[2], cols[0]), cross(f, cols[0], cols[1])]
    return tuple(tuple(f.mul(di, v) for v in row) for row in adj)


def _matvec(f: Field, m: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [dot(f, row, v) for row in m]


@dataclass(frozen=True)
class Collineation:
    """x -> M x on points; lines transform by the inverse transpose."""

    plane: Plane
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if _det3(self.plane.field, self.matrix) == 0:
            raise PlaneError("collineation matrix is singular")

    @classmethod
    def identity(cls, plane: Plane) -> "Collineation":
        return cls(plane, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def from_frame(cls, plane: Plane, images: Sequence[int]) -> "Collineation":
        """The collineation sending (0,0,1), (0,1,0), (1,0,0), (1,1,1) to the
        four given point indices, which must be in general position."""
        if len(images) != 4:
            raise PlaneError("a frame has four points")
        f = plane.field
        a, b, c, d = (plane.points[i] for i in images)
        # d = alpha*c + beta*b + gamma*a
        basis = [[int(c[r]), int(b[r]), int(a[r])] for r in range(3)]
        if _det3(f, basis) == 0:
            raise PlaneError("frame points are not in general position")
        coef = _matvec(f, _inverse3(f, basis), [int(v) for v in d])
        if 0 in coef:
            raise PlaneError("frame points are not in general position")
        alpha, beta, gamma = coef
        cols = [[f.mul(alpha, int(v)) for v in c], [f.mul(beta, int(v)) for v in b], [f.mul(gamma, int(v)) for v in a]]
        return cls(plane, tuple(tuple(cols[j][r] for j in range(3)) for r in range(3)))

    @classmethod
    def random(cls, plane: Plane, rng: np.random.Generator) -> "Collineation":
        """Uniform over PGL(3, q): a uniformly random ordered frame image."""
        while True:
            pts = [int(i) for i in rng.integers(0, plane.n, size=4)]
            try:
                return cls.from_frame(plane, pts)
            except PlaneError:
                continue

    @cached_property
    def inverse(self) -> "Collineation":
        return Collineation(self.plane, _inverse3(self.plane.field, self.matrix))

    @cached_property
    def _line_matrix(self) -> tuple[tuple[int, ...], ...]:
        inv = _inverse3(self.plane.field, self.matrix)
        return tuple(tuple(inv[c][r] for c in range(3)) for r in range(3))

    def compose(self, other: "Collineation") -> "Collineation":
        """self after other."""
        f = self.plane.field
        cols = [_matvec(f, self.matrix, [other.matrix[r][c] for r in range(3)]) for c in range(3)]
        return Collineation(self.plane, tuple(tuple(cols[c][r] for c in range(3)) for r in range(3)))

    def apply_point(self, point: int) -> int:
        return self.plane.index(_matvec(self.plane.field, self.matrix, self.plane.points[point]))

    def apply_line(self, line: int) -> int:
        return self.plane.index(_matvec(self.plane.field, self._line_matrix, self.plane.points[line]))

    def _permutation(self, m) -> np.ndarray:
        f, pts = self.plane.field, self.plane.points
        rows = []
        for r in range(3):
            acc = f.vmul(m[r][0], pts[:, 0])
            acc = f.vadd(acc, f.vmul(m[r][1], pts[:, 1]))
            acc = f.vadd(acc, f.vmul(m[r][2], pts[:, 2]))
            rows.append(acc)
        return self.plane.index_array(np.stack(rows, axis=1))

    @cached_property
    def point_permutation(self) -> np.ndarray:
        """``perm[i]`` is the index of the image of point i."""
        perm = self._permutation(self.matrix)
        perm.setflags(write=False)
        return perm

    @cached_property
    def line_permutation(self) -> np.ndarray:
        perm = self._permutation(self._line_matrix)
        perm.setflags(write=False)
        return perm

    def map_points(self, points) -> np.ndarray:
        """Images of the given point indices, computed without building the
        full permutation."""
        f, pts = self.plane.field, self.plane.points[np.asarray(points, dtype=np.int64)]
        m = self.matrix
        cols = []
        for r in range(3):
            acc = f.vmul(m[r][0], pts[:, 0])
            acc = f.vadd(acc, f.vmul(m[r][1], pts[:, 1]))
            acc = f.vadd(acc, f.vmul(m[r][2], pts[:, 2]))
            cols.append(acc)
        return self.plane.index_array(np.stack(cols, axis=1))

    def apply_vector(self, values: np.ndarray) -> np.ndarray:
        """Move a point-indexed vector along the collineation: out[T(P)] = v[P]."""
        out = np.empty_like(values)
        out[self.point_permutation] = values
        return out
